#pragma once

#include <vector>

#include "pvc/core.hpp"
#include "pvc/measure.hpp"

namespace pvc {

struct SourceSet {
    std::vector<Cplx> points;
    std::vector<Cplx> weights;
};

/// Sources from a measure's quadrature nodes (coefficients folded in).
SourceSet gather_sources(const ComplexMeasure& m, int nodes_per_component);

struct TreeParams {
    int order = 12;     // multipole truncation p (>= 4)
    int leaf_cap = 32;  // max sources per leaf (>= 8)
};

/// Quadtree over sources with per-cell truncated Laurent moments of
/// sum w_j/(zeta_j - z) about the cell center.
class EvalTree {
public:
    static EvalTree build(SourceSet sources, const TreeParams& params = {});

    int order() const { return p_; }
    size_t size() const { return src_.points.size(); }
    const SourceSet& sources() const { return src_; }

    /// Truncated sums at the targets. Far cells (dist >= mac_ratio * cell
    /// radius, and clear of the excision disk) use multipоle moments; near
    /// sources are summed directly with the exact eps filter. Deterministic:
    /// fixed traversal and accumulation order per target.
    std::vector<Cplx> batch_cauchy(const std::vector<Cplx>& targets, double eps,
                                   double mac_ratio = 1.5, int threads = 0) const;

    Cplx eval_one(Cplx target, double eps, double mac_ratio = 1.5) const;

private:
    struct Node {
        Cplx center;          // cell center
        double radius = 0.0;  // half-diagonal
        int child[4] = {-1, -1, -1, -1};
        int begin = 0, end = 0;   // source slice (leaves)
        bool leaf = true;
        std::vector<Cplx> moments;
    };
    SourceSet src_;
    std::vector<Node> nodes_;
    int p_ = 12;
    int leaf_cap_ = 32;

    int build_node(Cplx lo, Cplx hi, int begin, int end, int depth);
    void accumulate(int node, Cplx z, double eps, double mac_ratio, Cplx& acc) const;
};

/// Direct double loop with the same eps filter (audit oracle).
Cplx naive_cauchy(const SourceSet& s, Cplx z, double eps);

} // namespace pvc
