#include "pvc/treecode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pvc/parallel.hpp"

namespace pvc {

SourceSet gather_sources(const ComplexMeasure& m, int nodes_per_component) {
    NodeSet ns = gather_nodes(m, nodes_per_component);
    return SourceSet{std::move(ns.nodes), std::move(ns.weights)};
}

Cplx naive_cauchy(const SourceSet& s, Cplx z, double eps) {
    Cplx acc{0, 0};
    for (size_t i = 0; i < s.points.size(); ++i) {
        Cplx d = s.points[i] - z;
        if (std::abs(d) > eps) acc += s.weights[i] / d;
    }
    return acc;
}

EvalTree EvalTree::build(SourceSet sources, const TreeParams& params) {
    if (sources.points.empty()) throw InputError("EvalTree: empty source set rejected");
    if (sources.points.size() != sources.weights.size())
        throw InputError("EvalTree: points/weights size mismatch");
    if (params.order < 4) throw InputError("EvalTree: order must be >= 4");
    if (params.leaf_cap < 8) throw InputError("EvalTree: leaf_cap must be >= 8");
    EvalTree t;
    t.src_ = std::move(sources);
    t.p_ = params.order;
    t.leaf_cap_ = params.leaf_cap;

    double x0 = std::numeric_limits<double>::max(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Cplx& z : t.src_.points) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
    // Square root cell.
    double side = std::max({x1 - x0, y1 - y0, 1e-300});
    Cplx c(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    Cplx lo = c - 0.5 * Cplx(side, side), hi = c + 0.5 * Cplx(side, side);
    t.nodes_.reserve(2 * t.src_.points.size() / params.leaf_cap + 16);
    t.build_node(lo, hi, 0, static_cast<int>(t.src_.points.size()), 0);
    return t;
}

int EvalTree::build_node(Cplx lo, Cplx hi, int begin, int end, int depth) {
    int idx = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Cplx c = 0.5 * (lo + hi);
    nodes_[idx].center = c;
    nodes_[idx].radius = 0.5 * std::abs(hi - lo);
    nodes_[idx].begin = begin;
    nodes_[idx].end = end;

    // Depth cap keeps coincident-point degeneracies in one direct leaf.
    if (end - begin <= leaf_cap_ || depth >= 48) {
        nodes_[idx].leaf = true;
    } else {
        nodes_[idx].leaf = false;
        // Partition the slice into quadrants (stable order: SW, SE, NW, NE).
        auto* pts = src_.points.data();
        auto* wts = src_.weights.data();
        auto quad = [&](const Cplx& z) {
            return (z.imag() >= c.imag() ? 2 : 0) + (z.real() >= c.real() ? 1 : 0);
        };
        std::vector<std::pair<Cplx, Cplx>> tmp(end - begin);
        for (int i = begin; i < end; ++i) tmp[i - begin] = {pts[i], wts[i]};
        std::stable_sort(tmp.begin(), tmp.end(), [&](const auto& a, const auto& b) {
            return quad(a.first) < quad(b.first);
        });
        int counts[4] = {0, 0, 0, 0};
        for (auto& pw : tmp) counts[quad(pw.first)]++;
        for (int i = begin; i < end; ++i) {
            pts[i] = tmp[i - begin].first;
            wts[i] = tmp[i - begin].second;
        }
        int offs[5] = {begin, 0, 0, 0, 0};
        for (int q = 0; q < 4; ++q) offs[q + 1] = offs[q] + counts[q];
        for (int q = 0; q < 4; ++q) {
            if (counts[q] == 0) continue;
            double mx = 0.5 * (lo.real() + hi.real()), my = 0.5 * (lo.imag() + hi.imag());
            Cplx qlo(q & 1 ? mx : lo.real(), q & 2 ? my : lo.imag());
            Cplx qhi(q & 1 ? hi.real() : mx, q & 2 ? hi.imag() : my);
            int ch = build_node(qlo, qhi, offs[q], offs[q + 1], depth + 1);
            nodes_[idx].child[q] = ch;
        }
    }

    // Moments about the cell center: sum w_j (zeta_j - c)^k, k < p.
    auto& mom = nodes_[idx].moments;
    mom.assign(p_, Cplx(0, 0));
    for (int i = begin; i < end; ++i) {
        Cplx d = src_.points[i] - c;
        Cplx pw(1.0, 0.0);
        for (int k = 0; k < p_; ++k) {
            mom[k] += src_.weights[i] * pw;
            pw *= d;
        }
    }
    return idx;
}

void EvalTree::accumulate(int ni, Cplx z, double eps, double mac_ratio, Cplx& acc) const {
    const Node& nd = nodes_[ni];
    double d = std::abs(z - nd.center);
    // Far field must also be clear of the excision disk.
    if (d >= mac_ratio * nd.radius && d - nd.radius > eps && nd.radius > 0.0) {
        // sum over cell of w/(zeta - z) = -sum_k M_k / (z - c)^{k+1}
        Cplx inv = 1.0 / (z - nd.center);
        Cplx s{0, 0};
        for (int k = p_ - 1; k >= 0; --k) s = (s + nd.moments[k]) * inv;
        acc -= s;
        return;
    }
    if (nd.leaf) {
        for (int i = nd.begin; i < nd.end; ++i) {
            Cplx dz = src_.points[i] - z;
            if (std::abs(dz) > eps) acc += src_.weights[i] / dz;
        }
        return;
    }
    for (int q = 0; q < 4; ++q)
        if (nd.child[q] >= 0) accumulate(nd.child[q], z, eps, mac_ratio, acc);
}

Cplx EvalTree::eval_one(Cplx target, double eps, double mac_ratio) const {
    if (eps < 0.0) throw InputError("batch_cauchy: eps must be >= 0");
    Cplx acc{0, 0};
    accumulate(0, target, eps, mac_ratio, acc);
    return acc;
}

std::vector<Cplx> EvalTree::batch_cauchy(const std::vector<Cplx>& targets, double eps,
                                         double mac_ratio, int threads) const {
    if (eps < 0.0) throw InputError("batch_cauchy: eps must be >= 0");
    if (mac_ratio < 1.5) throw InputError("batch_cauchy: mac_ratio must be >= 1.5");
    std::vector<Cplx> out(targets.size());
    parallel_for(
        static_cast<long>(targets.size()),
        [&](long i) {
            Cplx acc{0, 0};
            accumulate(0, targets[i], eps, mac_ratio, acc);
            out[i] = acc;
        },
        threads);
    return out;
}

} // namespace pvc
