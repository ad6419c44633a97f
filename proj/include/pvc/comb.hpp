#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pvc/constructions.hpp"
#include "pvc/measure.hpp"
#include "pvc/transforms.hpp"

namespace pvc {

struct TracePoint {
    double x = 0.0;
    Cplx F{0.0, 0.0};
    Cplx Fp{0.0, 0.0};   // boundary derivative: pv transform + i*pi*density
    char cls = 'N';      // 'V', 'H' or 'N' (filled by vh_classify)
};

struct BoundaryTrace {
    std::vector<TracePoint> pts;
    int interpolated = 0;   // nodes where the pv evaluation failed
};

/// Antiderivative of the transform along a path from base to z through the
/// closed upper half-plane; base defaults to the rightmost support point.
/// Requires a positive measure supported on the real line and Im z >= 0.
Cplx conformal_F(const ComplexMeasure& m, Cplx z, std::optional<Cplx> base = std::nullopt,
                 const EvalOptions& opts = {});

/// Grid over [support_min - pad, support_max + pad] with nodes clustered at
/// component endpoints; pad defaults to half the support diameter.
std::vector<double> default_x_grid(const ComplexMeasure& m, int n, double pad = -1.0);

BoundaryTrace boundary_trace(const ComplexMeasure& m, const std::vector<double>& grid,
                             const EvalOptions& opts = {});

struct CombCheckResult {
    bool comb_like = false;
    std::vector<size_t> violations;   // vertex indices whose rightward ray re-crosses
};

/// Discrete ray test on a trace polyline.
CombCheckResult comb_check(const std::vector<Cplx>& polyline);

struct VhFractions {
    double vertical = 0.0, horizontal = 0.0, neither = 0.0;
};

/// Classify F'(x) per trace point (vertical: |Re|<tol*|F'|, horizontal:
/// |Im|<tol*|F'|), arc-length weighted. Mutates the trace's cls tags.
VhFractions vh_classify(BoundaryTrace& trace, double tol_angle);

/// Convenience: trace the measure over the grid, then classify.
VhFractions vh_classify(const ComplexMeasure& m, const std::vector<double>& x_grid,
                        double tol_angle, const EvalOptions& opts = {});

struct WidomReport {
    std::vector<double> critical_points;   // one per finite gap
    std::vector<double> green_values;
    std::vector<double> partial_sums;
    double sum = 0.0;
};

WidomReport widom_sum(const HarmonicMeasureSpec& spec, const EvalOptions& opts = {});

struct CombReport {
    BoundaryTrace trace;
    bool comb_like = false;
    std::vector<size_t> violations;
    VhFractions vh;
    double rect_length = 0.0;
    double strip_height = 0.0;
    double refine_ratio = 1.0;         // trace length at 2n over length at n
    std::string rect_label;            // "rectifiable at resolution" or trend note
};

CombReport comb_report(const ComplexMeasure& m, int grid_n, double tol_angle,
                       const EvalOptions& opts = {});

} // namespace pvc
