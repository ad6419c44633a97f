#pragma once

#include <cstdint>
#include <vector>

#include "pvc/measure.hpp"
#include "pvc/transforms.hpp"

namespace pvc {

struct IdentityReport {
    std::vector<Cplx> points;
    std::vector<Cplx> lhs, rhs;
    std::vector<double> residuals;
    std::vector<int> inconclusive_flags;   // 1 = per-point inconclusive
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    int inconclusive = 0;
    int nodes = 0;
};

/// lhs = 2 * transform of C(t) dmu(t), rhs = [C(z)]^2, compared per test point.
IdentityReport verify_quadratic(const ComplexMeasure& m, const std::vector<Cplx>& points,
                                double tol, const EvalOptions& opts = {});

/// Default test points: two rings at 1.5x and 3x the support radius plus
/// interior points for measures with known interior structure.
std::vector<Cplx> quadratic_test_points(const ComplexMeasure& m, int ring_n = 64,
                                        int inner_n = 16, std::uint64_t seed = 20260808ull);

/// Principal values at |mu|-weighted sample nodes at two resolutions (n, 2n);
/// pass requires the residual bound at both.
IdentityReport verify_reflectionless(const ComplexMeasure& m, int sample_count, double tol,
                                     const EvalOptions& opts = {});

/// |∫ K^mu_eps dnu + ∫ K^nu_eps dmu| on the measures' node sets; exactly
/// antisymmetric for odd K up to rounding.
double antisymmetry_check(const ComplexMeasure& mu, const ComplexMeasure& nu,
                          const KernelSpec& K, double eps, const EvalOptions& opts = {});

/// For nu = mu restricted to {Re > c}, eta = mu restricted to {Re < c}:
/// the sequence ∫ K^nu_eps d(eta) along the descending epsilon ladder.
std::vector<double> halfspace_diagnostic(const ComplexMeasure& mu, const KernelSpec& K, double c,
                                         const std::vector<double>& eps_ladder,
                                         const EvalOptions& opts = {});

enum class SummabilityClass { Summable, WeakOnly, Divergent };

struct MaximalStats {
    std::vector<Cplx> nodes;
    std::vector<double> node_weights;        // |mu| weights
    std::vector<double> maximal_values;      // grid supremum per node
    std::vector<double> cutoffs;             // Lambda ladder
    std::vector<double> l1_truncated;        // ∫ min(C*, Lambda) d|mu|
    std::vector<double> weak_values;         // lambda * |mu|({C* > lambda}) on the ladder
    double weak_quasinorm = 0.0;             // sup over the ladder
    std::vector<double> eps_values;
    std::vector<double> eps_l1_norms;        // ||C_eps||_L1(|mu|)
    double fit_slope = 0.0, fit_intercept = 0.0, fit_r2 = 0.0;   // l1 vs ln(Lambda)
    /// Largest sampled maximal value; cutoffs above it are saturated, so the
    /// classification only speaks for the resolved range.
    double max_maximal = 0.0;
    SummabilityClass cls = SummabilityClass::Divergent;
};

MaximalStats maximal_summability(const ComplexMeasure& m, int node_count,
                                 const std::vector<double>& cutoff_ladder,
                                 const std::vector<double>& eps_ladder,
                                 const EvalOptions& opts = {});

struct RatioTrace {
    std::vector<double> radii;
    std::vector<double> mass_ratio;    // |mu(B(w,r))| / (pi r^2)
    std::vector<double> riesz_value;   // R1|mu|(x, y, r)
    std::vector<double> quotient;
};

RatioTrace density_point_trace(const ComplexMeasure& m, Cplx w, const std::vector<double>& radii,
                               const EvalOptions& opts = {});

/// mu(B(w,r)) by component (curves/areas at sample resolution).
Cplx ball_mass(const ComplexMeasure& m, Cplx w, double r);

} // namespace pvc
