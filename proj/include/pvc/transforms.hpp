#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pvc/core.hpp"
#include "pvc/measure.hpp"

namespace pvc {

enum class EvalStatus { Converged, Oscillating, Diverging };

/// Principal-value evaluation together with its epsilon-ladder cross-check.
struct EvalResult {
    Cplx value{0.0, 0.0};
    std::vector<double> epsilons;   // strictly decreasing
    std::vector<Cplx> ladder;       // truncated transform per rung
    double tail_estimate = 0.0;     // |last - second-last| on the ladder
    EvalStatus status = EvalStatus::Converged;
};

struct EvalOptions {
    double tol = 1e-9;             // ladder convergence target
    int nodes = 64;                // fixed-order rule size for spectral paths
    int eps_rungs = 40;
    double eps_ratio = 0.5;
    double eps_floor_factor = 1e-12;
    double quad_tol = 1e-11;       // adaptive quadrature absolute target
    bool ladder_check = true;
};

/// Geometric epsilon grid; consecutive rung ratio <= 2 (stored as the
/// descending factor `ratio` < 1).
struct EpsGrid {
    double eps_max = 1.0;
    double eps_min = 1e-12;
    double ratio = 0.5;
    std::vector<double> values() const;   // descending
    static EpsGrid spanning(const ComplexMeasure& m, Cplx z, double eps_min = 0.0,
                            double ratio = 0.5);
    EpsGrid refined() const;   // sqrt of ratio: superset of the coarse grid
};

struct KernelSpec {
    enum class Kind { Cauchy, RieszPlanar, CustomOdd };
    Kind kind = Kind::Cauchy;
    int index = 1;        // RieszPlanar: coordinate 1 or 2
    double power = 2.0;   // RieszPlanar: |x|^power denominator
    std::function<Cplx(Cplx)> fn;
    std::string label = "cauchy";

    static KernelSpec cauchy();
    static KernelSpec riesz_planar(int index, double power = 2.0);
    static KernelSpec custom(std::function<Cplx(Cplx)> f, std::string label = "custom-odd");

    Cplx eval(Cplx x) const;
    /// K(-x) == -K(x) at pseudo-random sample points, to near machine precision.
    bool odd_sampled(unsigned seed = 7u) const;
};

/// Truncated transform over {|zeta - z| > eps}, component by component: exact
/// for atoms, singularity-aware quadrature for densities (intervals and curves
/// split at the excised-disk boundary).
Cplx cauchy_eps(const ComplexMeasure& m, Cplx z, double eps, const EvalOptions& opts = {});

/// Principal value: direct quadrature off support, analytic singularity
/// subtraction on it, plus the epsilon-ladder cross-check in the result.
/// Throws InputError when z coincides with an atom.
EvalResult cauchy_pv(const ComplexMeasure& m, Cplx z, const EvalOptions& opts = {});

/// Grid supremum of |C_eps| (a certified lower bound of the maximal function).
double cauchy_maximal(const ComplexMeasure& m, Cplx z, const EpsGrid& grid,
                      const EvalOptions& opts = {});

double conjugate_poisson(const ComplexMeasure& m, double x, double h,
                         const EvalOptions& opts = {});

double poisson(const ComplexMeasure& m, double x, double y, const EvalOptions& opts = {});

double riesz_r1(const ComplexMeasure& m, double x, double y, double z, bool use_variation = false,
                const EvalOptions& opts = {});

Cplx odd_kernel_eps(const KernelSpec& K, const ComplexMeasure& m, Cplx x, double eps,
                    const EvalOptions& opts = {});

/// K(x-y)K(y-z) + K(y-z)K(z-x) + K(z-x)K(x-y); identically zero for the
/// Cauchy kernel. Coincident points rejected.
Cplx kernel_symmetry_residual(const KernelSpec& K, Cplx x, Cplx y, Cplx z);

struct DiffCoeffs {
    Cplx A, B;
};

/// Coefficients with A + B = 1 and A a + B b = c, so A/(z-a) + B/(z-b)
/// matches 1/(z-c) to third order at infinity.
DiffCoeffs kernel_diff_coeffs(Cplx a, Cplx b, Cplx c);

/// Closed-form reference transforms (oracle-grade; the quadrature engine does
/// not route through these for off-support evaluation).
namespace ref {

/// Transform of the arcsine measure on [a,b].
Cplx arcsine(double a, double b, Cplx z);
/// Transform of (1/pi) sqrt(1-x^2) dx on [-1,1]: the root of the potential
/// quadratic that vanishes at infinity with the kernel's mass asymptotics.
Cplx semicircle(Cplx z);
Cplx uniform(double a, double b, Cplx z);
double uniform_pv(double a, double b, double x);

} // namespace ref

} // namespace pvc
