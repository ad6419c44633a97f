#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pvc/core.hpp"
#include "pvc/quadrature.hpp"

namespace pvc {

struct Atom {
    Cplx location{0.0, 0.0};
    Cplx weight{0.0, 0.0};
};

enum class IntervalFamily { Arcsine, Semicircle, Uniform, JacobiPoly, Tabulated, Equilibrium };

/// Density on a real interval [a,b], factored as
///   density(t) = h(t) * (t-a)^alpha * (b-t)^beta
/// with h the family's smooth part. alpha, beta > -1.
class IntervalDensity {
public:
    double a = -1.0, b = 1.0;
    IntervalFamily family = IntervalFamily::Uniform;
    double alpha = 0.0, beta = 0.0;
    double scale = 1.0;
    std::vector<double> poly;                        // ascending coefficients
    std::vector<double> tab_x, tab_y, tab_y2;        // tabulated smooth part
    std::vector<std::pair<double, double>> system;   // equilibrium: all intervals
    int index = 0;                                   // equilibrium: own interval

    static IntervalDensity arcsine(double a, double b);
    static IntervalDensity semicircle(double a, double b);
    static IntervalDensity uniform(double a, double b);
    static IntervalDensity jacobi_poly(double a, double b, double alpha, double beta,
                                       std::vector<double> poly, double scale = 1.0);
    static IntervalDensity tabulated(double a, double b, std::vector<double> xs,
                                     std::vector<double> ys, double alpha = 0.0,
                                     double beta = 0.0);
    static IntervalDensity equilibrium(std::vector<std::pair<double, double>> system, int index,
                                       std::vector<double> poly, double scale);

    double smooth(double t) const;
    double smooth_deriv(double t) const;   // centered difference of h
    double weight_only(double t) const;    // (t-a)^alpha (b-t)^beta
    double density(double t) const;
    double mass(double lo, double hi) const;   // ∫ density over a sub-range
    double mass() const { return mass(a, b); }
    double variation() const;
};

enum class CurveDensityKind { Unit, Radical2, Custom };

/// Closed parametrized curve zeta(t), t in [0, 2pi), as a trigonometric
/// polynomial; measure element is density(zeta(t)) * zeta'(t) dt.
class CurveDensity {
public:
    Cplx center{0.0, 0.0};
    std::vector<Cplx> cosc, sinc;   // zeta = center + sum_k cosc[k-1] cos(kt) + sinc[k-1] sin(kt)
    CurveDensityKind dens_kind = CurveDensityKind::Unit;
    Cplx dens_value{1.0, 0.0};                  // Unit multiplier
    std::function<Cplx(Cplx)> dens_fn;          // Custom
    int samples = 1024;
    int orientation = +1;
    std::vector<double> arc_t, arc_s;           // cumulative arc length, 4x samples
    std::vector<Cplx> arc_pts;                  // sampled points at arc resolution

    static CurveDensity circle(Cplx center, double radius,
                               CurveDensityKind kind = CurveDensityKind::Unit,
                               Cplx value = Cplx(1.0, 0.0), int samples = 1024);
    static CurveDensity trig(Cplx center, std::vector<Cplx> cosc, std::vector<Cplx> sinc,
                             CurveDensityKind kind = CurveDensityKind::Unit,
                             Cplx value = Cplx(1.0, 0.0), int samples = 1024);

    Cplx point(double t) const;
    Cplx tangent(double t) const;
    Cplx density_at(Cplx zeta) const;
    double variation() const;
    double min_dist(Cplx z) const;     // at arc-table resolution
    double nearest_param(Cplx z) const;

    /// Simplicity (sampled segment intersection), non-vanishing tangent,
    /// orientation and the arc-length table. Throws InputError on violation.
    void finalize();
};

/// Tabulated density on a disk or an axis-aligned rectangle, interpolated
/// piecewise-cubically; zero outside the region.
class AreaDensity {
public:
    enum class Region { Disk, Rect };
    Region region = Region::Rect;
    Cplx center{0.0, 0.0};
    double radius = 1.0;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;   // grid bbox (disk: circumscribed square)
    int nx = 2, ny = 2;
    std::vector<double> re, im;              // row-major samples, iy*nx + ix

    static AreaDensity disk(Cplx center, double radius, const std::function<Cplx(Cplx)>& f,
                            int nx = 33, int ny = 33);
    static AreaDensity rect(double x0, double x1, double y0, double y1,
                            const std::function<Cplx(Cplx)>& f, int nx = 33, int ny = 33);

    bool inside(Cplx z) const;
    Cplx density(Cplx z) const;
    double boundary_dist(Cplx z) const;      // signed: >0 inside, <0 outside
    double ray_exit(Cplx z, double theta) const;   // distance to region boundary
    double variation() const;
};

using Shape = std::variant<Atom, IntervalDensity, CurveDensity, AreaDensity>;

struct Component {
    Cplx coef{1.0, 0.0};
    Shape shape;
};

struct NodeSet {
    std::vector<Cplx> nodes;
    std::vector<Cplx> weights;
    std::vector<std::string> warnings;
};

/// Finite complex measure assembled from components. Immutable after make();
/// coincident atoms are merged, every component is validated, and the total
/// variation is precomputed.
class ComplexMeasure {
public:
    static ComplexMeasure make(std::vector<Component> comps);

    const std::vector<Component>& components() const { return comps_; }
    double total_variation() const { return tv_; }
    bool is_continuous() const { return continuous_; }
    bool is_positive() const { return positive_; }
    Cplx mass() const;

    double support_dist(Cplx z) const;
    double support_diameter() const;
    /// Diameter of support united with z (epsilon-ladder scale).
    double extent_with(Cplx z) const;
    bool on_real_line(double tol = 1e-12) const;

    ComplexMeasure scaled(Cplx c) const;
    static ComplexMeasure sum(const ComplexMeasure& m1, const ComplexMeasure& m2);

private:
    std::vector<Component> comps_;
    double tv_ = 0.0;
    bool continuous_ = true;
    bool positive_ = false;
    double sx0_ = 0, sx1_ = 0, sy0_ = 0, sy1_ = 0;
};

ComplexMeasure make_measure(std::vector<Component> comps);

/// Nodes/weights integrating the component's density; n >= 2. Endpoint
/// exponents are absorbed into the weights (Gauss-type rule for the weight).
/// Weak accuracy concerns surface on NodeSet::warnings, never as failures.
NodeSet quadrature_nodes(const Component& comp, int n);

/// All components' nodes with measure coefficients folded in.
NodeSet gather_nodes(const ComplexMeasure& m, int n_per_component);

double total_variation(const ComplexMeasure& m);

/// ∫_{[lo,hi]} density(t) f(t) dt over a piece of an interval component,
/// absorbing endpoint singularities by power substitution.
Cplx integrate_interval_piece(const IntervalDensity& d, double lo, double hi,
                              const std::function<Cplx(double)>& f, double abs_tol = 1e-11);

/// Fixed-order spectral route: the family's n-point rule applied to
/// h(t) f(t) over the whole interval (f smooth on [a,b]).
Cplx interval_rule_integral(const IntervalDensity& d, int n, const std::function<Cplx(double)>& f);

double polyval(const std::vector<double>& coeffs, double t);

} // namespace pvc
