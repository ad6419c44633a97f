#pragma once

#include <utility>
#include <vector>

#include "pvc/measure.hpp"
#include "pvc/transforms.hpp"

namespace pvc {

/// Probability measure with density 1/(pi sqrt((x-a)(b-x))) on [a,b].
ComplexMeasure arcsine_measure(double a = -1.0, double b = 1.0);

/// (1/pi) sqrt(1-x^2) dx on [-1,1]; mass 1/2.
ComplexMeasure semicircle_measure();

/// normalization * dz on the unit circle. With normalization 1/(pi i) the
/// transform is 2 inside, 0 outside, and 1 (half residue) on the circle.
ComplexMeasure circle_current(Cplx normalization);

struct HarmonicSolveOptions {
    double tol = 1e-12;
    int quad_nodes = 256;
    int max_iter = 400;
};

/// Interval system with its equilibrium data: one gap root per finite gap and
/// the Robin constant; `measure` carries the normalized density.
struct HarmonicMeasureSpec {
    std::vector<std::pair<double, double>> intervals;
    std::vector<double> gap_roots;
    double robin_constant = 0.0;
    double raw_mass = 0.0;       // before normalization (should be ~1)
    double norm = 1.0;           // scale applied to reach mass 1
    std::vector<double> poly;    // monic gap-root polynomial, ascending coefficients
    ComplexMeasure measure;
};

/// Harmonic measure (at infinity) of a finite union of disjoint closed real
/// intervals. Gap roots solve the vanishing gap integrals; throws
/// ConvergenceError with bracketing state if the solve stalls.
HarmonicMeasureSpec harmonic_measure(std::vector<std::pair<double, double>> intervals,
                                     const HarmonicSolveOptions& opts = {});

struct GreenEval {
    Cplx point;
    double value = 0.0;
    double gx = 0.0, gy = 0.0;
};

/// G(z) = ∫ log|z-y| dw(y) + robin_constant; zero on the interval system.
/// On-support points report the upper-side gradient limit.
GreenEval greens_function(const HarmonicMeasureSpec& spec, Cplx z,
                          const EvalOptions& opts = {});

/// |E ∩ (x-h, x+h)| >= delta*h over endpoint-critical x and a geometric h
/// grid in (0, r].
bool homogeneity_check(const std::vector<std::pair<double, double>>& intervals, double delta,
                       double r);

struct DeGiorgiGeometry {
    CurveDensity outer;                           // encloses [-1,1]
    std::vector<std::pair<Cplx, double>> disks;   // disjoint, avoiding [-1,1]
};

DeGiorgiGeometry default_degiorgi_geometry(int n_disks = 3);

/// Shrinking disk rings clustering at the point 2: level j contributes j
/// disks of radius 1/(10 j^2) at 2 + (1/j) e^{2 pi i k / j}. The infinite
/// family is truncated at max_level (a knob, not a claim).
DeGiorgiGeometry degiorgi_cluster_geometry(int max_level);

struct DeGiorgiMeasure {
    ComplexMeasure measure;
    Cplx curve_coefficient;   // calibrated against the region field
    double max_residual = 0.0;
    std::vector<Cplx> probes;
    std::vector<double> residuals;
};

/// Curve-plus-interval measure whose transform is z - sqrt(z^2-1) outside the
/// outer curve and inside the small disks, and z + sqrt(z^2-1) in between.
/// The curve coefficient is calibrated at a probe point and verified across
/// the remaining regions.
DeGiorgiMeasure degiorgi_example(const DeGiorgiGeometry& geom, const EvalOptions& opts = {});

/// Region-wise reference field for the assembled measure.
Cplx degiorgi_target(const DeGiorgiGeometry& geom, Cplx z);

} // namespace pvc
