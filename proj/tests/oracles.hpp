#pragma once

// Test-only oracles, kept independent of the library's evaluation paths:
// brute-force adaptive quadrature in the raw variable, direct kernel sums,
// and closed forms frozen from hand derivations.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "pvc/measure.hpp"
#include "pvc/quadrature.hpp"

namespace oracle {

using pvc::Cplx;

// Adaptive integration of density * f over [lo,hi] without the library's
// power-substitution machinery (plain bisection handles the integrable
// endpoint singularities, just slower).
inline Cplx brute_interval(const pvc::IntervalDensity& d, double lo, double hi,
                           const std::function<Cplx(double)>& f, double tol = 1e-10) {
    auto g = [&](double t) { return d.density(t) * f(t); };
    // Nudge off the singular endpoints and put the clipped sliver back with
    // its leading-order closed form.
    double nud = 1e-10 * (d.b - d.a);
    double a = lo <= d.a ? d.a + nud : lo;
    double b = hi >= d.b ? d.b - nud : hi;
    Cplx v = pvc::integrate_adaptive(g, a, b, tol, 1e-12, 20000).value;
    if (lo <= d.a && d.alpha != 0.0)
        v += d.smooth(a) * std::pow(d.b - d.a, d.beta) * f(a) *
             std::pow(nud, d.alpha + 1.0) / (d.alpha + 1.0);
    if (hi >= d.b && d.beta != 0.0)
        v += d.smooth(b) * std::pow(d.b - d.a, d.alpha) * f(b) *
             std::pow(nud, d.beta + 1.0) / (d.beta + 1.0);
    return v;
}

// Truncated transform of a single interval component by brute quadrature.
inline Cplx brute_interval_eps(const pvc::IntervalDensity& d, Cplx z, double eps,
                               double tol = 1e-10) {
    auto f = [&](double t) { return 1.0 / (Cplx(t, 0.0) - z); };
    double im = z.imag();
    if (std::abs(im) >= eps) return brute_interval(d, d.a, d.b, f, tol);
    double s = std::sqrt(eps * eps - im * im);
    Cplx acc{0, 0};
    if (z.real() - s > d.a) acc += brute_interval(d, d.a, z.real() - s, f, tol);
    if (z.real() + s < d.b) acc += brute_interval(d, z.real() + s, d.b, f, tol);
    return acc;
}

// Direct double-loop kernel sum over explicit nodes.
inline Cplx direct_kernel_sum(const std::vector<Cplx>& pts, const std::vector<Cplx>& wts, Cplx z,
                              double eps, const std::function<Cplx(Cplx)>& kernel) {
    Cplx acc{0, 0};
    for (size_t i = 0; i < pts.size(); ++i) {
        Cplx d = pts[i] - z;
        if (std::abs(d) > eps) acc += wts[i] * kernel(d);
    }
    return acc;
}

// Frozen closed values.
inline constexpr double kHalfLog3 = 0.5493061443340548;              // (1/2) ln 3
inline constexpr double kTwoMinusSqrt3 = 0.2679491924311227;         // 2 - sqrt(3)
inline constexpr double kLog2 = 0.6931471805599453;
inline constexpr double kLog2PlusSqrt3 = 1.3169578969248166;         // ln(2 + sqrt 3)
inline constexpr double kPi = 3.14159265358979323846;

// Random atom cloud with unit-scale complex weights.
inline pvc::ComplexMeasure random_atoms(std::mt19937_64& rng, int n, double box = 1.0) {
    std::uniform_real_distribution<double> u(-box, box);
    std::vector<pvc::Component> comps;
    for (int i = 0; i < n; ++i)
        comps.push_back(pvc::Component{
            Cplx(1.0, 0.0), pvc::Atom{Cplx(u(rng), u(rng)), Cplx(u(rng), u(rng))}});
    return pvc::make_measure(std::move(comps));
}

inline pvc::ComplexMeasure random_positive_atoms(std::mt19937_64& rng, int n, double box = 1.0) {
    std::uniform_real_distribution<double> u(-box, box);
    std::uniform_real_distribution<double> w(0.1, 1.0);
    std::vector<pvc::Component> comps;
    for (int i = 0; i < n; ++i)
        comps.push_back(
            pvc::Component{Cplx(1.0, 0.0), pvc::Atom{Cplx(u(rng), u(rng)), Cplx(w(rng), 0.0)}});
    return pvc::make_measure(std::move(comps));
}

} // namespace oracle
