#pragma once

#include <functional>
#include <vector>

#include "pvc/core.hpp"

namespace pvc {

/// Nodes/weights of a rule on [-1,1] (or as documented by the factory).
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
    int size() const { return static_cast<int>(x.size()); }
};

/// n-point Gauss-Legendre rule on [-1,1], weight 1.
QuadRule gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1. Chebyshev cases (alpha = beta = -1/2 or +1/2) and the
/// Legendre case use closed forms; the rest goes through Golub-Welsch.
QuadRule gauss_jacobi(int n, double alpha, double beta);

/// Rule mapped onto [a,b] for the weight (t-a)^beta (b-t)^alpha matching
/// gauss_jacobi(n, alpha, beta); weights absorb the Jacobian and the weight
/// scale factor ((b-a)/2)^(alpha+beta+1).
QuadRule mapped_jacobi(int n, double alpha, double beta, double a, double b);

struct AdaptResult {
    Cplx value{0.0, 0.0};
    double err = 0.0;
    int panels = 0;
    bool converged = true;
};

/// Adaptive Gauss integration of f on [a,b]: embedded 7/15-point estimates per
/// panel, bisection of the worst until abs_tol (plus rel_tol * |result|) is met
/// or max_panels is exhausted.
AdaptResult integrate_adaptive(const std::function<Cplx(double)>& f, double a, double b,
                               double abs_tol = 1e-12, double rel_tol = 1e-12,
                               int max_panels = 4000);

/// Real-valued convenience wrapper.
double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double abs_tol = 1e-12, double rel_tol = 1e-12,
                               int max_panels = 4000);

} // namespace pvc
