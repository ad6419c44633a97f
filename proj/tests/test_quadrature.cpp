#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "pvc/quadrature.hpp"

using namespace pvc;

namespace {
double rule_integral(const QuadRule& r, const std::function<double(double)>& f) {
    double s = 0;
    for (int i = 0; i < r.size(); ++i) s += r.w[i] * f(r.x[i]);
    return s;
}
} // namespace

TEST_CASE("gauss_legendre integrates polynomials up to degree 2n-1") {
    QuadRule r = gauss_legendre(8);
    for (int k = 0; k <= 15; ++k) {
        double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
        double got = rule_integral(r, [k](double x) { return std::pow(x, k); });
        CHECK(std::abs(got - exact) < 1e-14);
    }
    double miss = rule_integral(r, [](double x) { return std::pow(x, 16); });
    CHECK(std::abs(miss - 2.0 / 17.0) > 1e-12);
}

TEST_CASE("chebyshev rules have closed weights") {
    QuadRule r1 = gauss_jacobi(16, -0.5, -0.5);
    double mass = 0;
    for (double w : r1.w) mass += w;
    CHECK(mass == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(std::is_sorted(r1.x.begin(), r1.x.end()));

    QuadRule r2 = gauss_jacobi(16, 0.5, 0.5);
    double m2 = 0;
    for (double w : r2.w) m2 += w;
    CHECK(m2 == doctest::Approx(kPi / 2.0).epsilon(1e-14));
}

TEST_CASE("general gauss_jacobi matches closed beta moments") {
    double alpha = 0.3, beta = -0.7;
    QuadRule r = gauss_jacobi(14, alpha, beta);
    auto logbeta = [](double p, double q) {
        return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
    };
    // zeroth and first moments of (1-x)^a (1+x)^b in closed form
    double m0 = std::exp((alpha + beta + 1.0) * std::log(2.0) + logbeta(alpha + 1, beta + 1));
    double m1p =
        std::exp((alpha + beta + 2.0) * std::log(2.0) + logbeta(alpha + 1, beta + 2));
    double got0 = rule_integral(r, [](double) { return 1.0; });
    double got1 = rule_integral(r, [](double x) { return x; });
    CHECK(got0 == doctest::Approx(m0).epsilon(1e-13));
    CHECK(got1 == doctest::Approx(m1p - m0).epsilon(1e-12));
    // exactness plateau: n and 2n agree on higher monomials
    QuadRule r2 = gauss_jacobi(28, alpha, beta);
    for (int k = 2; k <= 7; ++k) {
        double a = rule_integral(r, [k](double x) { return std::pow(x, k); });
        double b = rule_integral(r2, [k](double x) { return std::pow(x, k); });
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("gauss_jacobi rejects non-integrable exponents") {
    CHECK_THROWS_AS(gauss_jacobi(8, -1.0, 0.0), InputError);
    CHECK_THROWS_AS(gauss_jacobi(8, 0.0, -1.5), InputError);
    CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), InputError);
}

TEST_CASE("mapped_jacobi places weight factors at the right ends") {
    // Convention: mapped_jacobi(n, A, B, a, b) integrates (b-t)^A (t-a)^B f.
    QuadRule r = mapped_jacobi(24, 0.5, 0.0, 1.0, 3.0);
    double got = 0;
    for (int i = 0; i < r.size(); ++i) got += r.w[i];
    auto f = [](double t) { return Cplx(std::sqrt(3.0 - t), 0.0); };
    double exact = integrate_adaptive(f, 1.0, 3.0, 1e-13).value.real();
    CHECK(got == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("adaptive handles log and sqrt endpoints and complex integrands") {
    auto lg = [](double t) { return Cplx(std::log(1.0 / t), 0.0); };
    CHECK(integrate_adaptive(lg, 1e-300, 1.0, 1e-12, 1e-13, 20000).value.real() ==
          doctest::Approx(1.0).epsilon(1e-10));
    auto sq2 = [](double t) { return Cplx(1.0 / std::sqrt(t), 0.0); };
    CHECK(integrate_adaptive(sq2, 1e-300, 1.0, 1e-10, 1e-12, 20000).value.real() ==
          doctest::Approx(2.0).epsilon(1e-7));
    auto osc = [](double t) { return std::exp(Cplx(0.0, 10.0 * t)); };
    Cplx got = integrate_adaptive(osc, 0.0, 1.0, 1e-13).value;
    Cplx exact = (std::exp(Cplx(0, 10.0)) - 1.0) / Cplx(0, 10.0);
    CHECK(std::abs(got - exact) < 1e-12);
}

TEST_CASE("rules at n and 2n agree on shared-exactness integrands") {
    for (auto [alpha, beta] :
         {std::pair{-0.5, -0.5}, std::pair{0.5, 0.5}, std::pair{0.0, 0.0},
          std::pair{0.25, -0.25}}) {
        QuadRule a = gauss_jacobi(12, alpha, beta), b = gauss_jacobi(24, alpha, beta);
        auto p = [](double x) { return 3.0 * x * x * x - x + 0.5; };
        CHECK(std::abs(rule_integral(a, p) - rule_integral(b, p)) < 1e-12);
    }
}
