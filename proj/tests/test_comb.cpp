#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pvc/comb.hpp"

using namespace pvc;

namespace {
const EvalOptions kFast = [] {
    EvalOptions o;
    o.ladder_check = false;
    return o;
}();

// Closed strip map for the arcsine measure, based at x = 1: log(z - S(z)).
Cplx strip_map(Cplx z) { return std::log(z - sqrt_zz_m1(z)); }
} // namespace

TEST_CASE("conformal antiderivative matches the strip map") {
    ComplexMeasure arc = arcsine_measure();
    for (Cplx z : {Cplx(0.3, 0.7), Cplx(-1.2, 0.4), Cplx(2.0, 1.5)})
        CHECK(std::abs(conformal_F(arc, z) - strip_map(z)) < 1e-7);
    CHECK_THROWS_AS(conformal_F(arc, Cplx(0, -1)), InputError);
    ComplexMeasure neg = arc.scaled(Cplx(-1, 0));
    CHECK_THROWS_AS(conformal_F(neg, Cplx(0, 1)), InputError);
}

TEST_CASE("path independence of the antiderivative") {
    ComplexMeasure arc = arcsine_measure();
    Cplx z(0.4, 0.9), mid(2.5, 1.2);
    Cplx direct = conformal_F(arc, z);
    Cplx via = conformal_F(arc, mid) + conformal_F(arc, z, mid);
    CHECK(std::abs(direct - via) < 1e-9);
}

TEST_CASE("arcsine boundary trace is the strip boundary") {
    ComplexMeasure arc = arcsine_measure();
    std::vector<double> grid = default_x_grid(arc, 512);
    BoundaryTrace tr = boundary_trace(arc, grid, kFast);
    CHECK(tr.interpolated == 0);
    // Im F nondecreasing along the axis, total rise pi * mass
    double rise = tr.pts.back().F.imag() - tr.pts.front().F.imag();
    CHECK(rise == doctest::Approx(kPi).epsilon(1e-9));
    for (size_t i = 1; i < tr.pts.size(); ++i)
        CHECK(tr.pts[i].F.imag() >= tr.pts[i - 1].F.imag() - 1e-12);
    // |F(1) - F(-1)| = pi (the vertical edge of the strip)
    Cplx F1, Fm1;
    for (const auto& p : tr.pts) {
        if (std::abs(p.x - 1.0) < 1e-9) F1 = p.F;
        if (std::abs(p.x + 1.0) < 1e-9) Fm1 = p.F;
    }
    CHECK(std::abs(F1 - Fm1) == doctest::Approx(kPi).epsilon(1e-6));
    // against the closed strip map on the right ray (same base point x = 1)
    for (const auto& p : tr.pts)
        if (p.x > 1.05) CHECK(std::abs(p.F - strip_map(Cplx(p.x, 0.0))) < 1e-6);
}

TEST_CASE("vh classification separates the reflectionless cases") {
    ComplexMeasure arc = arcsine_measure();
    CombReport ra = comb_report(arc, 512, 1e-3, kFast);
    CHECK(ra.vh.neither < 0.01);
    CHECK(ra.comb_like);
    CHECK(ra.strip_height == doctest::Approx(kPi * arc.mass().real()).epsilon(1e-6));

    ComplexMeasure u = make_measure({Component{Cplx(1, 0), IntervalDensity::uniform(-1, 1)}});
    CombReport ru = comb_report(u, 512, 1e-3, kFast);
    CHECK(ru.vh.neither > 0.5);

    HarmonicMeasureSpec spec = harmonic_measure({{-1.0, -0.3}, {0.3, 1.0}});
    CombReport rh = comb_report(spec.measure, 512, 1e-3, kFast);
    CHECK(rh.vh.neither < 0.01);
    CHECK(rh.strip_height == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("two-interval trace maps the gap onto a slot of depth G(c)") {
    HarmonicMeasureSpec spec = harmonic_measure({{-1.0, -0.3}, {0.3, 1.0}});
    WidomReport w = widom_sum(spec, kFast);
    REQUIRE(w.critical_points.size() == 1);
    std::vector<double> grid = default_x_grid(spec.measure, 768);
    BoundaryTrace tr = boundary_trace(spec.measure, grid, kFast);
    // Im F constant across the gap; the Re F excursion from the gap mouth to
    // the critical point equals the Green value there (the slot depth).
    double im_lo = 1e300, im_hi = -1e300;
    Cplx mouth{0, 0}, tip{0, 0};
    double tip_dist = 1e300;
    for (const auto& p : tr.pts) {
        if (p.x > -0.3 + 1e-9 && p.x < 0.3 - 1e-9) {
            im_lo = std::min(im_lo, p.F.imag());
            im_hi = std::max(im_hi, p.F.imag());
        }
        if (std::abs(p.x + 0.3) < 1e-12) mouth = p.F;
        if (std::abs(p.x - w.critical_points[0]) < tip_dist) {
            tip_dist = std::abs(p.x - w.critical_points[0]);
            tip = p.F;
        }
    }
    CHECK(im_hi - im_lo < 1e-9);
    CHECK(std::abs(tip.real() - mouth.real()) ==
          doctest::Approx(w.green_values[0]).epsilon(1e-3));
}

TEST_CASE("discrete ray test on synthetic traces") {
    // Strip boundary: bottom ray, left edge, top ray.
    std::vector<Cplx> strip;
    for (double x = 8.0; x >= 0.0; x -= 0.5) strip.emplace_back(x, 0.0);
    for (double y = 0.0; y <= kPi; y += 0.25) strip.emplace_back(0.0, y);
    for (double x = 0.0; x <= 8.0; x += 0.5) strip.emplace_back(x, kPi);
    CHECK(comb_check(strip).comb_like);

    // Straight comb: strip minus horizontal slots entered from the left... the
    // trace walks into each slot and back.
    std::vector<Cplx> comb = strip;
    std::vector<Cplx> withslot;
    for (const Cplx& p : strip) {
        withslot.push_back(p);
        if (p == Cplx(0.0, 1.0)) {
            withslot.emplace_back(2.0, 1.0);    // into the slot
            withslot.emplace_back(0.0, 1.0);    // and back
        }
    }
    CHECK(comb_check(withslot).comb_like);

    // A vertical slot blocking rightward rays violates the ray property.
    std::vector<Cplx> blocked;
    for (double x = 8.0; x >= 4.0; x -= 0.5) blocked.emplace_back(x, 0.0);
    blocked.emplace_back(4.0, 2.0);   // vertical wall jutting up mid-strip
    blocked.emplace_back(4.0, 0.0);
    for (double x = 4.0; x >= 0.0; x -= 0.5) blocked.emplace_back(x, 0.0);
    for (double y = 0.0; y <= kPi; y += 0.25) blocked.emplace_back(0.0, y);
    for (double x = 0.0; x <= 8.0; x += 0.5) blocked.emplace_back(x, kPi);
    CombCheckResult res = comb_check(blocked);
    CHECK_FALSE(res.comb_like);
    CHECK(res.violations.size() > 0);
}

TEST_CASE("widom sums over interval systems") {
    HarmonicMeasureSpec one = harmonic_measure({{-1.0, 1.0}});
    WidomReport w1 = widom_sum(one, kFast);
    CHECK(w1.critical_points.empty());
    CHECK(w1.sum == 0.0);

    HarmonicMeasureSpec two = harmonic_measure({{-1.0, -0.3}, {0.3, 1.0}});
    WidomReport w2 = widom_sum(two, kFast);
    REQUIRE(w2.critical_points.size() == 1);
    CHECK(std::abs(w2.critical_points[0]) < 1e-10);
    CHECK(w2.green_values[0] > 0.0);
    CHECK(w2.green_values[0] == doctest::Approx(0.309519604).epsilon(1e-6));
    // critical points coincide with the solved gap roots
    CHECK(w2.critical_points[0] == doctest::Approx(two.gap_roots[0]).epsilon(1e-8));

    // nested family: deeper splitting only adds positive terms
    double prev_sum = 0.0;
    std::vector<std::pair<double, double>> sys{{-1.0, 1.0}};
    for (int depth = 1; depth <= 4; ++depth) {
        std::vector<std::pair<double, double>> next;
        for (auto& [a, b] : sys) {
            double len = (b - a) * 0.4;
            next.emplace_back(a, a + len);
            next.emplace_back(b - len, b);
        }
        sys = next;
        WidomReport w = widom_sum(harmonic_measure(sys), kFast);
        for (size_t i = 1; i < w.partial_sums.size(); ++i)
            CHECK(w.partial_sums[i] >= w.partial_sums[i - 1]);
        CHECK(w.sum > prev_sum);
        prev_sum = w.sum;
    }
}

TEST_CASE("trace length refinement ratio stays near one for the strip") {
    ComplexMeasure arc = arcsine_measure();
    CombReport rep = comb_report(arc, 256, 1e-3, kFast);
    CHECK(rep.refine_ratio < 1.05);
    CHECK(rep.rect_label == "rectifiable at resolution");
    CHECK(rep.rect_length >= rep.strip_height);
}
