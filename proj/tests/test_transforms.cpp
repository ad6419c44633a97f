#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pvc/constructions.hpp"
#include "pvc/transforms.hpp"

using namespace pvc;

namespace {
const EvalOptions kFast = [] {
    EvalOptions o;
    o.ladder_check = false;
    return o;
}();
} // namespace

TEST_CASE("truncated transform of atoms") {
    ComplexMeasure at = make_measure({Component{Cplx(1, 0), Atom{Cplx(0, 0), Cplx(1, 0)}}});
    CHECK(cauchy_eps(at, Cplx(1, 0), 0.5) == Cplx(-1, 0));
    CHECK(cauchy_eps(at, Cplx(0, 0), 0.1) == Cplx(0, 0));   // atom excised
    CHECK_THROWS_AS(cauchy_eps(at, Cplx(1, 0), 0.0), InputError);
}

TEST_CASE("truncated transform of the uniform density, closed value") {
    ComplexMeasure u = make_measure({Component{Cplx(1, 0), IntervalDensity::uniform(-1, 1)}});
    Cplx v = cauchy_eps(u, Cplx(2, 0), 0.1);
    CHECK(v.real() == doctest::Approx(-oracle::kHalfLog3).epsilon(1e-13));
    CHECK(v.imag() == 0.0);
}

TEST_CASE("closed on-support truncations match brute quadrature") {
    IntervalDensity arc = IntervalDensity::arcsine(-1, 1);
    ComplexMeasure m = make_measure({Component{Cplx(1, 0), arc}});
    for (double x : {0.3, -0.55, 0.9})
        for (double e : {0.5, 0.07, 1e-3}) {
            Cplx fast = cauchy_eps(m, Cplx(x, 0), e);
            Cplx slow = oracle::brute_interval_eps(arc, Cplx(x, 0), e, 1e-11);
            CHECK(std::abs(fast - slow) < 1e-9);
        }
    IntervalDensity un = IntervalDensity::uniform(-0.5, 2.0);
    ComplexMeasure mu = make_measure({Component{Cplx(1, 0), un}});
    for (double x : {0.0, 1.3})
        for (double e : {0.4, 0.01}) {
            Cplx fast = cauchy_eps(mu, Cplx(x, 0), e);
            Cplx slow = oracle::brute_interval_eps(un, Cplx(x, 0), e, 1e-11);
            CHECK(std::abs(fast - slow) < 1e-9);
        }
}

TEST_CASE("linearity of the truncated transform") {
    std::mt19937_64 rng(5);
    ComplexMeasure a = oracle::random_atoms(rng, 8);
    ComplexMeasure b = make_measure({Component{Cplx(0.3, 0.1), IntervalDensity::uniform(-1, 1)},
                                     Component{Cplx(1, 0), Atom{Cplx(0.2, 0.7), Cplx(1, 1)}}});
    Cplx al(0.7, -0.2), be(-1.1, 0.4);
    ComplexMeasure both = ComplexMeasure::sum(a.scaled(al), b.scaled(be));
    for (Cplx z : {Cplx(2.5, 1.0), Cplx(-0.3, 2.0)}) {
        Cplx lhs = cauchy_eps(both, z, 0.15);
        Cplx rhs = al * cauchy_eps(a, z, 0.15) + be * cauchy_eps(b, z, 0.15);
        CHECK(std::abs(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("principal values of the named measures") {
    ComplexMeasure arc = arcsine_measure();
    EvalResult r = cauchy_pv(arc, Cplx(0.3, 0));
    CHECK(std::abs(r.value) < 1e-12);
    CHECK(r.status == EvalStatus::Converged);
    for (size_t i = 1; i < r.epsilons.size(); ++i) CHECK(r.epsilons[i] < r.epsilons[i - 1]);

    ComplexMeasure semi = semicircle_measure();
    Cplx s2 = cauchy_pv(semi, Cplx(2, 0), kFast).value;
    CHECK(s2.real() == doctest::Approx(-oracle::kTwoMinusSqrt3).epsilon(1e-10));

    ComplexMeasure circ = circle_current(Cplx(0, -1.0 / kPi));
    CHECK(std::abs(cauchy_pv(circ, Cplx(0, 0), kFast).value - 2.0) < 1e-12);
}

TEST_CASE("on-support closed values: uniform and semicircle") {
    ComplexMeasure u = make_measure({Component{Cplx(1, 0), IntervalDensity::uniform(-1, 1)}});
    CHECK(cauchy_pv(u, Cplx(0.5, 0), kFast).value.real() ==
          doctest::Approx(ref::uniform_pv(-1, 1, 0.5)).epsilon(1e-13));
    ComplexMeasure s = semicircle_measure();
    // pv of the semicircle on its support is -x
    CHECK(cauchy_pv(s, Cplx(0.5, 0), kFast).value.real() ==
          doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("pv at an atom is rejected") {
    ComplexMeasure at = make_measure({Component{Cplx(1, 0), Atom{Cplx(0.5, 0.5), Cplx(1, 0)}}});
    CHECK_THROWS_WITH_AS(cauchy_pv(at, Cplx(0.5, 0.5)),
                         "principal value at atom excluded by definition", InputError);
}

TEST_CASE("truncation is irrelevant off the support") {
    ComplexMeasure arc = arcsine_measure();
    Cplx z(2.0, 0.5);
    double dist = arc.support_dist(z);
    Cplx pv = cauchy_pv(arc, z, kFast).value;
    for (double e : {0.9 * dist, 0.5 * dist, 1e-3 * dist})
        CHECK(std::abs(cauchy_eps(arc, z, e) - pv) < 1e-12);
}

TEST_CASE("mass asymptotics along the imaginary axis") {
    for (const ComplexMeasure& m :
         {arcsine_measure(), semicircle_measure(),
          make_measure({Component{Cplx(0.4, 0.3), IntervalDensity::uniform(-0.5, 1.5)}})}) {
        Cplx mass = m.mass();
        double r3 = std::abs(Cplx(0, 1e3) * cauchy_pv(m, Cplx(0, 1e3), kFast).value + mass);
        double r4 = std::abs(Cplx(0, 1e4) * cauchy_pv(m, Cplx(0, 1e4), kFast).value + mass);
        // decays like (first moment)/y
        CHECK(r3 < 5e-4);
        CHECK(r4 < 5e-5);
        CHECK(r4 < 0.2 * r3);
    }
}

TEST_CASE("maximal function: grid supremum basics") {
    ComplexMeasure at = make_measure({Component{Cplx(1, 0), Atom{Cplx(0, 0), Cplx(1, 0)}}});
    EpsGrid g = EpsGrid::spanning(at, Cplx(1, 0));
    CHECK(cauchy_maximal(at, Cplx(1, 0), g) == doctest::Approx(1.0));
    ComplexMeasure u = make_measure({Component{Cplx(1, 0), IntervalDensity::uniform(-1, 1)}});
    CHECK(cauchy_maximal(u, Cplx(0, 0), EpsGrid::spanning(u, Cplx(0, 0))) < 1e-14);
}

TEST_CASE("maximal never decreases under grid refinement") {
    ComplexMeasure arc = arcsine_measure();
    for (Cplx z : {Cplx(0.77, 0.0), Cplx(0.2, 0.1), Cplx(1.5, 0.0)}) {
        EpsGrid g = EpsGrid::spanning(arc, z);
        double coarse = cauchy_maximal(arc, z, g);
        double fine = cauchy_maximal(arc, z, g.refined());
        CHECK(fine >= coarse - 1e-15);
    }
}

TEST_CASE("poisson and conjugate poisson") {
    ComplexMeasure at = make_measure({Component{Cplx(1, 0), Atom{Cplx(0, 0), Cplx(1, 0)}}});
    CHECK(poisson(at, 0, 1) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(conjugate_poisson(at, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));

    ComplexMeasure u = make_measure({Component{Cplx(1, 0), IntervalDensity::uniform(-1, 1)}});
    CHECK(conjugate_poisson(u, 0, 0.37) == doctest::Approx(0.0));
    CHECK(poisson(u, 0, 1e-4) == doctest::Approx(0.5).epsilon(1e-3));
    // probability-measure far-field: ~ 1/(pi y)
    ComplexMeasure arc = arcsine_measure();
    CHECK(poisson(arc, 0, 50.0) * kPi * 50.0 == doctest::Approx(1.0).epsilon(1e-3));

    // decay of the conjugate kernel at an interior point of the arcsine measure
    double prev = 1e300;
    for (double h : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        double q = std::abs(conjugate_poisson(arc, 0.5, h));
        CHECK(q < prev);
        prev = q;
    }
    CHECK(prev < 1e-4);

    ComplexMeasure curve = circle_current(Cplx(1, 0));
    CHECK_THROWS_AS(poisson(curve, 0, 1), InputError);
    CHECK_THROWS_AS(conjugate_poisson(curve, 0, 1), InputError);
    CHECK_THROWS_AS(poisson(at, 0, -1), InputError);
}

TEST_CASE("riesz transform toward the plane") {
    ComplexMeasure at = make_measure({Component{Cplx(1, 0), Atom{Cplx(0, 0), Cplx(1, 0)}}});
    CHECK(riesz_r1(at, 0, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(riesz_r1(at, 0, 0, 0.0), InputError);

    AreaDensity disk = AreaDensity::disk(Cplx(0, 0), 1.0, [](Cplx) { return Cplx(1, 0); }, 33, 33);
    ComplexMeasure md = make_measure({Component{Cplx(1, 0), disk}});
    for (double z : {1.0, 0.3, 0.05}) {
        double closed = 2 * kPi * (1 - z / std::sqrt(1 + z * z));
        CHECK(riesz_r1(md, 0, 0, z) == doctest::Approx(closed).epsilon(1e-6));
    }
}

TEST_CASE("odd kernel transforms") {
    KernelSpec riesz1 = KernelSpec::riesz_planar(1, 2.0);
    ComplexMeasure pair = make_measure({Component{Cplx(1, 0), Atom{Cplx(-1, 0), Cplx(1, 0)}},
                                        Component{Cplx(1, 0), Atom{Cplx(1, 0), Cplx(1, 0)}}});
    CHECK(std::abs(odd_kernel_eps(riesz1, pair, Cplx(0, 0), 0.5)) < 1e-15);

    // cauchy kind delegates to the full engine
    ComplexMeasure arc = arcsine_measure();
    Cplx a = odd_kernel_eps(KernelSpec::cauchy(), arc, Cplx(0.4, 0), 0.25);
    Cplx b = cauchy_eps(arc, Cplx(0.4, 0), 0.25);
    CHECK(a == b);

    // brute-force agreement on a 10-atom measure
    std::mt19937_64 rng(7);
    ComplexMeasure cloud = oracle::random_atoms(rng, 10);
    NodeSet ns = gather_nodes(cloud, 4);
    for (Cplx x : {Cplx(0.1, 0.2), Cplx(-0.8, 0.5)}) {
        Cplx got = odd_kernel_eps(riesz1, cloud, x, 0.3);
        Cplx want = oracle::direct_kernel_sum(ns.nodes, ns.weights, x, 0.3, [&](Cplx d) {
            return Cplx(d.real() / norm2(d), 0.0);
        });
        CHECK(std::abs(got - want) < 1e-13);
    }

    KernelSpec even = KernelSpec::custom([](Cplx x) { return Cplx(std::abs(x), 0.0); }, "even");
    CHECK_THROWS_WITH_AS(odd_kernel_eps(even, pair, Cplx(0, 0), 0.5), "non-odd kernel rejected",
                         InputError);
}

TEST_CASE("three-point kernel symmetry identity") {
    KernelSpec K = KernelSpec::cauchy();
    CHECK(std::abs(kernel_symmetry_residual(K, Cplx(0, 0), Cplx(1, 0), Cplx(0, 1))) < 1e-15);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        Cplx x(u(rng), u(rng)), y(u(rng), u(rng)), z(u(rng), u(rng));
        if (std::abs(x - y) < 0.05 || std::abs(y - z) < 0.05 || std::abs(z - x) < 0.05) {
            --i;
            continue;
        }
        worst = std::max(worst, std::abs(kernel_symmetry_residual(K, x, y, z)));
    }
    CHECK(worst < 1e-13);

    // negative control: the planar vector kernel x/|x|^3 is odd but fails it
    KernelSpec v3 = KernelSpec::custom(
        [](Cplx x) { return x / std::pow(std::abs(x), 3.0); }, "vector-cube");
    CHECK(v3.odd_sampled());
    CHECK(std::abs(kernel_symmetry_residual(v3, Cplx(0.3, 0.1), Cplx(-0.5, 0.4),
                                            Cplx(0.2, -0.6))) > 1e-3);

    CHECK_THROWS_AS(kernel_symmetry_residual(K, Cplx(1, 1), Cplx(1, 1), Cplx(0, 0)), InputError);
}

TEST_CASE("two-kernel interpolation coefficients") {
    DiffCoeffs c = kernel_diff_coeffs(Cplx(-1, 0), Cplx(1, 0), Cplx(0, 0));
    CHECK(c.A == Cplx(0.5, 0));
    CHECK(c.B == Cplx(0.5, 0));
    DiffCoeffs c2 = kernel_diff_coeffs(Cplx(0.3, 0.2), Cplx(-0.4, 0.9), Cplx(0.3, 0.2));
    CHECK(std::abs(c2.A - 1.0) < 1e-15);
    CHECK(std::abs(c2.B) < 1e-15);
    CHECK_THROWS_AS(kernel_diff_coeffs(Cplx(1, 0), Cplx(1, 0), Cplx(0, 0)), InputError);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    double r = 1.0;
    for (int rep = 0; rep < 20; ++rep) {
        Cplx a(u(rng), u(rng)), b(u(rng), u(rng)), cc(u(rng), u(rng));
        if (std::abs(a - b) <= r) {
            --rep;
            continue;
        }
        DiffCoeffs k = kernel_diff_coeffs(a, b, cc);
        CHECK(std::abs(k.A + k.B - 1.0) < 1e-14);
        CHECK(std::abs(k.A * a + k.B * b - cc) < 1e-14);
        CHECK(std::abs(k.A) < 2.0);
        CHECK(std::abs(k.B) < 2.0);
        // third-order decay: |err| * |z|^3 / r^2 bounded along growing circles
        double m2r = 0, mlast = 0;
        for (double rho : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
            double worst = 0;
            for (int j = 0; j < 16; ++j) {
                Cplx z = rho * std::exp(Cplx(0, 2 * kPi * j / 16.0));
                double err =
                    std::abs(k.A / (z - a) + k.B / (z - b) - 1.0 / (z - cc)) * rho * rho * rho;
                worst = std::max(worst, err);
            }
            if (rho == 2.0) m2r = worst;
            mlast = worst;
        }
        CHECK(mlast < 2.0 * m2r + 1e-12);
    }
}

TEST_CASE("curve pv equals the epsilon-ladder limit") {
    ComplexMeasure circ = circle_current(Cplx(0, -1.0 / kPi));
    EvalResult r = cauchy_pv(circ, Cplx(1, 0));
    CHECK(std::abs(r.value - 1.0) < 1e-10);
    CHECK(r.status == EvalStatus::Converged);
    CHECK(std::abs(r.ladder.back() - r.value) < 1e-6);
}

TEST_CASE("ladder statuses signal nonexistent principal values") {
    // At the support edge of the arcsine measure the truncations blow up
    // like eps^{-1/2}: rung differences grow, so the ladder reports it.
    ComplexMeasure arc = arcsine_measure();
    EvalOptions o;
    o.tol = 1e-9;
    EvalResult edge = cauchy_pv(arc, Cplx(1.0, 0.0), o);
    CHECK(edge.status == EvalStatus::Diverging);
    CHECK(edge.tail_estimate > o.tol);

    // A density jump gives log-type truncations: constant rung differences,
    // reported as oscillating with the best estimate retained.
    ComplexMeasure jump =
        make_measure({Component{Cplx(1, 0), IntervalDensity::uniform(-1, 0)},
                      Component{Cplx(3, 0), IntervalDensity::uniform(0, 1)}});
    EvalResult osc = cauchy_pv(jump, Cplx(0.0, 0.0), o);
    CHECK(osc.status == EvalStatus::Oscillating);
}

TEST_CASE("rectangle area measures integrate and transform") {
    AreaDensity rect = AreaDensity::rect(-1.0, 1.0, -0.5, 0.5,
                                         [](Cplx) { return Cplx(0.5, 0); }, 17, 17);
    ComplexMeasure mr = make_measure({Component{Cplx(1, 0), rect}});
    CHECK(mr.mass().real() == doctest::Approx(1.0).epsilon(1e-8));
    Cplx far = cauchy_pv(mr, Cplx(0, 50), kFast).value * Cplx(0, 50);
    CHECK(std::abs(far + mr.mass()) < 1e-3);
}

TEST_CASE("area excision of a centered disk cancels by symmetry") {
    AreaDensity disk = AreaDensity::disk(Cplx(0, 0), 1.0, [](Cplx) { return Cplx(1, 0); }, 33, 33);
    ComplexMeasure md = make_measure({Component{Cplx(1, 0), disk}});
    Cplx z(0.3, -0.2);
    // the excised ball is fully interior, so its own integral vanishes
    Cplx pv = cauchy_pv(md, z, kFast).value;
    Cplx trunc = cauchy_eps(md, z, 0.1);
    CHECK(std::abs(pv - trunc) < 1e-5);
}

TEST_CASE("epsilon grid construction") {
    ComplexMeasure arc = arcsine_measure();
    EpsGrid g = EpsGrid::spanning(arc, Cplx(3, 0));
    auto v = g.values();
    CHECK(v.front() == doctest::Approx(4.0));
    CHECK(v.back() >= g.eps_min * 0.999);
    for (size_t i = 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);
    EpsGrid bad;
    bad.ratio = 1.5;
    CHECK_THROWS_AS(bad.values(), InputError);
}
