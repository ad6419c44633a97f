#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "pvc/constructions.hpp"
#include "pvc/treecode.hpp"

using namespace pvc;

namespace {
SourceSet random_sources(std::mt19937_64& rng, long n) {
    std::uniform_real_distribution<double> u(0, 1);
    SourceSet s;
    s.points.reserve(n);
    s.weights.reserve(n);
    for (long i = 0; i < n; ++i) {
        s.points.emplace_back(u(rng), u(rng));
        s.weights.emplace_back(0.5 + u(rng), u(rng) - 0.5);
    }
    return s;
}
} // namespace

TEST_CASE("single source: one leaf, exact far field") {
    SourceSet s;
    s.points = {Cplx(0.25, 0.75)};
    s.weights = {Cplx(2, 1)};
    EvalTree t = EvalTree::build(s);
    Cplx z(5.0, -3.0);
    CHECK(std::abs(t.eval_one(z, 0.0) - s.weights[0] / (s.points[0] - z)) < 1e-12);
}

TEST_CASE("far-field accuracy against the direct sum") {
    std::mt19937_64 rng(31);
    SourceSet s = random_sources(rng, 10000);
    EvalTree t = EvalTree::build(s, TreeParams{12, 32});
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        // probes well separated from the unit square
        double ang = 2 * kPi * i / 100.0;
        Cplx z = Cplx(0.5, 0.5) + 6.0 * Cplx(std::cos(ang), std::sin(ang));
        Cplx exact = naive_cauchy(s, z, 0.0);
        worst = std::max(worst, std::abs(t.eval_one(z, 0.0) - exact) / std::abs(exact));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("interspersed targets at a tightened acceptance radius") {
    std::mt19937_64 rng(37);
    SourceSet s = random_sources(rng, 20000);
    EvalTree t = EvalTree::build(s, TreeParams{12, 32});
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        Cplx z(u(rng), u(rng));
        Cplx exact = naive_cauchy(s, z, 0.0);
        worst = std::max(worst, std::abs(t.eval_one(z, 0.0, 7.0) - exact) / std::abs(exact));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("single-cell far field meets the stated bound at the default radius") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0, 1);
    SourceSet s;
    for (int i = 0; i < 64; ++i) {
        s.points.emplace_back(u(rng), u(rng));
        s.weights.emplace_back(0.5 + u(rng), 0.0);
    }
    int p = 12;
    EvalTree t = EvalTree::build(s, TreeParams{p, 64});   // one leaf cell
    double radius = std::sqrt(0.5);                       // half-diagonal of the unit box
    Cplx c(0.5, 0.5);
    double bound = std::pow(0.75, p);
    for (int k = 0; k < 32; ++k) {
        Cplx z = c + 1.5 * radius * std::exp(Cplx(0, 2 * kPi * k / 32.0));
        Cplx exact = naive_cauchy(s, z, 0.0);
        double rel = std::abs(t.eval_one(z, 0.0, 1.5) - exact) / std::abs(exact);
        CHECK(rel <= bound);
    }
}

TEST_CASE("coincident sources degenerate to direct evaluation") {
    SourceSet s;
    for (int i = 0; i < 100; ++i) {
        s.points.emplace_back(0.5, 0.5);
        s.weights.emplace_back(1.0, 0.0);
    }
    EvalTree t = EvalTree::build(s);
    Cplx z(2, 0);
    CHECK(std::abs(t.eval_one(z, 0.0) - 100.0 / (Cplx(0.5, 0.5) - z)) < 1e-12);
    // excising the pile leaves nothing
    CHECK(t.eval_one(Cplx(0.5, 0.5) + Cplx(1e-3, 0), 1e-2) == Cplx(0, 0));
}

TEST_CASE("epsilon excision is exact in the near field") {
    std::mt19937_64 rng(41);
    SourceSet s = random_sources(rng, 5000);
    EvalTree t = EvalTree::build(s);
    Cplx z = s.points[123] + Cplx(1e-7, 0);
    double eps = 1e-4;
    CHECK(std::abs(t.eval_one(z, eps, 7.0) - naive_cauchy(s, z, eps)) <
          1e-9 * std::abs(naive_cauchy(s, z, eps)));
    // batch honors the same filter
    std::vector<Cplx> out = t.batch_cauchy({z}, eps, 7.0);
    CHECK(out[0] == t.eval_one(z, eps, 7.0));
}

TEST_CASE("determinism across runs and thread counts") {
    std::mt19937_64 rng(43);
    SourceSet s = random_sources(rng, 8192);
    std::vector<Cplx> targets;
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 500; ++i) targets.emplace_back(u(rng), u(rng));
    EvalTree t = EvalTree::build(s, TreeParams{10, 16});
    std::vector<Cplx> a = t.batch_cauchy(targets, 1e-6, 2.0, 2);
    std::vector<Cplx> b = t.batch_cauchy(targets, 1e-6, 2.0, 1);
    std::vector<Cplx> c = t.batch_cauchy(targets, 1e-6, 2.0, 2);
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(Cplx)) == 0);
    CHECK(std::memcmp(a.data(), c.data(), a.size() * sizeof(Cplx)) == 0);
}

TEST_CASE("sources gathered from a measure sum to its mass") {
    ComplexMeasure arc = arcsine_measure();
    SourceSet s = gather_sources(arc, 128);
    Cplx total{0, 0};
    for (Cplx w : s.weights) total += w;
    CHECK(std::abs(total - arc.mass()) < 1e-12);
}

TEST_CASE("parameter validation") {
    SourceSet empty;
    CHECK_THROWS_AS(EvalTree::build(empty), InputError);
    std::mt19937_64 rng(47);
    SourceSet s = random_sources(rng, 64);
    CHECK_THROWS_AS(EvalTree::build(s, TreeParams{3, 32}), InputError);
    CHECK_THROWS_AS(EvalTree::build(s, TreeParams{12, 4}), InputError);
    EvalTree t = EvalTree::build(s);
    CHECK_THROWS_AS(t.batch_cauchy({Cplx(0, 0)}, -1.0), InputError);
    CHECK_THROWS_AS(t.batch_cauchy({Cplx(0, 0)}, 0.0, 1.0), InputError);
}
