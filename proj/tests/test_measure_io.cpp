#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pvc/measure_io.hpp"

using namespace pvc;
namespace fs = std::filesystem;

namespace {
std::string tmpdir() {
    static std::string d = [] {
        std::string p = (fs::temp_directory_path() / "pvc_io_test").string();
        fs::create_directories(p);
        return p;
    }();
    return d;
}
} // namespace

TEST_CASE("parse the documented schema") {
    const char* text = R"({
      "name": "mix",
      "components": [
        {"coef": [1, 0], "kind": "atom", "at": [0.5, -0.25]},
        {"coef": [0.5, 0], "kind": "interval", "a": -1, "b": 1, "family": "arcsine"},
        {"coef": [0, -0.3183098861837907], "kind": "curve", "shape": "circle",
         "center": [0, 0], "radius": 1, "density": "unit"}
      ]
    })";
    MeasureFile mf = parse_measure_json(text, ".");
    CHECK(mf.name == "mix");
    CHECK_FALSE(mf.expect_fail);
    CHECK(mf.measure.components().size() == 3);
    CHECK_FALSE(mf.measure.is_continuous());
}

TEST_CASE("unknown keys are rejected everywhere") {
    CHECK_THROWS_AS(parse_measure_json(R"({"components": [], "extra": 1})", "."), InputError);
    CHECK_THROWS_AS(
        parse_measure_json(
            R"({"components": [{"kind": "atom", "at": [0,0], "mass": 2}]})", "."),
        InputError);
    CHECK_THROWS_AS(
        parse_measure_json(
            R"({"components": [{"kind": "interval", "a": 0, "b": 1, "family": "uniform",
                "params": {"alpha": 1}}]})",
            "."),
        InputError);
    CHECK_THROWS_AS(
        parse_measure_json(R"({"components": [{"kind": "blob"}]})", "."), InputError);
    CHECK_THROWS_AS(
        parse_measure_json(
            R"({"components": [{"kind": "interval", "a": 0, "b": 1, "family": "exotic"}]})",
            "."),
        InputError);
    CHECK_THROWS_AS(parse_measure_json("not json", "."), InputError);
    CHECK_THROWS_AS(parse_measure_json(R"({"components": [], "expect": "maybe"})", "."),
                    InputError);
}

TEST_CASE("expected-fail control flag") {
    MeasureFile mf = parse_measure_json(R"({"expect": "fail", "components": [
        {"kind": "interval", "a": -1, "b": 1, "family": "uniform"}]})", ".");
    CHECK(mf.expect_fail);
}

TEST_CASE("round trip through the file format") {
    std::vector<Component> comps;
    comps.push_back(Component{Cplx(0.25, -1.5), Atom{Cplx(0.1, 0.2), Cplx(1, 0)}});
    comps.push_back(Component{Cplx(1, 0), IntervalDensity::arcsine(-2, 0.5)});
    comps.push_back(
        Component{Cplx(2, 0), IntervalDensity::jacobi_poly(0, 1, -0.25, 0.5, {1.0, -0.5})});
    comps.push_back(Component{Cplx(0, 1), CurveDensity::circle(Cplx(1, 1), 0.5)});
    comps.push_back(Component{
        Cplx(1, 0), AreaDensity::disk(Cplx(0, 0), 1.0,
                                      [](Cplx z) { return Cplx(1.0 + z.real(), 0); }, 9, 9)});
    ComplexMeasure m = make_measure(std::move(comps));
    std::string path = tmpdir() + "/roundtrip.json";
    save_measure_file(m, path, "roundtrip");
    MeasureFile back = load_measure_file(path);
    CHECK(back.name == "roundtrip");
    REQUIRE(back.measure.components().size() == m.components().size());
    CHECK(back.measure.total_variation() ==
          doctest::Approx(m.total_variation()).epsilon(1e-9));
    CHECK(std::abs(back.measure.mass() - m.mass()) < 1e-9);
}

TEST_CASE("equilibrium components survive serialization") {
    HarmonicMeasureSpec spec = harmonic_measure({{-1.0, -0.3}, {0.3, 1.0}});
    std::string path = tmpdir() + "/harm.json";
    save_measure_file(spec.measure, path, "harm");
    save_harmonic_sidecar(spec, tmpdir() + "/harm_side.json");
    MeasureFile back = load_measure_file(path);
    CHECK(std::abs(back.measure.mass().real() - 1.0) < 1e-9);
    const auto& d = std::get<IntervalDensity>(back.measure.components()[0].shape);
    CHECK(d.family == IntervalFamily::Equilibrium);
    CHECK(d.system.size() == 2);

    std::ifstream side(tmpdir() + "/harm_side.json");
    std::string body((std::istreambuf_iterator<char>(side)), {});
    CHECK(body.find("gap_roots") != std::string::npos);
    CHECK(body.find("robin_constant") != std::string::npos);
}

TEST_CASE("missing files and bad grids error out") {
    CHECK_THROWS_AS(load_measure_file(tmpdir() + "/nonexistent.json"), InputError);
    CHECK_THROWS_AS(
        parse_measure_json(
            R"({"components": [{"kind": "area", "region": "rect", "grid": "missing.csv"}]})",
            tmpdir()),
        InputError);
}
