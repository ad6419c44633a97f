#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string tmpdir() {
    static std::string d = [] {
        std::string p = (fs::temp_directory_path() / "pvc_cli_test").string();
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

int run(const std::string& args) {
    std::string cmd = std::string(PVC_CLI_PATH) + " " + args + " > " + tmpdir() +
                      "/stdout.txt 2> " + tmpdir() + "/stderr.txt";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kArcsine = R"({"name":"arcsine","components":[
  {"coef":[1,0],"kind":"interval","a":-1,"b":1,"family":"arcsine"}]})";
const char* kUniform = R"({"name":"uniform","components":[
  {"coef":[1,0],"kind":"interval","a":-1,"b":1,"family":"uniform"}]})";
const char* kUniformExpectFail = R"({"name":"uniform","expect":"fail","components":[
  {"coef":[1,0],"kind":"interval","a":-1,"b":1,"family":"uniform"}]})";

} // namespace

TEST_CASE("verify-reflectionless: pass, fail and expected-fail") {
    write_file(tmpdir() + "/arcsine.json", kArcsine);
    write_file(tmpdir() + "/uniform.json", kUniform);
    write_file(tmpdir() + "/uniform_ef.json", kUniformExpectFail);

    CHECK(run("verify-reflectionless --spec " + tmpdir() + "/arcsine.json --tol 1e-6 --out " +
              tmpdir() + "/o1") == 0);
    CHECK(slurp(tmpdir() + "/stdout.txt").find("pass") != std::string::npos);

    CHECK(run("verify-reflectionless --spec " + tmpdir() + "/uniform.json --tol 1e-6 --out " +
              tmpdir() + "/o2") == 1);
    auto doc = nlohmann::json::parse(slurp(tmpdir() + "/o2/reflectionless.json"));
    CHECK(doc["verdict"] == "fail");
    CHECK(doc["max_residual"].get<double>() > 0.5);
    // the report carries the residual ~0.5493 near x = 0.5
    std::istringstream csv(slurp(tmpdir() + "/o2/reflectionless.csv"));
    std::string line;
    std::getline(csv, line);
    bool found = false;
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (std::abs(vals[0] - 0.5) < 0.02 && std::abs(vals.back() - 0.5493061) < 0.02)
            found = true;
    }
    CHECK(found);

    CHECK(run("verify-reflectionless --spec " + tmpdir() + "/uniform_ef.json --tol 1e-6 --out " +
              tmpdir() + "/o3") == 0);
    CHECK(slurp(tmpdir() + "/stdout.txt").find("expected-fail") != std::string::npos);
}

TEST_CASE("eval writes per-point rows") {
    write_file(tmpdir() + "/arcsine.json", kArcsine);
    CHECK(run("eval --spec " + tmpdir() + "/arcsine.json --points \"2,0;0.3,0\" --out " +
              tmpdir() + "/oe") == 0);
    std::string csv = slurp(tmpdir() + "/oe/eval.csv");
    CHECK(csv.find("point_re") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    // fixed-truncation variant
    CHECK(run("eval --spec " + tmpdir() + "/arcsine.json --points \"0.3,0\" --eps 0.25 --out " +
              tmpdir() + "/oe2") == 0);
    CHECK(slurp(tmpdir() + "/oe2/eval.csv").find("truncated") != std::string::npos);
}

TEST_CASE("maximal subcommand reports stats and saturation") {
    write_file(tmpdir() + "/arcsine.json", kArcsine);
    CHECK(run("maximal --spec " + tmpdir() + "/arcsine.json --sample-nodes 128 --out " +
              tmpdir() + "/om") == 0);
    auto doc = nlohmann::json::parse(slurp(tmpdir() + "/om/maximal.json"));
    CHECK(doc["l1_truncated"].size() == 4);
    CHECK(doc["saturated"] == true);   // 128 nodes cannot resolve the 1e4 cutoff
    CHECK(doc["weak_quasinorm"].get<double>() > 0.0);
}

TEST_CASE("harmonic-measure emits sidecar with the symmetric gap root") {
    CHECK(run("harmonic-measure --intervals \"[-1,-0.3],[0.3,1]\" --tol 1e-6 --out " + tmpdir() +
              "/oh") == 0);
    auto side = nlohmann::json::parse(slurp(tmpdir() + "/oh/harmonic_sidecar.json"));
    CHECK(std::abs(side["gap_roots"][0].get<double>()) < 1e-10);
    auto meas = nlohmann::json::parse(slurp(tmpdir() + "/oh/harmonic_measure.json"));
    CHECK(meas["components"].size() == 2);
}

TEST_CASE("non-convergent ladders exit with code 3") {
    write_file(tmpdir() + "/arcsine.json", kArcsine);
    // the support edge has no principal value
    CHECK(run("eval --spec " + tmpdir() + "/arcsine.json --points \"1,0\" --out " + tmpdir() +
              "/o3x") == 3);
}

TEST_CASE("input errors exit with code 2") {
    CHECK(run("verify-reflectionless --spec " + tmpdir() + "/missing.json --out " + tmpdir() +
              "/ox") == 2);
    write_file(tmpdir() + "/bad.json", R"({"components":[{"kind":"wobble"}]})");
    CHECK(run("eval --spec " + tmpdir() + "/bad.json --points \"1,0\" --out " + tmpdir() +
              "/ox") == 2);
    CHECK(run("harmonic-measure --intervals \"oops\" --out " + tmpdir() + "/ox") == 2);
}

TEST_CASE("identical configuration produces byte-identical reports") {
    write_file(tmpdir() + "/uniform.json", kUniform);
    CHECK(run("verify-quadratic --spec " + tmpdir() + "/uniform.json --tol 1e-4 --seed 9 --out " +
              tmpdir() + "/da") == 0);
    CHECK(run("verify-quadratic --spec " + tmpdir() + "/uniform.json --tol 1e-4 --seed 9 --out " +
              tmpdir() + "/db") == 0);
    CHECK(slurp(tmpdir() + "/da/quadratic.csv") == slurp(tmpdir() + "/db/quadratic.csv"));
    CHECK(slurp(tmpdir() + "/da/quadratic.json") == slurp(tmpdir() + "/db/quadratic.json"));
    auto doc = nlohmann::json::parse(slurp(tmpdir() + "/da/quadratic.json"));
    CHECK(doc["seed"] == 9);
    CHECK(doc["version"].is_string());
    CHECK(doc["tolerance"].is_number());
}

TEST_CASE("comb subcommand reports the strip") {
    write_file(tmpdir() + "/arcsine.json", kArcsine);
    CHECK(run("comb --spec " + tmpdir() + "/arcsine.json --grid 192 --out " + tmpdir() + "/oc") ==
          0);
    auto doc = nlohmann::json::parse(slurp(tmpdir() + "/oc/comb.json"));
    CHECK(doc["comb_like"] == true);
    CHECK(std::abs(doc["strip_height"].get<double>() - 3.14159265358979) < 1e-6);
    CHECK(doc["neither_fraction"].get<double>() < 0.01);
    std::string csv = slurp(tmpdir() + "/oc/trace.csv");
    CHECK(csv.find("x,ReF,ImF,ReF',ImF',class") != std::string::npos);
}

TEST_CASE("widom subcommand") {
    CHECK(run("widom --intervals \"[-1,-0.3],[0.3,1]\" --out " + tmpdir() + "/ow") == 0);
    auto doc = nlohmann::json::parse(slurp(tmpdir() + "/ow/widom.json"));
    CHECK(doc["sum"].get<double>() > 0.0);
}

TEST_CASE("bench subcommand audits the treecode") {
    CHECK(run("bench --n 4096 --m 512 --p 12 --mac 7 --audit 64 --seed 4 --out " + tmpdir() +
              "/ob") == 0);
    auto doc = nlohmann::json::parse(slurp(tmpdir() + "/ob/bench.json"));
    CHECK(doc["max_relative_error"].get<double>() < 1e-9);
}
