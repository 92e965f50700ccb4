#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgoscat/pipeline.hpp"

using namespace cgoscat;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config validation messages carry field paths") {
    CHECK_THROWS_WITH_AS(parse_config("{ not json"), doctest::Contains("config:"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"lambda": -1})"),
                         doctest::Contains("lambda"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"h_sweep": []})"),
                         doctest::Contains("h_sweep"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"h_sweep": [0.1, 0.2]})"),
                         doctest::Contains("decreasing"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"coefficients": {"kind": "wavelet"}})"),
                         doctest::Contains("kind"), std::runtime_error);

    RunConfig cfg = parse_config(R"({"grid": {"n": 16, "half_width": 8.0}, "lambda": 1.5})");
    CHECK(cfg.grid_n == 16);
    CHECK(cfg.lambda == 1.5);
    CHECK(cfg.has_lambda);
}

TEST_CASE("lambda is required by commands that scatter") {
    RunConfig cfg = parse_config(R"({"grid": {"n": 16, "half_width": 8.0}})");
    cfg.out_dir = (std::filesystem::temp_directory_path() / "cgoscat_nolambda").string();
    CHECK_THROWS_WITH_AS(cmd_direct(cfg), doctest::Contains("lambda required"),
                         std::runtime_error);
}

TEST_CASE("config hash is stable and input-sensitive") {
    std::string a = config_hash("{\"x\":1}");
    CHECK(a == config_hash("{\"x\":1}"));
    CHECK(a != config_hash("{\"x\":2}"));
    CHECK(a.size() == 16);
}

TEST_CASE("cauchy command is deterministic byte-for-byte") {
    namespace fs = std::filesystem;
    std::string text = R"({
        "grid": {"n": 16, "half_width": 8.0},
        "gamma0": 2.0,
        "coefficients": {"kind": "solenoidal", "a_amplitude": 0.5, "width": 1.6}
    })";
    RunConfig c1 = parse_config(text);
    RunConfig c2 = parse_config(text);
    fs::path base = fs::temp_directory_path() / "cgoscat_determinism";
    c1.out_dir = (base / "run1").string();
    c2.out_dir = (base / "run2").string();
    REQUIRE(cmd_cauchy(c1) == 0);
    REQUIRE(cmd_cauchy(c2) == 0);
    CHECK(slurp(c1.out_dir + "/cauchy_residuals.csv") ==
          slurp(c2.out_dir + "/cauchy_residuals.csv"));
    CHECK(slurp(c1.out_dir + "/phase_phi.cgof") == slurp(c2.out_dir + "/phase_phi.cgof"));
    CHECK(fs::exists(c1.out_dir + "/manifest.json"));
}

TEST_CASE("cgo command writes zero remainders for the free preset") {
    namespace fs = std::filesystem;
    RunConfig cfg = parse_config(R"({
        "grid": {"n": 16, "half_width": 8.0},
        "lambda": 1.0,
        "coefficients": {"kind": "zero"},
        "h_sweep": [0.4]
    })");
    cfg.out_dir = (fs::temp_directory_path() / "cgoscat_cgo_free").string();
    REQUIRE(cmd_cgo(cfg) == 0);
    ScalarField v = read_scalar_field(cfg.out_dir + "/cgo_v_h0.4000.cgof");
    CHECK(sup_norm(v) == 0.0);
}

TEST_CASE("cgo command reports divergence with exit code 3") {
    namespace fs = std::filesystem;
    RunConfig cfg = parse_config(R"({
        "grid": {"n": 16, "half_width": 8.0},
        "lambda": 1.0,
        "coefficients": {"kind": "solenoidal", "a_amplitude": 50.0, "v_amplitude": 50.0,
                          "width": 1.5},
        "h_sweep": [0.45]
    })");
    cfg.out_dir = (fs::temp_directory_path() / "cgoscat_cgo_div").string();
    CHECK(cmd_cgo(cfg) == 3);
    CHECK(std::filesystem::exists(cfg.out_dir + "/cgo_divergence.json"));
}

}  // TEST_SUITE
