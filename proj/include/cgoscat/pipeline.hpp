// Run configuration, CSV/manifest emission, and the CLI command drivers.
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "cgoscat/coeffs.hpp"
#include "cgoscat/grid.hpp"

namespace cgoscat {

struct RunConfig {
    int grid_n = 32;
    double half_width = 12.0;
    double lambda = 0.0;
    bool has_lambda = false;
    double gamma0 = 2.0;
    GeneratorSpec coefficients;
    bool has_coefficients_b = false;
    GeneratorSpec coefficients_b;  // second set for V-recovery pairs
    std::vector<double> h_sweep = {0.4, 0.2, 0.1};
    std::vector<double> t_sweep = {8.0, 16.0, 32.0};
    int sphere_polar = 6;
    int sphere_azimuth = 12;
    int shell_radii = 2;
    double tol_cgo = 1e-8;
    double tol_scatter = 1e-8;
    double tolerance_scale = 1.0;  // multiplies acceptance tolerances in `verify`
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int threads = 0;

    std::string canonical;  // canonical JSON used for the config hash
};

// Parses and validates a config document. Validation failures throw
// std::runtime_error with "config: <field> ..." messages.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// FNV-1a hash of the canonical config text, hex-encoded.
std::string config_hash(const std::string& canonical);

// CSV writing with fixed "%.17g" formatting (byte-stable for equal inputs).
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    static std::string format(double v);

  private:
    std::ofstream out_;
};

void write_manifest(const RunConfig& cfg, const std::string& command, double wall_seconds);

// Command drivers; return process exit codes (0 ok, 1 acceptance failure,
// 2 usage/config, 3 numerical non-convergence).
int cmd_direct(const RunConfig& cfg);
int cmd_cgo(const RunConfig& cfg);
int cmd_cauchy(const RunConfig& cfg);
int cmd_reconstruct(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

}  // namespace cgoscat
