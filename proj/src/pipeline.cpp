#include "cgoscat/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "cgoscat/acceptance.hpp"
#include "cgoscat/cauchy.hpp"
#include "cgoscat/cgo.hpp"
#include "cgoscat/direct.hpp"
#include "cgoscat/recon.hpp"

namespace cgoscat {

using nlohmann::json;

namespace {

Vec3 parse_vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error("config: " + path + " must be a 3-array");
    return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

GeneratorSpec parse_generator(const json& j, const std::string& path) {
    GeneratorSpec g;
    if (j.contains("kind")) g.kind = j["kind"].get<std::string>();
    if (g.kind != "zero" && g.kind != "gaussian" && g.kind != "solenoidal" && g.kind != "gradient")
        throw std::runtime_error("config: " + path + ".kind must be one of zero|gaussian|solenoidal|gradient");
    g.a_amplitude = j.value("a_amplitude", 0.0);
    g.v_amplitude = j.value("v_amplitude", 0.0);
    g.width = j.value("width", 1.5);
    g.width_v = j.value("width_v", 1.5);
    if (j.contains("center")) g.center = parse_vec3(j["center"], path + ".center");
    if (j.contains("center_v")) g.center_v = parse_vec3(j["center_v"], path + ".center_v");
    return g;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig cfg;
    if (j.contains("grid")) {
        cfg.grid_n = j["grid"].value("n", 32);
        cfg.half_width = j["grid"].value("half_width", 12.0);
    }
    if (j.contains("lambda")) {
        cfg.lambda = j["lambda"].get<double>();
        cfg.has_lambda = true;
        if (!(cfg.lambda > 0.0)) throw std::runtime_error("config: lambda must be positive");
    }
    cfg.gamma0 = j.value("gamma0", 2.0);
    if (!(cfg.gamma0 > 0.0)) throw std::runtime_error("config: gamma0 must be positive");
    if (j.contains("coefficients")) cfg.coefficients = parse_generator(j["coefficients"], "coefficients");
    if (j.contains("coefficients_b")) {
        cfg.coefficients_b = parse_generator(j["coefficients_b"], "coefficients_b");
        cfg.has_coefficients_b = true;
    }
    if (j.contains("h_sweep")) {
        cfg.h_sweep = j["h_sweep"].get<std::vector<double>>();
        if (cfg.h_sweep.empty()) throw std::runtime_error("config: h_sweep must be nonempty");
        for (std::size_t i = 0; i + 1 < cfg.h_sweep.size(); ++i)
            if (!(cfg.h_sweep[i] > cfg.h_sweep[i + 1]))
                throw std::runtime_error("config: h_sweep must be strictly decreasing");
        for (double h : cfg.h_sweep)
            if (!(h > 0.0)) throw std::runtime_error("config: h_sweep entries must be positive");
    }
    if (j.contains("t_sweep")) {
        cfg.t_sweep = j["t_sweep"].get<std::vector<double>>();
        if (cfg.t_sweep.empty()) throw std::runtime_error("config: t_sweep must be nonempty");
        for (std::size_t i = 0; i + 1 < cfg.t_sweep.size(); ++i)
            if (!(cfg.t_sweep[i] < cfg.t_sweep[i + 1]))
                throw std::runtime_error("config: t_sweep must be strictly increasing");
    }
    if (j.contains("sphere")) {
        cfg.sphere_polar = j["sphere"].value("n_polar", 6);
        cfg.sphere_azimuth = j["sphere"].value("n_azimuth", 12);
    }
    if (j.contains("shell")) cfg.shell_radii = j["shell"].value("radii_count", 2);
    if (j.contains("tolerances")) {
        cfg.tol_cgo = j["tolerances"].value("cgo", 1e-8);
        cfg.tol_scatter = j["tolerances"].value("scattering", 1e-8);
        cfg.tolerance_scale = j["tolerances"].value("scale", 1.0);
        if (!(cfg.tol_cgo > 0.0) || !(cfg.tol_scatter > 0.0) || !(cfg.tolerance_scale > 0.0))
            throw std::runtime_error("config: tolerances must be positive");
    }
    cfg.out_dir = j.value("out_dir", std::string("out"));
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
    cfg.threads = j.value("threads", 0);
    cfg.canonical = j.dump();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open " + path);
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

std::string CsvWriter::format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
}

void write_manifest(const RunConfig& cfg, const std::string& command, double wall_seconds) {
    json m;
    m["command"] = command;
    m["config_hash"] = config_hash(cfg.canonical);
    m["version"] = "0.1.0";
    m["wall_clock_seconds"] = wall_seconds;
    m["seed"] = cfg.seed;
    m["threads"] = cfg.threads;
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir + "/manifest.json");
    out << m.dump(2) << "\n";
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void require_lambda(const RunConfig& cfg) {
    if (!cfg.has_lambda) throw std::runtime_error("config: lambda required");
}

}  // namespace

// ---------------------------------------------------------------------------
// direct
// ---------------------------------------------------------------------------

int cmd_direct(const RunConfig& cfg) {
    Timer timer;
    require_lambda(cfg);
    Grid grid = make_grid(cfg.grid_n, cfg.half_width);
    CoefficientSet coeffs = make_test_coefficients(grid, cfg.gamma0, cfg.coefficients);
    if (coeffs.boundary_warning)
        std::cerr << "warning: coefficients exceed 1e-8 of peak at the box boundary\n";
    SphereGrid sphere = make_sphere_grid(cfg.lambda, cfg.sphere_polar, cfg.sphere_azimuth);
    ScatterOptions sopts;
    sopts.tol = cfg.tol_scatter;

    ScatteringMatrixSamples sig;
    try {
        sig = sigma_matrix(coeffs, cfg.lambda, sphere, sopts, cfg.threads);
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }

    std::filesystem::create_directories(cfg.out_dir);
    {
        CsvWriter csv(cfg.out_dir + "/sigma.csv", {"q", "qprime", "re", "im"});
        for (int p = 0; p < sphere.size(); ++p)
            for (int q = 0; q < sphere.size(); ++q)
                csv.row({double(p), double(q), sig.matrix[p][q].real(), sig.matrix[p][q].imag()});
    }
    double max_dev_identity = 0.0;
    for (int p = 0; p < sphere.size(); ++p)
        for (int q = 0; q < sphere.size(); ++q)
            max_dev_identity = std::max(
                max_dev_identity, std::abs(sig.matrix[p][q] - (p == q ? Complex(1.0) : Complex(0.0))));
    {
        json hdr;
        hdr["lambda"] = cfg.lambda;
        hdr["sphere"] = {{"n_polar", sphere.n_polar}, {"n_azimuth", sphere.n_azimuth}};
        hdr["unitarity_defect"] = sig.unitarity_defect;
        hdr["max_identity_deviation"] = max_dev_identity;
        std::ofstream out(cfg.out_dir + "/sigma.json");
        out << hdr.dump(2) << "\n";
    }

    // Far field and Born comparison for the constant density.
    std::vector<Complex> g(sphere.size(), Complex(1.0));
    ScatteringSolution sol = solve_scattering(coeffs, cfg.lambda, g, sphere, sopts);
    FarFieldResult ff = far_field(sol, coeffs);
    FieldWithGradient inc = herglotz_with_gradient(g, sphere, grid);
    ScalarField v_inc = multiply_potential(coeffs, inc.u, inc.grad);
    const double k = std::sqrt(cfg.lambda);
    double max_rel_dev = 0.0;
    {
        CsvWriter csv(cfg.out_dir + "/farfield.csv",
                      {"tx", "ty", "tz", "re_sigma_g", "im_sigma_g", "re_born", "im_born", "rel_dev"});
        for (int q = 0; q < sphere.size(); ++q) {
            Complex born = g[q] - fourier_at(v_inc, k * sphere.directions[q]);
            double scale = std::max(std::abs(born - g[q]), 1e-300);
            double rel = std::abs(ff.sigma_g[q] - born) / scale;
            max_rel_dev = std::max(max_rel_dev, rel);
            csv.row({sphere.directions[q].x, sphere.directions[q].y, sphere.directions[q].z,
                     ff.sigma_g[q].real(), ff.sigma_g[q].imag(), born.real(), born.imag(), rel});
        }
    }
    std::cout << "sigma matrix " << sphere.size() << "x" << sphere.size()
              << ": unitarity defect " << sig.unitarity_defect << ", max |S-I| " << max_dev_identity
              << ", Born max rel dev " << max_rel_dev << "\n";
    write_manifest(cfg, "direct", timer.seconds());
    return 0;
}

// ---------------------------------------------------------------------------
// cgo
// ---------------------------------------------------------------------------

int cmd_cgo(const RunConfig& cfg) {
    Timer timer;
    require_lambda(cfg);
    Grid grid = make_grid(cfg.grid_n, cfg.half_width);
    CoefficientSet coeffs = make_test_coefficients(grid, cfg.gamma0, cfg.coefficients);
    CgoOptions opts;
    opts.tol = cfg.tol_cgo;

    if (coeffs.boundary_warning)
        std::cerr << "warning: coefficients exceed 1e-8 of peak at the box boundary\n";
    std::filesystem::create_directories(cfg.out_dir);
    CsvWriter csv(cfg.out_dir + "/cgo_norms.csv",
                  {"h", "rho_mag", "min_symbol_modulus", "iterations", "residual", "norm_v",
                   "norm_r", "norm_hgrad_r"});
    for (double h : cfg.h_sweep) {
        ComplexFrequency rho;
        try {
            rho = make_rho(h, cfg.lambda, Vec3{1, 0, 0}, Vec3{0, 1, 0});
        } catch (const std::invalid_argument& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
        try {
            CgoSolution sol = solve_cgo(coeffs, rho, opts);
            csv.row({h, rho.magnitude(), sol.min_symbol_modulus, double(sol.iterations),
                     sol.residual, sol.norm_v, sol.norm_r, sol.norm_hgrad_r});
            char name[64];
            std::snprintf(name, sizeof(name), "/cgo_v_h%.4f.cgof", h);
            write_field(sol.v, cfg.out_dir + name);
            std::snprintf(name, sizeof(name), "/cgo_a_h%.4f.cgof", h);
            write_field(sol.a, cfg.out_dir + name);
            std::snprintf(name, sizeof(name), "/cgo_r_h%.4f.cgof", h);
            write_field(sol.r, cfg.out_dir + name);
            json diag;
            diag["h"] = h;
            diag["iterations"] = sol.iterations;
            diag["residual"] = sol.residual;
            diag["norms"] = {{"v", sol.norm_v}, {"r", sol.norm_r}, {"hgrad_r", sol.norm_hgrad_r}};
            diag["delta"] = sol.delta;
            std::snprintf(name, sizeof(name), "/cgo_diag_h%.4f.json", h);
            std::ofstream out(cfg.out_dir + name);
            out << diag.dump(2) << "\n";
        } catch (const CgoDivergenceError& e) {
            std::cerr << e.what() << "\nresidual history:";
            for (double r : e.residual_history) std::cerr << " " << r;
            std::cerr << "\n";
            std::ofstream out(cfg.out_dir + "/cgo_divergence.json");
            json d;
            d["h"] = h;
            d["residual_history"] = e.residual_history;
            out << d.dump(2) << "\n";
            return 3;
        }
    }
    write_manifest(cfg, "cgo", timer.seconds());
    return 0;
}

// ---------------------------------------------------------------------------
// cauchy
// ---------------------------------------------------------------------------

int cmd_cauchy(const RunConfig& cfg) {
    Timer timer;
    Grid grid = make_grid(cfg.grid_n, cfg.half_width);
    CoefficientSet coeffs = make_test_coefficients(grid, cfg.gamma0, cfg.coefficients);
    PhaseFunction phi = phase_phi(coeffs.A, Vec3{1, 0, 0}, Vec3{0, 1, 0});
    std::filesystem::create_directories(cfg.out_dir);
    write_field(phi.phi, cfg.out_dir + "/phase_phi.cgof");
    CsvWriter csv(cfg.out_dir + "/cauchy_residuals.csv", {"case", "residual"});
    csv.row_mixed({"phase_phi", CsvWriter::format(phi.residual)});
    std::cout << "phase residual " << phi.residual << "\n";
    write_manifest(cfg, "cauchy", timer.seconds());
    return 0;
}

// ---------------------------------------------------------------------------
// reconstruct
// ---------------------------------------------------------------------------

int cmd_reconstruct(const RunConfig& cfg) {
    Timer timer;
    require_lambda(cfg);
    Grid grid = make_grid(cfg.grid_n, cfg.half_width);
    CoefficientSet coeffs = make_test_coefficients(grid, cfg.gamma0, cfg.coefficients);
    if (coeffs.boundary_warning)
        std::cerr << "warning: coefficients exceed 1e-8 of peak at the box boundary\n";
    std::vector<Vec3> samples = default_shell_samples(cfg.lambda, cfg.gamma0, cfg.shell_radii);

    std::filesystem::create_directories(cfg.out_dir);
    std::vector<ShellRow> table = recover_dA(coeffs, cfg.lambda, cfg.gamma0, samples, cfg.threads);
    double max_rel = 0.0;
    {
        CsvWriter csv(cfg.out_dir + "/recover_dA.csv",
                      {"xi1", "xi2", "xi3", "component", "re_recovered", "im_recovered",
                       "re_reference", "im_reference", "rel_err"});
        for (const auto& row : table) {
            csv.row({row.xi.x, row.xi.y, row.xi.z, double(row.component), row.recovered.real(),
                     row.recovered.imag(), row.reference.real(), row.reference.imag(), row.rel_err});
            max_rel = std::max(max_rel, row.rel_err);
        }
    }
    std::cout << "recover_dA: " << table.size() << " rows, max rel_err " << max_rel
              << (max_rel <= 0.05 ? " (<= 0.05)" : "") << "\n";

    // V recovery against a second set sharing the same magnetic potential.
    GeneratorSpec spec_b = cfg.has_coefficients_b ? cfg.coefficients_b : cfg.coefficients;
    if (!cfg.has_coefficients_b) spec_b.v_amplitude = 0.0;
    CoefficientSet set_b = make_test_coefficients(grid, cfg.gamma0, spec_b);
    try {
        CgoOptions copts;
        copts.tol = cfg.tol_cgo;
        std::vector<Vec3> vsamples(samples.begin(),
                                   samples.begin() + std::min<std::size_t>(samples.size(), 4));
        auto vtab = recover_V(coeffs, set_b, cfg.lambda, vsamples, cfg.t_sweep, copts, cfg.threads);
        CsvWriter csv(cfg.out_dir + "/recover_V.csv",
                      {"xi1", "xi2", "xi3", "re_recovered", "im_recovered", "re_reference",
                       "im_reference", "rel_err", "extrapolation_residual"});
        for (const auto& row : vtab)
            csv.row({row.xi.x, row.xi.y, row.xi.z, row.recovered.real(), row.recovered.imag(),
                     row.reference.real(), row.reference.imag(), row.rel_err,
                     row.extrapolation_residual});
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        std::cerr << msg << "\n";
        return msg.find("gauge-reduce first") != std::string::npos ? 2 : 3;
    }
    write_manifest(cfg, "reconstruct", timer.seconds());
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg) {
    Timer timer;
    AcceptanceOptions opts;
    opts.grid_n = cfg.grid_n;
    opts.half_width = cfg.half_width;
    opts.tol_scale = cfg.tolerance_scale;
    opts.threads = cfg.threads;
    opts.seed = cfg.seed == 0 ? 2024 : cfg.seed;
    std::vector<CriterionResult> results = run_acceptance(opts, std::cout);

    std::filesystem::create_directories(cfg.out_dir);
    CsvWriter csv(cfg.out_dir + "/verify_report.csv", {"id", "name", "passed", "detail"});
    bool all = true;
    for (const auto& r : results) {
        csv.row_mixed({std::to_string(r.id), r.name, r.passed ? "1" : "0", "\"" + r.detail + "\""});
        all = all && r.passed;
    }
    write_manifest(cfg, "verify", timer.seconds());
    return all ? 0 : 1;
}

}  // namespace cgoscat
