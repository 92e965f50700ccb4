// Command-line driver: direct | cgo | cauchy | reconstruct | verify.
// Exit codes: 0 pass, 1 acceptance failure, 2 usage/config error,
// 3 numerical non-convergence.
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cgoscat/cgo.hpp"
#include "cgoscat/pipeline.hpp"

namespace {

constexpr const char* kUsage =
    "usage: cgoscat <direct|cgo|cauchy|reconstruct|verify> --config PATH [--out DIR]\n"
    "               [--seed N] [--threads N]\n"
    "The config is a single JSON document; see configs/ for presets.\n";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-energy inverse scattering toolkit"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    long long seed = -1;
    int threads = -1;
    app.add_option("--config", config_path, "path to the JSON run configuration");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "seed for randomized components (overrides config)");
    app.add_option("--threads", threads, "worker threads, 0 = hardware (overrides config)");

    auto* sub_direct = app.add_subcommand("direct", "far fields, sigma matrix, unitarity report");
    auto* sub_cgo = app.add_subcommand("cgo", "CGO solutions over the h sweep");
    auto* sub_cauchy = app.add_subcommand("cauchy", "Cauchy-transform phases and residuals");
    auto* sub_recon = app.add_subcommand("reconstruct", "dA and V recovery tables");
    auto* sub_verify = app.add_subcommand("verify", "run the acceptance suite");
    for (auto* sub : {sub_direct, sub_cgo, sub_cauchy, sub_recon, sub_verify})
        sub->fallthrough();  // global --config/--out/... may follow the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n" << kUsage;
        return 2;
    }

    if (app.get_subcommands().empty()) {
        std::cerr << kUsage;
        return 2;
    }
    if (config_path.empty()) {
        std::cerr << kUsage;
        return 2;
    }

    cgoscat::RunConfig cfg;
    try {
        cfg = cgoscat::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n" << kUsage;
        return 2;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) cfg.threads = threads;

    try {
        if (sub_direct->parsed()) return cgoscat::cmd_direct(cfg);
        if (sub_cgo->parsed()) return cgoscat::cmd_cgo(cfg);
        if (sub_cauchy->parsed()) return cgoscat::cmd_cauchy(cfg);
        if (sub_recon->parsed()) return cgoscat::cmd_reconstruct(cfg);
        if (sub_verify->parsed()) return cgoscat::cmd_verify(cfg);
    } catch (const cgoscat::CgoDivergenceError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        std::cerr << msg << "\n";
        if (msg.rfind("config:", 0) == 0) return 2;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    std::cerr << kUsage;
    return 2;
}
