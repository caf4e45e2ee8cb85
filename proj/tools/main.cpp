#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace mkdv;
using namespace mkdv::cli;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kAcceptanceFailure = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse scattering and soliton resolution for defocusing mKdV with kink boundary conditions"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 1;

    const std::vector<std::pair<std::string, std::string>> names = {
        {"scatter", "direct scattering: reflection table, discrete spectrum, symmetry report"},
        {"spectrum", "phase points, partitions and modified norming constants"},
        {"predict", "asymptotic soliton superposition on an x grid"},
        {"exact", "exact reflectionless N-soliton field"},
        {"simulate", "finite-difference time evolution"},
        {"compare", "window errors between two field sources"},
        {"selftest", "run the invariant suite"},
    };
    for (const auto& [name, help] : names) {
        CLI::App* sub = app.add_subcommand(name, help);
        auto* opt = sub->add_option("--config", config_path, "JSON configuration file");
        if (name != "selftest") opt->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "seed for random perturbation generators")->capture_default_str();
        sub->add_option("--threads", threads, "worker threads")->capture_default_str()->check(CLI::Range(1, 256));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunContext ctx;
    ctx.seed = seed;
    ctx.threads = threads;
    ctx.out_dir = out_dir;
    try {
        ctx.config = config_path.empty() ? json::object() : load_config(config_path);
        if (!ctx.config.is_object()) throw ConfigError("config root must be a JSON object");
        std::filesystem::create_directories(ctx.out_dir);
        int status = kOk;
        if (command == "scatter") cmd_scatter(ctx);
        else if (command == "spectrum") cmd_spectrum(ctx);
        else if (command == "predict") cmd_predict(ctx);
        else if (command == "exact") cmd_exact(ctx);
        else if (command == "simulate") cmd_simulate(ctx);
        else if (command == "compare") cmd_compare(ctx);
        else if (command == "selftest") status = cmd_selftest(ctx) == 0 ? kOk : kAcceptanceFailure;
        ctx.results["status"] = status == kOk ? "ok" : "failed";
        write_manifest(ctx, command);
        if (status != kOk) std::cerr << "selftest: some invariants failed\n";
        return status;
    } catch (const AcceptanceFailure& e) {
        std::cerr << "acceptance failure: " << e.what() << "\n";
        ctx.results["status"] = "acceptance_failure";
        write_manifest(ctx, command);
        return kAcceptanceFailure;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        ctx.results["status"] = "numerical_failure";
        ctx.results["error"] = e.what();
        try {
            write_manifest(ctx, command);
        } catch (...) {
        }
        return kNumericalFailure;
    }
}
