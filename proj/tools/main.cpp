#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "optexec/coeffs.hpp"
#include "optexec/figures.hpp"
#include "optexec/params.hpp"
#include "optexec/sim.hpp"
#include "optexec/strategy.hpp"
#include "optexec/validation.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using Clock = std::chrono::steady_clock;

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

/// Written last, after every artifact exists.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::string& config_path, std::uint64_t seed,
                    const std::vector<std::string>& artifacts, Clock::time_point started) {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config_path;
    j["seed"] = seed;
    j["output_dir"] = out_dir;
    j["artifacts"] = artifacts;
    j["tool_version"] = kVersion;
    j["duration_seconds"] =
        std::chrono::duration<double>(Clock::now() - started).count();
    write_text(out_dir + "/manifest.json", j.dump(2) + "\n");
}

int cmd_solve(const std::string& config_path, const std::string& out_dir, double cutoff_opt,
              std::size_t steps_opt) {
    const auto started = Clock::now();
    optexec::ModelParams params = optexec::load_config_file(config_path);
    if (steps_opt > 0) {
        std::visit([&](auto& p) { p.horizon = optexec::TimeGrid(0.0, p.horizon.t_end, steps_opt); },
                   params);
    }
    const double cutoff =
        cutoff_opt > 0.0 ? cutoff_opt : optexec::default_cutoff(optexec::model_grid(params));

    std::string csv = std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, optexec::BasicModelParams>)
                return optexec::to_csv(optexec::solve_basic(p, cutoff));
            else if constexpr (std::is_same_v<P, optexec::SignalModelParams>)
                return optexec::to_csv(optexec::solve_signal(p, cutoff));
            else
                return optexec::to_csv(optexec::solve_stochvol(p, cutoff));
        },
        params);

    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/coeffs.csv", csv);
    write_manifest(out_dir, "solve", config_path, 0, {out_dir + "/coeffs.csv"}, started);
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::size_t n_paths, std::uint64_t seed, std::size_t emit_paths,
                 std::size_t steps_opt) {
    const auto started = Clock::now();
    const optexec::ModelParams params = optexec::load_config_file(config_path);
    const auto& grid = optexec::model_grid(params);
    const std::size_t n_steps = steps_opt > 0 ? steps_opt : grid.n_steps;
    const optexec::StrategyRule rule =
        optexec::make_strategy(params, optexec::default_cutoff(grid));

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> artifacts;
    for (std::size_t i = 0; i < std::min(emit_paths, n_paths); ++i) {
        const auto path = optexec::simulate_path(params, rule, seed + i, n_steps);
        const std::string file = out_dir + "/path_" + std::to_string(i) + ".csv";
        write_text(file, optexec::path_csv(path));
        artifacts.push_back(file);
    }
    const auto summary = optexec::estimate_mean_variance(
        params, rule, std::max<std::size_t>(n_paths, 2), seed, n_steps);
    write_text(out_dir + "/summary.json", optexec::summary_json(summary, params, seed) + "\n");
    artifacts.push_back(out_dir + "/summary.json");
    write_manifest(out_dir, "simulate", config_path, seed, artifacts, started);
    return 0;
}

int cmd_validate(const std::string& level, const std::string& report_path) {
    const auto results = optexec::run_validation(level == "full");
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  measured=" << r.measured
                  << " tolerance=" << r.tolerance;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
    }
    const std::string json = optexec::validation_json(results) + "\n";
    if (!report_path.empty())
        write_text(report_path, json);
    else
        std::cout << json;
    return optexec::all_passed(results) ? 0 : 3;
}

int cmd_figures(const std::string& out_dir) {
    const auto started = Clock::now();
    std::filesystem::create_directories(out_dir);
    const auto figures = optexec::generate_figures(out_dir);
    for (const auto& c : figures.checks) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
    }
    write_manifest(out_dir, "figures", "", 0, figures.files, started);
    return figures.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-consistent mean-variance trade execution solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", level = "quick", report_path;
    double cutoff = 0.0;
    std::size_t steps = 0, n_paths = 1, emit_paths = 0;
    std::uint64_t seed = 1;

    auto* solve = app.add_subcommand("solve", "Solve the coefficient ODE system");
    solve->add_option("config", config_path, "model config JSON")->required();
    solve->add_option("-o,--output", out_dir, "output directory");
    solve->add_option("--cutoff", cutoff, "terminal cutoff epsilon (default max(1e-3 T, 2 dt))");
    solve->add_option("--steps", steps, "override grid steps");

    auto* simulate = app.add_subcommand("simulate", "Simulate the feedback strategy");
    simulate->add_option("config", config_path, "model config JSON")->required();
    simulate->add_option("-o,--output", out_dir, "output directory");
    simulate->add_option("--paths", n_paths, "number of Monte Carlo paths");
    simulate->add_option("--seed", seed, "base seed");
    simulate->add_option("--emit-paths", emit_paths, "write the first k path CSVs");
    simulate->add_option("--steps", steps, "simulation steps (default: config grid)");

    auto* validate = app.add_subcommand("validate", "Run the validation suite");
    validate->add_option("--level", level, "quick|full")
        ->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--report", report_path, "write the JSON report here");

    auto* figures = app.add_subcommand("figures", "Emit plot-ready CSV data");
    figures->add_option("-o,--output", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(config_path, out_dir, cutoff, steps);
        if (simulate->parsed())
            return cmd_simulate(config_path, out_dir, n_paths, seed, emit_paths, steps);
        if (validate->parsed()) return cmd_validate(level, report_path);
        return cmd_figures(out_dir);
    } catch (const optexec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const optexec::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
