// Command-line front end: config assembly, experiment dispatch across seed
// replicates, and artifact persistence. Standard output carries a single
// machine-readable JSON summary; progress goes to standard error.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "risbo/config.hpp"
#include "risbo/errors.hpp"
#include "risbo/eval.hpp"
#include "risbo/io.hpp"
#include "risbo/jointopt.hpp"
#include "risbo/oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOptions {
    std::string config_path;
    std::string preset = "desk";
    std::uint64_t seed = 1;
    int jobs = 0;  // 0: all available cores
    std::string out;
    std::vector<double> snr_db;
    int n_bo = 0;  // 0: keep config value
    bool no_optimize = false;
};

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const risbo::ConfigError*>(&e) != nullptr) return "config";
    if (dynamic_cast<const risbo::ShapeError*>(&e) != nullptr) return "shape";
    if (dynamic_cast<const risbo::InvalidParameterError*>(&e) != nullptr) {
        return "invalid_parameter";
    }
    if (dynamic_cast<const risbo::InvalidInputError*>(&e) != nullptr) return "invalid_input";
    if (dynamic_cast<const risbo::InvalidStateError*>(&e) != nullptr) return "invalid_state";
    if (dynamic_cast<const risbo::DecompositionError*>(&e) != nullptr) return "decomposition";
    if (dynamic_cast<const risbo::FitFailureError*>(&e) != nullptr) return "fit_failure";
    if (dynamic_cast<const risbo::ExhaustionError*>(&e) != nullptr) return "exhaustion";
    return "internal";
}

risbo::ExperimentConfig assemble_config(const CliOptions& opts, const std::string& subcommand) {
    risbo::ExperimentConfig config = opts.config_path.empty()
                                         ? risbo::preset_config(opts.preset)
                                         : risbo::parse_config(opts.config_path, opts.preset);
    if (opts.n_bo > 0) {
        config.bo.n_iterations = opts.n_bo;
    }
    if (!opts.snr_db.empty()) {
        const bool scalar_context =
            subcommand == "joint" || subcommand == "baseline" || subcommand == "fig4b";
        if (scalar_context) {
            if (opts.snr_db.size() != 1) {
                throw risbo::ConfigError("bo.snr_db",
                                         "this subcommand takes exactly one --snr-db value");
            }
            config.bo.snr_db = opts.snr_db.front();
        } else {
            config.eval.snr_db = opts.snr_db;
        }
    }
    config.validate();
    return config;
}

std::string timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_buf{};
    localtime_r(&now, &tm_buf);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y%m%d-%H%M%S", &tm_buf);
    return buffer;
}

fs::path prepare_run_dir(const CliOptions& opts, const risbo::ExperimentConfig& config,
                         const std::string& subcommand) {
    if (!opts.out.empty()) {
        fs::create_directories(opts.out);
        return {opts.out};
    }
    const fs::path base = fs::path(config.output_dir) /
                          (subcommand + "-" + timestamp_now() + "-seed" +
                           std::to_string(opts.seed));
    fs::path dir = base;
    for (int suffix = 1; fs::exists(dir); ++suffix) {
        dir = base;
        dir += "-" + std::to_string(suffix);
    }
    fs::create_directories(dir);
    return dir;
}

json trace_summary(std::uint64_t seed, const risbo::RunResult& result) {
    return json{{"seed", seed},
                {"best_ber", result.best_ber},
                {"best_iteration", result.best_iteration},
                {"confirmation_ber", result.confirmation_ber},
                {"final_running_min_ber",
                 result.running_min_ber(static_cast<int>(result.trace.size()))},
                {"pilot_transmissions", result.pilot_transmissions}};
}

/// Runs one replicate of a subcommand into its own directory.
json run_replicate(const std::string& subcommand, const risbo::ExperimentConfig& config,
                   std::uint64_t seed, const fs::path& dir, bool optimize) {
    if (subcommand == "joint") {
        const risbo::RunResult result = risbo::run_joint(config, seed);
        risbo::write_trace_csv(dir / "trace.csv", result);
        return trace_summary(seed, result);
    }
    if (subcommand == "baseline") {
        const risbo::RunResult result = risbo::run_random_baseline(config, seed);
        risbo::write_trace_csv(dir / "trace.csv", result);
        return trace_summary(seed, result);
    }
    if (subcommand == "fig4b") {
        const risbo::Fig4bResult result = risbo::experiment_fig4b(config, seed);
        risbo::write_trace_csv(dir / "bo_trace.csv", result.bo);
        risbo::write_trace_csv(dir / "random_trace.csv", result.random);
        return json{{"seed", seed},
                    {"bo", trace_summary(seed, result.bo)},
                    {"random", trace_summary(seed, result.random)}};
    }
    if (subcommand == "sweep") {
        risbo::SweepOptions options;
        const std::vector<risbo::SweepRecord> records = risbo::snr_sweep(config, seed, options);
        risbo::write_sweep_csv(dir / "sweep.csv", records);
        return json{{"seed", seed}, {"rows", records.size()}};
    }
    if (subcommand == "fig4a") {
        const std::vector<risbo::SweepRecord> records =
            risbo::experiment_fig4a(config, seed, optimize);
        risbo::write_sweep_csv(dir / "fig4a.csv", records);
        return json{{"seed", seed}, {"rows", records.size()}};
    }
    throw risbo::InvalidParameterError("unknown subcommand " + subcommand);
}

int run_oracle_check(std::uint64_t seed, const fs::path& dir) {
    const std::vector<risbo::OracleResult> results = risbo::run_oracle_suite(seed);
    json report = json::array();
    bool all_passed = true;
    for (const risbo::OracleResult& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        report.push_back(json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        all_passed = all_passed && r.passed;
    }
    risbo::write_json_file(dir / "oracle_report.json", report);
    return all_passed ? 0 : 1;
}

int run_command(const std::string& subcommand, const CliOptions& opts) {
    const auto wall_start = std::chrono::steady_clock::now();
    const risbo::ExperimentConfig config = assemble_config(opts, subcommand);
    const fs::path run_dir = prepare_run_dir(opts, config, subcommand);

    std::vector<std::uint64_t> seeds = config.eval.seeds;
    if (seeds.empty()) {
        seeds.push_back(opts.seed);
    }

    json manifest = risbo::make_manifest(config, opts.seed, subcommand);
    manifest["seeds"] = seeds;
    risbo::write_json_file(run_dir / "manifest.json", manifest);

    int exit_code = 0;
    json results = json::array();
    if (subcommand == "oracle-check") {
        exit_code = run_oracle_check(opts.seed, run_dir);
    } else {
        // One directory per replicate when there are several; merged in seed
        // order regardless of completion order.
        std::vector<fs::path> dirs;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            fs::path dir = seeds.size() == 1
                               ? run_dir
                               : run_dir / ("seed_" + std::to_string(seeds[i]));
            fs::create_directories(dir);
            dirs.push_back(std::move(dir));
        }

        std::vector<json> slot(seeds.size());
        std::vector<std::string> failures(seeds.size());
        std::atomic<std::size_t> next{0};
        std::mutex log_mutex;
        auto worker = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= seeds.size()) {
                    return;
                }
                {
                    std::lock_guard<std::mutex> lock(log_mutex);
                    std::cerr << "[risbo] " << subcommand << " seed " << seeds[i] << " started\n";
                }
                try {
                    slot[i] = run_replicate(subcommand, config, seeds[i], dirs[i],
                                            !opts.no_optimize);
                } catch (const std::exception& e) {
                    failures[i] = e.what();
                }
                {
                    std::lock_guard<std::mutex> lock(log_mutex);
                    std::cerr << "[risbo] " << subcommand << " seed " << seeds[i] << " done\n";
                }
            }
        };

        unsigned n_threads = opts.jobs > 0 ? static_cast<unsigned>(opts.jobs)
                                           : std::max(1u, std::thread::hardware_concurrency());
        n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(seeds.size()));
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t) {
                pool.emplace_back(worker);
            }
            for (std::thread& t : pool) {
                t.join();
            }
        }

        for (std::size_t i = 0; i < seeds.size(); ++i) {
            if (!failures[i].empty()) {
                throw risbo::InvalidStateError("seed " + std::to_string(seeds[i]) +
                                               " failed: " + failures[i]);
            }
            results.push_back(slot[i]);
        }
    }

    const double wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    risbo::write_json_file(run_dir / "timing.json", json{{"wall_seconds", wall_seconds}});

    json summary{{"subcommand", subcommand},
                 {"run_dir", run_dir.string()},
                 {"exit_code", exit_code}};
    if (!results.empty()) {
        summary["results"] = results;
    }
    std::cout << summary.dump(2) << "\n";
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint learned-receiver and RIS-phase optimization experiments"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "JSON config applied over the preset");
    app.add_option("--preset", opts.preset, "Parameter preset: desk or paper");
    app.add_option("--seed", opts.seed, "Master seed");
    app.add_option("--jobs", opts.jobs, "Worker threads for seed replicates (0 = all cores)");
    app.add_option("--out", opts.out, "Run directory (default: timestamped under output_dir)");

    std::vector<CLI::App*> subcommands;
    subcommands.push_back(app.add_subcommand("sweep", "BER versus SNR for the fixed-RIS receiver"));
    subcommands.push_back(app.add_subcommand("joint", "Joint receiver and RIS optimization loop"));
    subcommands.push_back(
        app.add_subcommand("baseline", "Joint loop with random RIS proposals"));
    subcommands.push_back(
        app.add_subcommand("fig4a", "Fixed-RIS versus optimized-RIS BER sweep"));
    subcommands.push_back(
        app.add_subcommand("fig4b", "Paired optimizer-versus-random traces at fixed SNR"));
    subcommands.push_back(
        app.add_subcommand("oracle-check", "Cross-check numeric kernels against references"));
    for (CLI::App* sub : subcommands) {
        sub->fallthrough();  // --seed etc. may follow the subcommand
        sub->add_option("--snr-db", opts.snr_db,
                        "SNR override: a list for sweeps, one value for joint loops")
            ->delimiter(',');
        sub->add_option("--n-bo", opts.n_bo, "Override the number of optimization iterations");
    }
    app.get_subcommand("fig4a")->add_flag("--no-optimize", opts.no_optimize,
                                          "Reuse the initial RIS configuration (control run)");

    CLI11_PARSE(app, argc, argv);
    const std::string subcommand = app.get_subcommands().front()->get_name();

    try {
        return run_command(subcommand, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        const json report{{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}};
        try {
            if (!opts.out.empty() && fs::exists(opts.out)) {
                risbo::write_json_file(fs::path(opts.out) / "error.json", report);
            }
        } catch (...) {
            // The diagnostic on stderr is the best we can do.
        }
        std::cout << report.dump(2) << "\n";
        return 1;
    }
}
