#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "metarelay/bench.hpp"
#include "metarelay/scenario.hpp"
#include "metarelay/transfer.hpp"

namespace {

using namespace metarelay;

constexpr int kExitOk = 0;
constexpr int kExitFailedTransfer = 1;
constexpr int kExitBadConfig = 2;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

// Seed precedence: --seed flag, then METARELAY_SEED, then the config.
uint64_t effective_seed(const std::optional<uint64_t>& flag_seed, uint64_t config_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("METARELAY_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error("METARELAY_SEED must be an unsigned integer");
        }
    }
    return config_seed;
}

ScenarioConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) return default_config();
    return load_config(config_path);
}

int cmd_run_transfer(const std::string& scenario, const std::string& config_path,
                     const std::string& out_path, const std::optional<uint64_t>& seed) {
    ScenarioConfig config = load_or_default(config_path);
    config.seed = effective_seed(seed, config.seed);
    const TransferRequest request = request_for(config, scenario);
    World world = build_world(config);
    const TransferTrace trace = run_transfer(world, request);
    write_file(out_path, export_trace(trace));
    if (!trace.completed) {
        std::cerr << "error: transfer failed: " << trace.failure << "\n";
        return kExitFailedTransfer;
    }
    std::cout << "completed scenario=" << scenario << " duration_s=" << simulated_duration(trace)
              << " trace=" << out_path << "\n";
    return kExitOk;
}

int cmd_sweep(uint64_t c_min, uint64_t c_max, uint64_t step, const std::string& out_path,
              const std::optional<uint64_t>& seed) {
    const SweepResult sweep = run_proof_sweep(c_min, c_max, step, effective_seed(seed, 0));
    write_file(out_path, sweep_csv(sweep));
    std::cout << "sweep rows=" << sweep.rows.size() << " out=" << out_path << "\n";
    return kExitOk;
}

int cmd_latency_table(const LatencyModel& model, const std::string& out_path) {
    const std::string table = render_latency_table(model);
    if (out_path.empty()) {
        std::cout << table;
    } else {
        write_file(out_path, table);
        std::cout << "latency-table out=" << out_path << "\n";
    }
    return kExitOk;
}

int cmd_experiment(const std::string& scenario, const std::string& config_path, size_t runs,
                   const std::string& out_path, const std::string& summary_path,
                   const std::optional<uint64_t>& seed) {
    ScenarioConfig config = load_or_default(config_path);
    config.seed = effective_seed(seed, config.seed);
    const LatencySummary summary = run_latency_experiment(config, scenario, runs);
    write_file(out_path, latency_csv(summary));
    const std::string text = experiment_summary_text(summary);
    if (!summary_path.empty()) write_file(summary_path, text);
    std::cout << text;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-metaverse transfer simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<uint64_t> seed;

    auto* run = app.add_subcommand("run-transfer", "run one transfer scenario and export its trace");
    std::string scenario = "dm2dm";
    run->add_option("scenario", scenario, "one of dm2dm, cm2cm, dm2cm, cm2dm (or any configured name)");
    run->add_option("--config", config_path, "scenario config file (JSON, // comments allowed)");
    std::string trace_out = "trace.txt";
    run->add_option("--out", trace_out, "trace output file");
    run->add_option("--seed", seed, "seed override");

    auto* sweep = app.add_subcommand("sweep", "proof size sweep over committee sizes");
    uint64_t c_min = 0;
    uint64_t c_max = 0;
    uint64_t step = 50;
    std::string sweep_out = "sweep.csv";
    sweep->add_option("--min", c_min, "smallest committee size")->required();
    sweep->add_option("--max", c_max, "largest committee size")->required();
    sweep->add_option("--step", step, "committee size step");
    sweep->add_option("--out", sweep_out, "CSV output file");
    sweep->add_option("--seed", seed, "seed override");

    auto* table = app.add_subcommand("latency-table", "analytical transfer-time table for both schemes");
    LatencyModel model;
    table->add_option("--relay-k", model.relay_k, "relay common-prefix depth");
    table->add_option("--target-k", model.target_k, "target common-prefix depth");
    table->add_option("--interval", model.block_interval_s, "block interval in seconds");
    table->add_option("--t-proof", model.proof_time_s, "proof generation time in seconds");
    table->add_option("--out", out_path, "write the table here instead of stdout");

    auto* experiment = app.add_subcommand("experiment", "simulated transfers vs the analytical model");
    std::string exp_scenario = "dm2dm";
    size_t runs = 200;
    std::string latency_out = "latency.csv";
    std::string summary_out;
    experiment->add_option("--scenario", exp_scenario, "transfer scenario to repeat");
    experiment->add_option("--runs", runs, "number of independent seeded runs");
    experiment->add_option("--config", config_path, "scenario config file");
    experiment->add_option("--out", latency_out, "per-run CSV output file");
    experiment->add_option("--summary", summary_out, "also write the summary here");
    experiment->add_option("--seed", seed, "base seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help and friends
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }

    try {
        if (run->parsed()) return cmd_run_transfer(scenario, config_path, trace_out, seed);
        if (sweep->parsed()) return cmd_sweep(c_min, c_max, step, sweep_out, seed);
        if (table->parsed()) return cmd_latency_table(model, out_path);
        if (experiment->parsed()) {
            return cmd_experiment(exp_scenario, config_path, runs, latency_out, summary_out, seed);
        }
        std::cerr << "error: no subcommand\n";
        return kExitBadConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
}
