#include "metarelay/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace metarelay {

void LatencyModel::validate() const {
    if (relay_k == 0) throw Error("latency model: relay_k must be positive");
    if (target_k == 0) throw Error("latency model: target_k must be positive");
    if (block_interval_s == 0) throw Error("latency model: block interval must be positive");
}

uint64_t expected_latency_s(const LatencyModel& model) {
    switch (model.scheme) {
        case Scheme::Relay:
            return (2 * model.relay_k + model.target_k) * model.block_interval_s +
                   model.proof_time_s;
        case Scheme::Sidechains:
            return (10 * model.relay_k + model.target_k) * model.block_interval_s;
    }
    throw Error("latency model: unknown scheme");
}

namespace {

std::string format_millihours(uint64_t millihours) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%llu.%03llu",
                  static_cast<unsigned long long>(millihours / 1000),
                  static_cast<unsigned long long>(millihours % 1000));
    return buf;
}

// millihours = 1000 * s / 3600 = 5s/18, rounded half up / up.
uint64_t millihours_half_up(uint64_t s) { return (10 * s + 18) / 36; }
uint64_t millihours_round_up(uint64_t s) { return (5 * s + 17) / 18; }

} // namespace

std::string hours_3dp_half_up(uint64_t seconds) {
    return format_millihours(millihours_half_up(seconds));
}

std::string hours_3dp_round_up(uint64_t seconds) {
    return format_millihours(millihours_round_up(seconds));
}

SweepResult run_proof_sweep(uint64_t c_min, uint64_t c_max, uint64_t step, uint64_t seed) {
    if (c_min < 1 || c_min > c_max) throw Error("sweep: need 1 <= c_min <= c_max");
    if (step < 1) throw Error("sweep: step must be >= 1");

    // One shared chain with instant finality; enough nodes that every
    // swept committee size finds distinct producers.
    const uint64_t nodes = c_max + c_max / 4 + 8;
    SimLedger ledger("sweep-relay", 5, 0, [&] {
        std::vector<ProducerSlot> slots;
        size_t width = std::to_string(nodes - 1).size();
        slots.reserve(nodes);
        for (uint64_t i = 0; i < nodes; ++i) {
            std::string num = std::to_string(i);
            num.insert(num.begin(), width - num.size(), '0');
            slots.push_back(ProducerSlot{"sweep-n" + num, 1});
        }
        return slots;
    }(), seed);
    KeyDirectory directory(seed);
    SimClock clock;
    Rng nonce_rng(derive_seed(seed, "sweep.nonce"));

    const auto distinct_producers = [&] {
        std::set<std::string> seen;
        for (const Block& b : ledger.blocks()) seen.insert(b.producer);
        return seen.size();
    };
    for (int rounds = 0; distinct_producers() < c_max; ++rounds) {
        if (rounds >= 64) throw Error("sweep: producer set never covered the largest committee");
        advance_blocks(ledger, clock, 4 * nodes);
    }

    SweepResult sweep;
    sweep.seed = seed;
    sweep.c_min = c_min;
    sweep.c_max = c_max;
    sweep.step = step;
    for (uint64_t c = c_min; c <= c_max; c += step) {
        const Committee committee =
            select_committee(ledger, ledger.chain_length(), c, directory, ledger.id());

        Bytes payload;
        append(payload, "op=lock obj=sweep-" + std::to_string(c) + " owner=bench mv=" +
                            ledger.id() + " kind=asset format=2d n=" + std::to_string(c));
        const LedgerTx tx = make_tx(TxKind::Lock, std::move(payload));
        ledger.submit_tx(tx);
        ledger.produce_block();

        std::array<uint8_t, kRandomnessBytes> nonce{};
        nonce_rng.fill(nonce);
        const CrossProof proof =
            generate_proof(committee, LedgerSource(ledger), tx, nonce, directory);
        if (!verify_proof(committee, proof)) {
            throw Error("sweep: generated proof failed verification at c=" + std::to_string(c));
        }
        const uint64_t measured = encode_proof(proof).size();
        if (measured != proof_size_bytes(c)) {
            throw Error("sweep: measured proof size disagrees with the size law at c=" +
                        std::to_string(c));
        }
        sweep.rows.push_back(SweepRow{c, measured});
    }
    return sweep;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream out;
    out << "committee_size,proof_bytes\n";
    for (const SweepRow& row : sweep.rows) {
        out << row.committee_size << "," << row.proof_bytes << "\n";
    }
    return out.str();
}

LatencySummary run_latency_experiment(const ScenarioConfig& config, const std::string& scenario,
                                      size_t n_transfers) {
    if (n_transfers < 1) throw Error("experiment: need at least one transfer");

    LatencySummary summary;
    summary.scenario = scenario;
    summary.runs = n_transfers;
    summary.base_seed = config.seed;

    const TransferRequest request = request_for(config, scenario);
    uint64_t total = 0;
    for (size_t i = 0; i < n_transfers; ++i) {
        ScenarioConfig run_config = config;
        run_config.seed = config.seed + i;
        World world = build_world(run_config);
        const TransferTrace trace = run_transfer(world, request);
        if (!trace.completed) {
            throw Error("experiment: run " + std::to_string(i) + " failed: " + trace.failure);
        }
        const uint64_t duration = simulated_duration(trace);
        summary.durations_s.push_back(duration);
        total += duration;
    }
    summary.min_s = *std::min_element(summary.durations_s.begin(), summary.durations_s.end());
    summary.max_s = *std::max_element(summary.durations_s.begin(), summary.durations_s.end());
    summary.mean_s = static_cast<double>(total) / static_cast<double>(n_transfers);

    summary.model.relay_k = config.relay.common_prefix_k;
    summary.model.block_interval_s = config.relay.block_interval_s;
    summary.model.proof_time_s = config.proof_time_s;
    summary.model.scheme = Scheme::Relay;
    summary.model.target_k = 0;
    for (const MvConfig& mv : config.metaverses) {
        if (mv.id == request.target && mv.kind == MvKind::Decentralized) {
            summary.model.target_k = mv.common_prefix_k;
        }
    }
    summary.expected_s = expected_latency_s(summary.model);
    summary.abs_err_s =
        std::abs(summary.mean_s - static_cast<double>(summary.expected_s));
    return summary;
}

std::string latency_csv(const LatencySummary& summary) {
    std::ostringstream out;
    out << "run,duration_s,duration_h\n";
    for (size_t i = 0; i < summary.durations_s.size(); ++i) {
        out << i << "," << summary.durations_s[i] << ","
            << hours_3dp_half_up(summary.durations_s[i]) << "\n";
    }
    return out.str();
}

std::string experiment_summary_text(const LatencySummary& summary) {
    char mean_buf[48];
    std::snprintf(mean_buf, sizeof(mean_buf), "%.3f", summary.mean_s);
    char err_buf[48];
    std::snprintf(err_buf, sizeof(err_buf), "%.3f", summary.abs_err_s);

    std::ostringstream out;
    out << "experiment scenario=" << summary.scenario << " runs=" << summary.runs
        << " seed=" << summary.base_seed << "\n";
    out << "params relay_k=" << summary.model.relay_k << " target_k=" << summary.model.target_k
        << " interval_s=" << summary.model.block_interval_s
        << " t_proof_s=" << summary.model.proof_time_s << "\n";
    out << "simulated mean_s=" << mean_buf << " min_s=" << summary.min_s
        << " max_s=" << summary.max_s << "\n";
    out << "model expected_s=" << summary.expected_s << " expected_h="
        << hours_3dp_half_up(summary.expected_s) << " abs_err_s=" << err_buf << "\n";
    char ref_buf[160];
    std::snprintf(ref_buf, sizeof(ref_buf), "reference table_mean_h=%.3f text_mean_min=%.1f",
                  kOriginalTableMeanHours, kOriginalTextMeanMinutes);
    out << ref_buf
        << " note=\"the original text figure and table figure disagree;"
        << " the table model is reproduced here\"\n";
    std::snprintf(ref_buf, sizeof(ref_buf),
                  "reference sidechains_table_h=%.3f sidechains_text_h=%.3f",
                  kOriginalTableSidechainsHours, kOriginalTextSidechainsHours);
    out << ref_buf
        << " note=\"original sidechains text and table figures also disagree;"
        << " the table value is used\"\n";
    return out.str();
}

std::string render_latency_table(const LatencyModel& base) {
    LatencyModel relay = base;
    relay.scheme = Scheme::Relay;
    LatencyModel side = base;
    side.scheme = Scheme::Sidechains;

    const uint64_t i = base.block_interval_s;
    const uint64_t relay_confirm_s = 2 * base.relay_k * i;
    const uint64_t proof_s = base.proof_time_s;
    const uint64_t target_confirm_s = base.target_k * i;
    const uint64_t side_confirm_s = 10 * base.relay_k * i;
    const uint64_t relay_total_s = expected_latency_s(relay);
    const uint64_t side_total_s = expected_latency_s(side);

    const uint64_t relay_rows_mh = millihours_round_up(relay_confirm_s) +
                                   millihours_round_up(proof_s) +
                                   millihours_round_up(target_confirm_s);
    const uint64_t side_rows_mh =
        millihours_round_up(side_confirm_s) + millihours_round_up(target_confirm_s);

    char ratio_buf[32];
    std::snprintf(ratio_buf, sizeof(ratio_buf), "%.3f",
                  static_cast<double>(relay_total_s) / static_cast<double>(side_total_s));

    std::ostringstream out;
    out << "latency-table relay_k=" << base.relay_k << " target_k=" << base.target_k
        << " interval_s=" << i << " t_proof_s=" << base.proof_time_s << "\n";
    out << "row component=relay_confirm relay_blocks=2k relay_s=" << relay_confirm_s
        << " relay_h=" << format_millihours(millihours_round_up(relay_confirm_s))
        << " sidechains_blocks=10k sidechains_s=" << side_confirm_s
        << " sidechains_h=" << format_millihours(millihours_round_up(side_confirm_s)) << "\n";
    out << "row component=proof_generation relay_blocks=t relay_s=" << proof_s
        << " relay_h=" << format_millihours(millihours_round_up(proof_s))
        << " sidechains_blocks=- sidechains_s=0 sidechains_h=0.000\n";
    out << "row component=target_confirm relay_blocks=k' relay_s=" << target_confirm_s
        << " relay_h=" << format_millihours(millihours_round_up(target_confirm_s))
        << " sidechains_blocks=k' sidechains_s=" << target_confirm_s
        << " sidechains_h=" << format_millihours(millihours_round_up(target_confirm_s)) << "\n";
    out << "total rows relay_blocks=2k+t+k' relay_h=" << format_millihours(relay_rows_mh)
        << " sidechains_blocks=10k+k' sidechains_h=" << format_millihours(side_rows_mh) << "\n";
    out << "total exact relay_s=" << relay_total_s
        << " relay_h=" << hours_3dp_half_up(relay_total_s) << " sidechains_s=" << side_total_s
        << " sidechains_h=" << hours_3dp_half_up(side_total_s) << "\n";
    out << "ratio relay/sidechains=" << ratio_buf << "\n";
    return out.str();
}

} // namespace metarelay
