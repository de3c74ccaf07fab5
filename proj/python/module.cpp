#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metarelay/bench.hpp"
#include "metarelay/scenario.hpp"
#include "metarelay/transfer.hpp"

namespace py = pybind11;

namespace {

using namespace metarelay;

Scheme scheme_from_name(const std::string& name) {
    if (name == "relay") return Scheme::Relay;
    if (name == "sidechains") return Scheme::Sidechains;
    throw Error("scheme must be \"relay\" or \"sidechains\"");
}

py::dict trace_to_dict(const TransferTrace& trace) {
    py::dict out;
    out["terminal"] = trace.completed ? "Completed" : "Failed";
    out["failure"] = trace.failure;
    py::list events;
    for (const TraceEvent& ev : trace.events) {
        events.append(py::make_tuple(transfer_state_name(ev.state), ev.time_s, ev.detail));
    }
    out["events"] = events;
    out["tx_count"] = trace.tx_count();
    out["proof_count"] = trace.proof_count();
    if (trace.completed) out["duration_s"] = simulated_duration(trace);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "committee-attested cross-metaverse transfer simulator";

    m.attr("VK_BYTES") = kVkBytes;
    m.attr("SIG_BYTES") = kSigBytes;
    m.attr("POP_BYTES") = kPopBytes;
    m.attr("TX_BYTES") = kTxBytes;

    m.def("proof_size_bytes", &proof_size_bytes, py::arg("committee_size"),
          "Encoded cross-proof size in bytes for a committee of the given size.");

    m.def(
        "expected_latency_s",
        [](uint64_t relay_k, uint64_t target_k, uint64_t interval_s, uint64_t t_proof_s,
           const std::string& scheme) {
            LatencyModel model{relay_k, target_k, interval_s, t_proof_s,
                               scheme_from_name(scheme)};
            return expected_latency_s(model);
        },
        py::arg("relay_k") = 400, py::arg("target_k") = 500, py::arg("interval_s") = 5,
        py::arg("t_proof_s") = 90, py::arg("scheme") = "relay",
        "Analytical transfer time in seconds.");

    m.def(
        "run_sweep",
        [](uint64_t c_min, uint64_t c_max, uint64_t step, uint64_t seed) {
            const SweepResult sweep = run_proof_sweep(c_min, c_max, step, seed);
            std::vector<std::pair<uint64_t, uint64_t>> rows;
            rows.reserve(sweep.rows.size());
            for (const SweepRow& row : sweep.rows) {
                rows.emplace_back(row.committee_size, row.proof_bytes);
            }
            return rows;
        },
        py::arg("c_min"), py::arg("c_max"), py::arg("step") = 50, py::arg("seed") = 0,
        "Generate one real proof per committee size; returns (size, bytes) rows.");

    m.def(
        "run_scenario",
        [](const std::string& name, uint64_t seed) {
            ScenarioConfig config = default_config();
            config.seed = seed;
            World world = build_world(config);
            return trace_to_dict(run_transfer(world, request_for(config, name)));
        },
        py::arg("name") = "dm2dm", py::arg("seed") = 0,
        "Run one built-in transfer scenario; returns the trace as a dict.");

    m.def(
        "export_scenario_trace",
        [](const std::string& name, uint64_t seed) {
            ScenarioConfig config = default_config();
            config.seed = seed;
            World world = build_world(config);
            return export_trace(run_transfer(world, request_for(config, name)));
        },
        py::arg("name") = "dm2dm", py::arg("seed") = 0,
        "Run one built-in scenario and return its textual trace export.");

    m.def(
        "latency_experiment",
        [](const std::string& scenario, size_t runs, uint64_t seed) {
            ScenarioConfig config = default_config();
            config.seed = seed;
            const LatencySummary summary = run_latency_experiment(config, scenario, runs);
            py::dict out;
            out["runs"] = summary.runs;
            out["mean_s"] = summary.mean_s;
            out["min_s"] = summary.min_s;
            out["max_s"] = summary.max_s;
            out["expected_s"] = summary.expected_s;
            out["abs_err_s"] = summary.abs_err_s;
            return out;
        },
        py::arg("scenario") = "dm2dm", py::arg("runs") = 10, py::arg("seed") = 0,
        "Repeat a scenario across seeded worlds and compare with the model.");

    py::register_exception<Error>(m, "SimulatorError");
}
