"""Committee-attested cross-metaverse transfer simulator."""

from ._core import (
    POP_BYTES,
    SIG_BYTES,
    TX_BYTES,
    VK_BYTES,
    SimulatorError,
    expected_latency_s,
    export_scenario_trace,
    latency_experiment,
    proof_size_bytes,
    run_scenario,
    run_sweep,
)

__all__ = [
    "POP_BYTES",
    "SIG_BYTES",
    "TX_BYTES",
    "VK_BYTES",
    "SimulatorError",
    "expected_latency_s",
    "export_scenario_trace",
    "latency_experiment",
    "proof_size_bytes",
    "run_scenario",
    "run_sweep",
]
