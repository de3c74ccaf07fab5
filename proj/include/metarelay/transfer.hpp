#pragma once

#include <functional>
#include <string>
#include <vector>

#include "metarelay/world.hpp"

namespace metarelay {

enum class TransferState {
    Initiated,
    SourceLocked,
    SourceProved,
    RelayMinted,
    RelayStaked,
    RelayProved,
    Customized,
    TargetMinted,
    Completed,
    Failed,
};

const char* transfer_state_name(TransferState state);

struct TransferRequest {
    std::string obj_id;
    std::string owner_id;
    std::string source;
    std::string target;
    std::string relay;
};

struct TraceEvent {
    TransferState state;
    uint64_t time_s = 0;
    std::string detail; // "tx=<hex>", "proof=<hex>", "customizer=<id>", or empty
};

struct TransferTrace {
    TransferRequest request;
    std::vector<TraceEvent> events;
    bool completed = false;
    std::string failure; // set when not completed

    uint64_t tx_count() const;
    uint64_t proof_count() const;
};

// Test hook: runs on entry to each state and may throw RefusalError to
// inject a failure there.
struct TransferHooks {
    std::function<void(TransferState)> on_step;
};

// Drives one object through source lock -> proof -> relay mint -> relay
// stake -> proof -> (customize) -> target mint. Confirmation depth and
// ack delays cost simulated time; proof generation runs concurrently
// with the attested tx's confirmation wait, so a proof only delays the
// transfer by however much of t_proof the wait did not already cover.
// Any refusal yields a Failed trace naming the refusing step; the world
// keeps its lock escrows and nothing else.
TransferTrace run_transfer(World& world, const TransferRequest& request,
                           const TransferHooks* hooks = nullptr);

// Completed-trace wall time: last event minus first event, in simulated
// seconds. Throws on non-completed traces.
uint64_t simulated_duration(const TransferTrace& trace);

// One record per event; stable, line-oriented.
std::string export_trace(const TransferTrace& trace);

} // namespace metarelay
