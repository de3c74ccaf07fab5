#include "metarelay/transfer.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace metarelay {

const char* transfer_state_name(TransferState state) {
    switch (state) {
        case TransferState::Initiated: return "Initiated";
        case TransferState::SourceLocked: return "SourceLocked";
        case TransferState::SourceProved: return "SourceProved";
        case TransferState::RelayMinted: return "RelayMinted";
        case TransferState::RelayStaked: return "RelayStaked";
        case TransferState::RelayProved: return "RelayProved";
        case TransferState::Customized: return "Customized";
        case TransferState::TargetMinted: return "TargetMinted";
        case TransferState::Completed: return "Completed";
        case TransferState::Failed: return "Failed";
    }
    return "Unknown";
}

uint64_t TransferTrace::tx_count() const {
    uint64_t n = 0;
    for (const TraceEvent& ev : events) {
        if (ev.detail.rfind("tx=", 0) == 0) ++n;
    }
    return n;
}

uint64_t TransferTrace::proof_count() const {
    uint64_t n = 0;
    for (const TraceEvent& ev : events) {
        if (ev.detail.rfind("proof=", 0) == 0) ++n;
    }
    return n;
}

namespace {

std::unique_ptr<AttestationSource> attestation_view(World& world, Metaverse& mv) {
    if (mv.is_dm()) return std::make_unique<LedgerSource>(mv.ledger());
    return std::make_unique<ServerLogSource>(mv.log(), world.clock);
}

// Advances until the inclusion is common_prefix_k deep (chain) or the ack
// delay has elapsed (log). Returns the confirmation time.
uint64_t wait_confirmation(World& world, Metaverse& mv, const InclusionInfo& incl) {
    if (mv.is_dm()) {
        SimLedger& ledger = mv.ledger();
        const uint64_t tip = ledger.chain_length() - 1;
        const uint64_t needed = incl.height_or_index + ledger.common_prefix_k();
        if (needed > tip) {
            advance_blocks(ledger, world.clock, needed - tip);
        }
    } else {
        world.clock.advance(mv.log().ack_delay());
    }
    return world.clock.now;
}

struct Runner {
    World& world;
    const TransferRequest& request;
    const TransferHooks* hooks;
    TransferTrace trace;
    TransferState current = TransferState::Initiated;

    void enter(TransferState state) {
        current = state;
        if (hooks && hooks->on_step) hooks->on_step(state);
    }

    void record(TransferState state, std::string detail = {}) {
        trace.events.push_back(TraceEvent{state, world.clock.now, std::move(detail)});
        world.assert_unique_active();
    }

    // The proof is ready once both the confirmation depth and the
    // committee's generation time have passed; generation starts at
    // inclusion, not at confirmation.
    void wait_proof_ready(uint64_t inclusion_time) {
        const uint64_t ready =
            std::max(world.clock.now, inclusion_time + world.params.proof_time_s);
        world.clock.advance_to(ready);
    }

    CrossProof prove(const std::string& watched_id, const LedgerTx& tx) {
        Metaverse& mv = world.metaverse(watched_id);
        const Committee& committee = world.committee_for(watched_id);
        const auto view = attestation_view(world, mv);
        CrossProof proof =
            generate_proof(committee, *view, tx, world.next_nonce(), world.directory());
        if (!verify_proof(committee, proof)) {
            throw Error("generated proof failed verification for " + watched_id);
        }
        return proof;
    }

    TransferTrace run() {
        trace.request = request;
        try {
            run_steps();
            trace.completed = true;
        } catch (const RefusalError& e) {
            trace.failure = std::string(transfer_state_name(current)) + ": " + e.what();
            trace.completed = false;
        }
        return std::move(trace);
    }

    void run_steps() {
        if (request.source == request.target) {
            throw RefusalError("transfer refused: source and target are the same metaverse");
        }
        Metaverse& source = world.metaverse(request.source);
        Metaverse& relay = world.metaverse(request.relay);
        Metaverse& target = world.metaverse(request.target);
        if (request.relay != world.relay_id) {
            throw RefusalError("transfer refused: " + request.relay + " is not the relay");
        }

        enter(TransferState::Initiated);
        record(TransferState::Initiated);

        enter(TransferState::SourceLocked);
        const SubmitResult lock = world.lock_object(request.source, request.obj_id, request.owner_id);
        wait_confirmation(world, source, lock.incl);
        record(TransferState::SourceLocked, "tx=" + to_hex(lock.tx.tx_id));

        enter(TransferState::SourceProved);
        wait_proof_ready(lock.incl.time_s);
        const CrossProof source_proof = prove(request.source, lock.tx);
        record(TransferState::SourceProved, "proof=" + to_hex(proof_digest(source_proof)));

        enter(TransferState::RelayMinted);
        const MetaObject* outbound = world.find_instance(request.obj_id, request.source);
        if (!outbound) throw RefusalError("mint refused: outbound instance disappeared");
        const Customizer* relay_cust =
            world.needs_customizer(outbound->format, relay)
                ? world.pick_customizer(outbound->format, relay)
                : nullptr;
        const MintOutcome relay_mint = world.mint_counterpart(
            request.relay, source_proof, world.committee_for(request.source), request.owner_id,
            relay_cust);
        // The relay mint must reach full depth before the stake may follow.
        wait_confirmation(world, relay, relay_mint.incl);
        record(TransferState::RelayMinted, "tx=" + to_hex(relay_mint.tx.tx_id));

        enter(TransferState::RelayStaked);
        const SubmitResult stake = world.stake_object(request.relay, request.obj_id, request.owner_id);
        wait_confirmation(world, relay, stake.incl);
        record(TransferState::RelayStaked, "tx=" + to_hex(stake.tx.tx_id));

        enter(TransferState::RelayProved);
        wait_proof_ready(stake.incl.time_s);
        const CrossProof relay_proof = prove(request.relay, stake.tx);
        record(TransferState::RelayProved, "proof=" + to_hex(proof_digest(relay_proof)));

        const MetaObject* staked = world.find_instance(request.obj_id, request.relay);
        if (!staked) throw RefusalError("mint refused: staked instance disappeared");
        const bool needs_cust = world.needs_customizer(staked->format, target);
        const Customizer* target_cust = nullptr;
        if (needs_cust) {
            enter(TransferState::Customized);
            target_cust = world.pick_customizer(staked->format, target);
            if (!target_cust) {
                throw RefusalError("customize refused: no customizer can cast " + staked->format +
                                   " for " + request.target);
            }
            record(TransferState::Customized, "customizer=" + target_cust->cust_id);
        }

        enter(TransferState::TargetMinted);
        const MintOutcome target_mint = world.mint_counterpart(
            request.target, relay_proof, world.committee_for(request.relay), request.owner_id,
            target_cust);
        record(TransferState::TargetMinted, "tx=" + to_hex(target_mint.tx.tx_id));

        wait_confirmation(world, target, target_mint.incl);
        current = TransferState::Completed;
        record(TransferState::Completed);
    }
};

} // namespace

TransferTrace run_transfer(World& world, const TransferRequest& request,
                           const TransferHooks* hooks) {
    Runner runner{world, request, hooks, {}, TransferState::Initiated};
    return runner.run();
}

uint64_t simulated_duration(const TransferTrace& trace) {
    if (!trace.completed || trace.events.empty()) {
        throw Error("simulated_duration requires a completed trace");
    }
    return trace.events.back().time_s - trace.events.front().time_s;
}

std::string export_trace(const TransferTrace& trace) {
    std::ostringstream out;
    out << "trace v1\n";
    out << "request obj=" << trace.request.obj_id << " owner=" << trace.request.owner_id
        << " source=" << trace.request.source << " target=" << trace.request.target
        << " relay=" << trace.request.relay << "\n";
    for (const TraceEvent& ev : trace.events) {
        out << "event state=" << transfer_state_name(ev.state) << " t=" << ev.time_s;
        if (!ev.detail.empty()) out << " " << ev.detail;
        out << "\n";
    }
    if (trace.completed) {
        out << "terminal Completed\n";
        out << "duration_s " << simulated_duration(trace) << "\n";
    } else {
        out << "terminal Failed reason=\"" << trace.failure << "\"\n";
    }
    return out.str();
}

} // namespace metarelay
