#pragma once

#include <map>
#include <memory>
#include <string>

#include "metarelay/metaverse.hpp"

namespace metarelay {

// Where and when a protocol tx landed in its backend: block height for
// chains, entry index for server logs. Inclusion itself is free; only
// confirmation depth and ack delays cost simulated time.
struct InclusionInfo {
    uint64_t height_or_index = 0;
    uint64_t time_s = 0;
};

struct SubmitResult {
    LedgerTx tx;
    InclusionInfo incl;
};

struct MintOutcome {
    LedgerTx tx;
    InclusionInfo incl;
    std::string minted_mv;
    bool customized = false;
    std::string customizer_id;
};

// One simulated universe: every metaverse, owner, customizer, committee
// and object instance, plus the single clock. Single-writer; a run owns
// its world outright.
class World {
public:
    ProtocolParams params;
    uint64_t seed = 0;
    SimClock clock;
    std::string relay_id;

    World() : directory_(0), nonce_rng_(0) {}
    explicit World(uint64_t world_seed)
        : seed(world_seed), directory_(world_seed), nonce_rng_(derive_seed(world_seed, "nonce")) {}

    KeyDirectory& directory() { return directory_; }
    const KeyDirectory& directory() const { return directory_; }

    Metaverse& add_metaverse(Metaverse mv);
    Metaverse& metaverse(const std::string& id);
    const Metaverse& metaverse(const std::string& id) const;
    bool has_metaverse(const std::string& id) const { return metaverses_.count(id) > 0; }

    Owner& add_owner(Owner owner);
    Owner& owner(const std::string& id);
    bool has_owner(const std::string& id) const { return owners_.count(id) > 0; }

    Customizer& add_customizer(Customizer c);
    const std::map<std::string, Customizer>& customizers() const { return customizers_; }

    void set_committee(const std::string& watched_id, Committee committee);
    const Committee& committee_for(const std::string& watched_id) const;

    MetaObject& add_instance(MetaObject obj);
    MetaObject* find_instance(const std::string& obj_id, const std::string& mv_id);
    const MetaObject* find_instance(const std::string& obj_id, const std::string& mv_id) const;
    bool knows_object(const std::string& obj_id) const;
    size_t active_count(const std::string& obj_id) const;
    MetaObject* active_instance(const std::string& obj_id);

    // The cross-metaverse double-spend property: at most one Active
    // instance of each obj_id exists anywhere.
    bool sweep_unique_active() const;
    void assert_unique_active() const;

    // Deterministic textual snapshot of instances and balances, for
    // state-restoration checks.
    std::string registry_snapshot() const;

    // Locks an Active object in place and records a Lock tx on the
    // metaverse's backend. The object becomes outbound.
    SubmitResult lock_object(const std::string& mv_id, const std::string& obj_id,
                             const std::string& owner_id);

    // Same state change with a Stake tx; used on the relay.
    SubmitResult stake_object(const std::string& mv_id, const std::string& obj_id,
                              const std::string& owner_id);

    // Mints the counterpart of a locked/staked object into `target_id`,
    // gated on the committee proof. NFT if the target supports NFTs,
    // NFT-derivative otherwise; a customizer adapts the format when the
    // target cannot take it as-is, and its fee is debited from the owner.
    MintOutcome mint_counterpart(const std::string& target_id, const CrossProof& proof,
                                 const Committee& committee, const std::string& owner_id,
                                 const Customizer* customizer);

    // Reverts a Locked escrow to Active. Refused while an Active instance
    // exists elsewhere.
    void release(const std::string& mv_id, const std::string& obj_id);

    // True when minting `format` into `target` needs a customizer.
    bool needs_customizer(const FormatTag& format, const Metaverse& target) const;

    // First configured customizer (by id) able to cast `format` into a
    // format the target supports; nullptr if none.
    const Customizer* pick_customizer(const FormatTag& format, const Metaverse& target) const;

    std::array<uint8_t, kRandomnessBytes> next_nonce();

    // Submit + immediate inclusion on either backend kind.
    SubmitResult submit_protocol_tx(Metaverse& mv, const LedgerTx& tx);

private:
    FormatTag choose_target_format(const FormatTag& from, const Metaverse& target,
                                   const Customizer* customizer) const;

    KeyDirectory directory_;
    Rng nonce_rng_;
    uint64_t tx_counter_ = 0;
    std::map<std::string, Metaverse> metaverses_;
    std::map<std::string, Owner> owners_;
    std::map<std::string, Customizer> customizers_;
    std::map<std::string, Committee> committees_;
    std::map<std::pair<std::string, std::string>, MetaObject> instances_; // (obj, mv) -> instance
    std::set<Hash256> used_proofs_;
};

// Protocol tx payloads are key=value text; these build and parse them.
Bytes lock_payload(const std::string& op, const std::string& obj_id, const std::string& owner_id,
                   const std::string& mv_id, ObjectKind kind, const FormatTag& format,
                   uint64_t nonce);
std::map<std::string, std::string> parse_payload(const Bytes& payload);

} // namespace metarelay
