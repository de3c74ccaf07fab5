#include "metarelay/world.hpp"

#include <algorithm>
#include <sstream>

namespace metarelay {

Bytes lock_payload(const std::string& op, const std::string& obj_id, const std::string& owner_id,
                   const std::string& mv_id, ObjectKind kind, const FormatTag& format,
                   uint64_t nonce) {
    std::ostringstream out;
    out << "op=" << op << " obj=" << obj_id << " owner=" << owner_id << " mv=" << mv_id
        << " kind=" << object_kind_name(kind) << " format=" << format << " n=" << nonce;
    const std::string s = out.str();
    if (s.size() > LedgerTx::kPayloadCapacity) {
        throw Error("protocol payload exceeds tx capacity; shorten the ids");
    }
    return Bytes(s.begin(), s.end());
}

std::map<std::string, std::string> parse_payload(const Bytes& payload) {
    std::map<std::string, std::string> fields;
    std::istringstream in(std::string(payload.begin(), payload.end()));
    std::string token;
    while (in >> token) {
        const size_t eq = token.find('=');
        if (eq == std::string::npos) continue;
        fields[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return fields;
}

Metaverse& World::add_metaverse(Metaverse mv) {
    const std::string id = mv.id();
    auto [it, inserted] = metaverses_.emplace(id, std::move(mv));
    if (!inserted) throw Error("metaverse " + id + " already exists");
    return it->second;
}

Metaverse& World::metaverse(const std::string& id) {
    const auto it = metaverses_.find(id);
    if (it == metaverses_.end()) throw Error("unknown metaverse: " + id);
    return it->second;
}

const Metaverse& World::metaverse(const std::string& id) const {
    const auto it = metaverses_.find(id);
    if (it == metaverses_.end()) throw Error("unknown metaverse: " + id);
    return it->second;
}

Owner& World::add_owner(Owner owner) {
    const std::string id = owner.owner_id;
    auto [it, inserted] = owners_.emplace(id, std::move(owner));
    if (!inserted) throw Error("owner " + id + " already exists");
    return it->second;
}

Owner& World::owner(const std::string& id) {
    const auto it = owners_.find(id);
    if (it == owners_.end()) throw Error("unknown owner: " + id);
    return it->second;
}

Customizer& World::add_customizer(Customizer c) {
    const std::string id = c.cust_id;
    auto [it, inserted] = customizers_.emplace(id, std::move(c));
    if (!inserted) throw Error("customizer " + id + " already exists");
    return it->second;
}

void World::set_committee(const std::string& watched_id, Committee committee) {
    committees_[watched_id] = std::move(committee);
}

const Committee& World::committee_for(const std::string& watched_id) const {
    const auto it = committees_.find(watched_id);
    if (it == committees_.end()) throw Error("no committee watches " + watched_id);
    return it->second;
}

MetaObject& World::add_instance(MetaObject obj) {
    const auto key = std::make_pair(obj.obj_id, obj.location);
    auto [it, inserted] = instances_.emplace(key, std::move(obj));
    if (!inserted) {
        throw Error("object " + key.first + " already has an instance in " + key.second);
    }
    if (it->second.lock.is_active() && active_count(it->second.obj_id) > 1) {
        instances_.erase(it);
        throw Error("object " + key.first + " would be Active in two places");
    }
    return it->second;
}

MetaObject* World::find_instance(const std::string& obj_id, const std::string& mv_id) {
    const auto it = instances_.find({obj_id, mv_id});
    return it == instances_.end() ? nullptr : &it->second;
}

const MetaObject* World::find_instance(const std::string& obj_id, const std::string& mv_id) const {
    const auto it = instances_.find({obj_id, mv_id});
    return it == instances_.end() ? nullptr : &it->second;
}

bool World::knows_object(const std::string& obj_id) const {
    const auto it = instances_.lower_bound({obj_id, ""});
    return it != instances_.end() && it->first.first == obj_id;
}

size_t World::active_count(const std::string& obj_id) const {
    size_t n = 0;
    for (auto it = instances_.lower_bound({obj_id, ""});
         it != instances_.end() && it->first.first == obj_id; ++it) {
        if (it->second.lock.is_active()) ++n;
    }
    return n;
}

MetaObject* World::active_instance(const std::string& obj_id) {
    for (auto it = instances_.lower_bound({obj_id, ""});
         it != instances_.end() && it->first.first == obj_id; ++it) {
        if (it->second.lock.is_active()) return &it->second;
    }
    return nullptr;
}

bool World::sweep_unique_active() const {
    std::map<std::string, size_t> active;
    for (const auto& [key, obj] : instances_) {
        if (obj.lock.is_active() && ++active[obj.obj_id] > 1) return false;
    }
    return true;
}

void World::assert_unique_active() const {
    if (!sweep_unique_active()) {
        throw Error("registry sweep found an obj_id Active in two metaverses");
    }
}

std::string World::registry_snapshot() const {
    std::ostringstream out;
    for (const auto& [key, obj] : instances_) {
        out << key.first << "@" << key.second << " owner=" << obj.owner_id
            << " kind=" << object_kind_name(obj.kind) << " format=" << obj.format << " lock=";
        switch (obj.lock.kind) {
            case LockState::Kind::Active: out << "active"; break;
            case LockState::Kind::Locked: out << "locked:" << obj.lock.escrow; break;
            case LockState::Kind::Burned: out << "burned"; break;
        }
        for (const auto& [k, v] : obj.properties) out << " p." << k << "=" << v;
        out << "\n";
    }
    for (const auto& [id, ow] : owners_) {
        out << "owner " << id;
        for (const auto& [mv, bal] : ow.balances) out << " " << mv << "=" << bal;
        out << "\n";
    }
    return out.str();
}

SubmitResult World::submit_protocol_tx(Metaverse& mv, const LedgerTx& tx) {
    SubmitResult result;
    result.tx = tx;
    if (mv.is_dm()) {
        const uint64_t height = mv.ledger().submit_tx(tx);
        mv.ledger().produce_block();
        result.incl = InclusionInfo{height, clock.now};
    } else {
        const uint64_t index = mv.log().append(tx, clock);
        result.incl = InclusionInfo{index, clock.now};
    }
    return result;
}

namespace {

void require_transferable(const MetaObject* obj, const std::string& obj_id,
                          const std::string& mv_id, const std::string& owner_id,
                          const std::string& verb) {
    if (!obj) {
        throw RefusalError(verb + " refused: no instance of " + obj_id + " in " + mv_id);
    }
    if (obj->owner_id != owner_id) {
        throw RefusalError(verb + " refused: " + owner_id + " does not own " + obj_id);
    }
    if (!obj->lock.is_active()) {
        throw RefusalError(verb + " refused: " + obj_id + " is not Active in " + mv_id);
    }
}

} // namespace

SubmitResult World::lock_object(const std::string& mv_id, const std::string& obj_id,
                                const std::string& owner_id) {
    Metaverse& mv = metaverse(mv_id);
    MetaObject* obj = find_instance(obj_id, mv_id);
    require_transferable(obj, obj_id, mv_id, owner_id, "lock");

    const LedgerTx tx = make_tx(
        TxKind::Lock, lock_payload("lock", obj_id, owner_id, mv_id, obj->kind, obj->format,
                                   tx_counter_++));
    SubmitResult result = submit_protocol_tx(mv, tx);
    obj->lock = LockState::locked(mv_id);
    assert_unique_active();
    return result;
}

SubmitResult World::stake_object(const std::string& mv_id, const std::string& obj_id,
                                 const std::string& owner_id) {
    Metaverse& mv = metaverse(mv_id);
    MetaObject* obj = find_instance(obj_id, mv_id);
    require_transferable(obj, obj_id, mv_id, owner_id, "stake");

    const LedgerTx tx = make_tx(
        TxKind::Stake, lock_payload("stake", obj_id, owner_id, mv_id, obj->kind, obj->format,
                                    tx_counter_++));
    SubmitResult result = submit_protocol_tx(mv, tx);
    obj->lock = LockState::locked(mv_id);
    assert_unique_active();
    return result;
}

bool World::needs_customizer(const FormatTag& format, const Metaverse& target) const {
    return !target.supports_format(format) || !target.supports_nft();
}

FormatTag World::choose_target_format(const FormatTag& from, const Metaverse& target,
                                      const Customizer* customizer) const {
    // A fitting format is kept as-is, even when the customizer only casts
    // the NFT-derivative; capabilities only matter for real format changes.
    if (target.supports_format(from)) return from;
    if (customizer) {
        for (const FormatTag& to : target.formats()) {
            if (customizer->can_transform(from, to)) return to;
        }
    }
    throw RefusalError("mint refused: no customizer capability casts " + from +
                       " into a format " + target.id() + " supports");
}

const Customizer* World::pick_customizer(const FormatTag& format, const Metaverse& target) const {
    for (const auto& [id, cust] : customizers_) {
        if (target.supports_format(format)) return &cust;
        for (const FormatTag& to : target.formats()) {
            if (cust.can_transform(format, to)) return &cust;
        }
    }
    return nullptr;
}

MintOutcome World::mint_counterpart(const std::string& target_id, const CrossProof& proof,
                                    const Committee& committee, const std::string& owner_id,
                                    const Customizer* customizer) {
    Metaverse& target = metaverse(target_id);
    Owner& ow = owner(owner_id);

    if (!verify_proof(committee, proof)) {
        throw RefusalError("mint refused: proof does not verify");
    }
    const Hash256 digest = proof_digest(proof);
    if (used_proofs_.count(digest)) {
        throw RefusalError("mint refused: proof already consumed");
    }
    if (proof.tx.kind != TxKind::Lock && proof.tx.kind != TxKind::Stake) {
        throw RefusalError("mint refused: proof's tx is not a lock or stake");
    }

    const auto fields = parse_payload(proof.tx.payload);
    const auto get = [&](const char* key) -> const std::string& {
        const auto it = fields.find(key);
        if (it == fields.end()) {
            throw RefusalError(std::string("mint refused: proof tx payload lacks '") + key + "'");
        }
        return it->second;
    };
    const std::string& obj_id = get("obj");
    const std::string& source_mv = get("mv");
    if (get("owner") != owner_id) {
        throw RefusalError("mint refused: proof's lock names a different owner");
    }

    const MetaObject* source_obj = find_instance(obj_id, source_mv);
    if (!source_obj) {
        throw RefusalError("mint refused: unknown object " + obj_id + " at " + source_mv);
    }
    if (active_count(obj_id) > 0) {
        throw RefusalError("mint refused: " + obj_id + " is still Active somewhere");
    }
    // An old Locked escrow at the target (the object passed through here
    // before) is reactivated in place; anything else occupying the slot
    // blocks the mint.
    MetaObject* resident = find_instance(obj_id, target_id);
    if (resident && !resident->lock.is_locked()) {
        throw RefusalError("mint refused: " + obj_id + " already has an instance in " + target_id);
    }

    const FormatTag& from_format = source_obj->format;
    const bool needs_cust = needs_customizer(from_format, target);
    if (needs_cust && !customizer) {
        throw RefusalError("mint refused: target " + target_id + " needs a customizer for " +
                           from_format);
    }
    const FormatTag to_format =
        choose_target_format(from_format, target, needs_cust ? customizer : nullptr);

    if (needs_cust) {
        int64_t& balance = ow.balances[target_id];
        if (balance < customizer->fee) {
            throw RefusalError("mint refused: owner cannot pay the customizer fee");
        }
        balance -= customizer->fee;
    }

    MetaObject minted;
    minted.obj_id = obj_id;
    minted.owner_id = owner_id;
    minted.kind = target.supports_nft() ? ObjectKind::Nft : ObjectKind::NftDerivative;
    minted.format = to_format;
    minted.location = target_id;
    minted.lock = LockState::active();
    minted.properties = source_obj->properties; // carried verbatim

    const TxKind mint_kind = needs_cust ? TxKind::CustomMint : TxKind::Mint;
    const LedgerTx tx = make_tx(
        mint_kind, lock_payload(needs_cust ? "custom-mint" : "mint", obj_id, owner_id, target_id,
                                minted.kind, minted.format, tx_counter_++));
    SubmitResult submitted = submit_protocol_tx(target, tx);

    if (resident) {
        *resident = std::move(minted);
    } else {
        add_instance(std::move(minted));
    }
    used_proofs_.insert(digest);
    assert_unique_active();

    MintOutcome outcome;
    outcome.tx = submitted.tx;
    outcome.incl = submitted.incl;
    outcome.minted_mv = target_id;
    outcome.customized = needs_cust;
    if (needs_cust) outcome.customizer_id = customizer->cust_id;
    return outcome;
}

void World::release(const std::string& mv_id, const std::string& obj_id) {
    MetaObject* obj = find_instance(obj_id, mv_id);
    if (!obj) throw Error("release: no instance of " + obj_id + " in " + mv_id);
    if (!obj->lock.is_locked() || obj->lock.escrow != mv_id) {
        throw Error("release: " + obj_id + " is not escrowed in " + mv_id);
    }
    if (active_count(obj_id) > 0) {
        throw Error("release: " + obj_id + " is Active elsewhere; releasing would duplicate it");
    }
    obj->lock = LockState::active();
    assert_unique_active();
}

std::array<uint8_t, kRandomnessBytes> World::next_nonce() {
    std::array<uint8_t, kRandomnessBytes> nonce{};
    nonce_rng_.fill(nonce);
    return nonce;
}

} // namespace metarelay
