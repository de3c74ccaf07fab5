#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "metarelay/committee.hpp"
#include "metarelay/ledger.hpp"

namespace metarelay {

using FormatTag = std::string;

enum class MvKind { Decentralized, Centralized };

enum class ObjectKind { Asset, Avatar, Nft, NftDerivative };

const char* object_kind_name(ObjectKind kind);
std::optional<ObjectKind> object_kind_from_name(const std::string& name);

struct LockState {
    enum class Kind { Active, Locked, Burned };
    Kind kind = Kind::Active;
    std::string escrow; // metaverse holding the lock, when Locked

    static LockState active() { return {Kind::Active, {}}; }
    static LockState locked(std::string mv) { return {Kind::Locked, std::move(mv)}; }
    bool is_active() const { return kind == Kind::Active; }
    bool is_locked() const { return kind == Kind::Locked; }
};

// One instance of a transferable object inside one metaverse. The same
// obj_id may have instances in several metaverses, but at most one of
// them is Active at any simulated time.
struct MetaObject {
    std::string obj_id;
    std::string owner_id;
    ObjectKind kind = ObjectKind::Asset;
    FormatTag format;
    std::string location;
    LockState lock = LockState::active();
    std::map<std::string, std::string> properties;
};

struct Owner {
    std::string owner_id;
    std::map<std::string, std::string> addresses; // one per metaverse
    std::map<std::string, int64_t> balances;      // fee accounting only
};

// Adapts an object's format on the way out of the relay, for a fee.
struct Customizer {
    std::string cust_id;
    int64_t fee = 1;
    std::set<std::pair<FormatTag, FormatTag>> capabilities;

    bool can_transform(const FormatTag& from, const FormatTag& to) const {
        return capabilities.count({from, to}) > 0;
    }
};

struct ServerLogEntry {
    LedgerTx tx;
    uint64_t time_s = 0;
};

// Append-only centralized backend. A tx counts as confirmed once it has
// sat in the log for ack_delay seconds.
class ServerLog {
public:
    ServerLog() = default;
    ServerLog(std::string log_id, uint64_t ack_delay_s)
        : id_(std::move(log_id)), ack_delay_s_(ack_delay_s) {}

    const std::string& id() const { return id_; }
    uint64_t ack_delay() const { return ack_delay_s_; }
    const std::vector<ServerLogEntry>& entries() const { return entries_; }

    // Entries are strictly ordered by append time.
    uint64_t append(const LedgerTx& tx, const SimClock& clock);
    std::optional<uint64_t> index_of(const Hash256& tx_id) const;

private:
    std::string id_;
    uint64_t ack_delay_s_ = 0;
    std::vector<ServerLogEntry> entries_;
};

bool cm_confirm(const ServerLog& log, const LedgerTx& tx, const SimClock& clock);

class ServerLogSource final : public AttestationSource {
public:
    ServerLogSource(const ServerLog& log, const SimClock& clock) : log_(&log), clock_(&clock) {}
    const std::string& source_id() const override { return log_->id(); }
    std::optional<uint64_t> confirmed_height(const Hash256& tx_id) const override;

private:
    const ServerLog* log_;
    const SimClock* clock_;
};

class Metaverse {
public:
    Metaverse(std::string mv_id, SimLedger ledger, std::set<FormatTag> formats);
    Metaverse(std::string mv_id, ServerLog log, std::set<FormatTag> formats, bool supports_nft);

    const std::string& id() const { return id_; }
    MvKind kind() const { return kind_; }
    bool supports_nft() const { return supports_nft_; }
    const std::set<FormatTag>& formats() const { return formats_; }
    bool supports_format(const FormatTag& f) const { return formats_.count(f) > 0; }

    bool is_dm() const { return kind_ == MvKind::Decentralized; }
    SimLedger& ledger();
    const SimLedger& ledger() const;
    ServerLog& log();
    const ServerLog& log() const;

private:
    std::string id_;
    MvKind kind_;
    bool supports_nft_;
    std::set<FormatTag> formats_;
    std::variant<SimLedger, ServerLog> backend_;
};

} // namespace metarelay
