#include "metarelay/metaverse.hpp"

namespace metarelay {

const char* object_kind_name(ObjectKind kind) {
    switch (kind) {
        case ObjectKind::Asset: return "asset";
        case ObjectKind::Avatar: return "avatar";
        case ObjectKind::Nft: return "nft";
        case ObjectKind::NftDerivative: return "nft-derivative";
    }
    return "unknown";
}

std::optional<ObjectKind> object_kind_from_name(const std::string& name) {
    if (name == "asset") return ObjectKind::Asset;
    if (name == "avatar") return ObjectKind::Avatar;
    if (name == "nft") return ObjectKind::Nft;
    if (name == "nft-derivative") return ObjectKind::NftDerivative;
    return std::nullopt;
}

uint64_t ServerLog::append(const LedgerTx& tx, const SimClock& clock) {
    if (!entries_.empty() && clock.now < entries_.back().time_s) {
        throw Error("server log " + id_ + ": entries must be time-ordered");
    }
    if (index_of(tx.tx_id)) {
        throw Error("server log " + id_ + ": duplicate tx_id rejected");
    }
    entries_.push_back(ServerLogEntry{tx, clock.now});
    return entries_.size() - 1;
}

std::optional<uint64_t> ServerLog::index_of(const Hash256& tx_id) const {
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].tx.tx_id == tx_id) return i;
    }
    return std::nullopt;
}

bool cm_confirm(const ServerLog& log, const LedgerTx& tx, const SimClock& clock) {
    const auto index = log.index_of(tx.tx_id);
    if (!index) return false;
    return clock.now >= log.entries()[*index].time_s + log.ack_delay();
}

std::optional<uint64_t> ServerLogSource::confirmed_height(const Hash256& tx_id) const {
    const auto index = log_->index_of(tx_id);
    if (!index) return std::nullopt;
    if (clock_->now < log_->entries()[*index].time_s + log_->ack_delay()) return std::nullopt;
    return index;
}

Metaverse::Metaverse(std::string mv_id, SimLedger ledger, std::set<FormatTag> formats)
    : id_(std::move(mv_id)),
      kind_(MvKind::Decentralized),
      supports_nft_(true), // chain-backed metaverses always carry NFTs
      formats_(std::move(formats)),
      backend_(std::move(ledger)) {}

Metaverse::Metaverse(std::string mv_id, ServerLog log, std::set<FormatTag> formats, bool supports_nft)
    : id_(std::move(mv_id)),
      kind_(MvKind::Centralized),
      supports_nft_(supports_nft),
      formats_(std::move(formats)),
      backend_(std::move(log)) {}

SimLedger& Metaverse::ledger() {
    if (!is_dm()) throw Error("metaverse " + id_ + " is not chain-backed");
    return std::get<SimLedger>(backend_);
}

const SimLedger& Metaverse::ledger() const {
    if (!is_dm()) throw Error("metaverse " + id_ + " is not chain-backed");
    return std::get<SimLedger>(backend_);
}

ServerLog& Metaverse::log() {
    if (is_dm()) throw Error("metaverse " + id_ + " is not server-backed");
    return std::get<ServerLog>(backend_);
}

const ServerLog& Metaverse::log() const {
    if (is_dm()) throw Error("metaverse " + id_ + " is not server-backed");
    return std::get<ServerLog>(backend_);
}

} // namespace metarelay
