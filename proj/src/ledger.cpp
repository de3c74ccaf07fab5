#include "metarelay/ledger.hpp"

#include <algorithm>

#include "metarelay/sha256.hpp"

namespace metarelay {

const char* tx_kind_name(TxKind kind) {
    switch (kind) {
        case TxKind::Plain: return "plain";
        case TxKind::Lock: return "lock";
        case TxKind::Mint: return "mint";
        case TxKind::Stake: return "stake";
        case TxKind::CustomMint: return "custom-mint";
    }
    return "unknown";
}

Hash256 tx_content_digest(TxKind kind, std::span<const uint8_t> payload) {
    Sha256 h;
    h.update(std::string("metarelay.tx"));
    h.update_byte(static_cast<uint8_t>(kind));
    h.update(payload);
    return h.finish();
}

LedgerTx make_tx(TxKind kind, Bytes payload) {
    if (payload.size() > LedgerTx::kPayloadCapacity) {
        payload.resize(LedgerTx::kPayloadCapacity);
    }
    LedgerTx tx;
    tx.kind = kind;
    tx.payload = std::move(payload);
    tx.tx_id = tx_content_digest(kind, tx.payload);
    return tx;
}

Bytes encode_tx(const LedgerTx& tx) {
    if (tx.payload.size() > LedgerTx::kPayloadCapacity) {
        throw Error("tx payload exceeds fixed encoding capacity");
    }
    Bytes out;
    out.reserve(kTxBytes);
    out.push_back(static_cast<uint8_t>(tx.kind));
    append(out, std::span<const uint8_t>(tx.tx_id.data(), tx.tx_id.size()));
    out.push_back(static_cast<uint8_t>(tx.payload.size() >> 8));
    out.push_back(static_cast<uint8_t>(tx.payload.size() & 0xff));
    append(out, std::span<const uint8_t>(tx.payload.data(), tx.payload.size()));
    out.resize(kTxBytes, 0x00);
    return out;
}

LedgerTx decode_tx(std::span<const uint8_t> in) {
    if (in.size() != kTxBytes) {
        throw EncodingError("tx encoding must be exactly 250 bytes");
    }
    if (in[0] > static_cast<uint8_t>(TxKind::CustomMint)) {
        throw EncodingError("unknown tx kind byte");
    }
    LedgerTx tx;
    tx.kind = static_cast<TxKind>(in[0]);
    std::copy(in.begin() + 1, in.begin() + 33, tx.tx_id.begin());
    const size_t len = (size_t(in[33]) << 8) | in[34];
    if (len > LedgerTx::kPayloadCapacity) {
        throw EncodingError("tx payload length out of range");
    }
    tx.payload.assign(in.begin() + 35, in.begin() + 35 + len);
    for (size_t i = 35 + len; i < kTxBytes; ++i) {
        if (in[i] != 0x00) {
            throw EncodingError("tx padding must be zero");
        }
    }
    return tx;
}

Hash256 block_header_digest(const Block& block, const Hash256& prev_digest) {
    Sha256 tx_root;
    for (const LedgerTx& tx : block.tx_list) {
        tx_root.update(std::span<const uint8_t>(tx.tx_id.data(), tx.tx_id.size()));
    }
    const Hash256 root = tx_root.finish();

    Sha256 h;
    h.update(std::string("metarelay.block"));
    Bytes height_be;
    append_u64_be(height_be, block.height);
    h.update(std::span<const uint8_t>(height_be.data(), height_be.size()));
    h.update(block.producer);
    h.update(std::span<const uint8_t>(root.data(), root.size()));
    h.update(std::span<const uint8_t>(prev_digest.data(), prev_digest.size()));
    return h.finish();
}

SimLedger::SimLedger(std::string ledger_id, uint64_t block_interval_s, uint64_t common_prefix_k,
                     std::vector<ProducerSlot> producers, uint64_t seed)
    : id_(std::move(ledger_id)),
      block_interval_s_(block_interval_s),
      common_prefix_k_(common_prefix_k),
      producers_(std::move(producers)),
      producer_rng_(derive_seed(seed, "producers." + id_)) {
    if (block_interval_s_ == 0) throw Error("ledger " + id_ + ": block interval must be positive");
    if (producers_.empty()) throw Error("ledger " + id_ + ": producer set must not be empty");
    for (const ProducerSlot& slot : producers_) {
        if (slot.weight == 0) throw Error("ledger " + id_ + ": producer weight must be positive");
        total_weight_ += slot.weight;
    }
}

uint64_t SimLedger::submit_tx(const LedgerTx& tx) {
    if (seen_tx_ids_.count(tx.tx_id)) {
        throw Error("ledger " + id_ + ": duplicate tx_id rejected");
    }
    seen_tx_ids_.insert(tx.tx_id);
    pending_.push_back(tx);
    return blocks_.size();
}

const Block& SimLedger::produce_block() {
    Block block;
    block.height = blocks_.size();
    block.timestamp = block.height * block_interval_s_;

    const uint64_t draw = producer_rng_.bounded(total_weight_);
    uint64_t acc = 0;
    for (const ProducerSlot& slot : producers_) {
        acc += slot.weight;
        if (draw < acc) {
            block.producer = slot.node;
            break;
        }
    }

    while (!pending_.empty()) {
        block.tx_list.push_back(std::move(pending_.front()));
        pending_.pop_front();
    }

    const Hash256 prev = blocks_.empty() ? Hash256{} : blocks_.back().header_digest;
    block.header_digest = block_header_digest(block, prev);

    for (const LedgerTx& tx : block.tx_list) {
        inclusion_[to_hex(tx.tx_id)] = block.height;
    }
    blocks_.push_back(std::move(block));
    return blocks_.back();
}

bool SimLedger::is_confirmed(uint64_t inclusion_height) const {
    if (inclusion_height >= blocks_.size()) {
        throw Error("ledger " + id_ + ": unknown inclusion height");
    }
    const uint64_t tip = blocks_.size() - 1;
    return tip >= inclusion_height + common_prefix_k_;
}

std::optional<uint64_t> SimLedger::inclusion_height(const Hash256& tx_id) const {
    const auto it = inclusion_.find(to_hex(tx_id));
    if (it == inclusion_.end()) return std::nullopt;
    return it->second;
}

bool SimLedger::verify_chain() const {
    Hash256 prev{};
    for (const Block& block : blocks_) {
        if (block.timestamp != block.height * block_interval_s_) return false;
        if (block_header_digest(block, prev) != block.header_digest) return false;
        prev = block.header_digest;
    }
    return true;
}

std::vector<Block> advance_blocks(SimLedger& ledger, SimClock& clock, uint64_t n) {
    std::vector<Block> produced;
    produced.reserve(n);
    for (uint64_t i = 0; i < n; ++i) {
        produced.push_back(ledger.produce_block());
    }
    clock.advance(n * ledger.block_interval());
    return produced;
}

} // namespace metarelay
