#pragma once

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "metarelay/bytes.hpp"
#include "metarelay/errors.hpp"
#include "metarelay/params.hpp"
#include "metarelay/rng.hpp"

namespace metarelay {

// Simulated time in whole seconds. Only protocol steps move it forward.
struct SimClock {
    uint64_t now = 0;

    void advance(uint64_t dt) { now += dt; }

    void advance_to(uint64_t t) {
        if (t < now) throw Error("clock cannot move backwards");
        now = t;
    }
};

enum class TxKind : uint8_t {
    Plain = 0,
    Lock = 1,
    Mint = 2,
    Stake = 3,
    CustomMint = 4,
};

const char* tx_kind_name(TxKind kind);

// Every transaction encodes to exactly kTxBytes on the wire:
//   kind (1) | tx_id (32) | payload length (2, BE) | payload | zero padding
// Payloads longer than the capacity are truncated before the id is taken.
struct LedgerTx {
    Hash256 tx_id{};
    TxKind kind = TxKind::Plain;
    Bytes payload;

    static constexpr size_t kPayloadCapacity = kTxBytes - 1 - 32 - 2;
};

LedgerTx make_tx(TxKind kind, Bytes payload);
Bytes encode_tx(const LedgerTx& tx);
// Throws EncodingError on anything non-canonical (bad kind, bad length,
// nonzero padding). Does not recheck tx_id; that is the verifier's job.
LedgerTx decode_tx(std::span<const uint8_t> in);
Hash256 tx_content_digest(TxKind kind, std::span<const uint8_t> payload);

struct Block {
    uint64_t height = 0;
    std::string producer;
    uint64_t timestamp = 0; // always height * block_interval
    std::vector<LedgerTx> tx_list;
    Hash256 header_digest{};
};

struct ProducerSlot {
    std::string node;
    uint64_t weight = 1;
};

// Append-only simulated chain. No forks, no reorgs: a transaction is
// final once the tip is common_prefix_k blocks past its inclusion height.
// Producers are drawn weight-proportionally from a seeded stream, so two
// ledgers with the same config and seed build byte-identical chains.
class SimLedger {
public:
    SimLedger(std::string ledger_id, uint64_t block_interval_s, uint64_t common_prefix_k,
              std::vector<ProducerSlot> producers, uint64_t seed);

    const std::string& id() const { return id_; }
    uint64_t block_interval() const { return block_interval_s_; }
    uint64_t common_prefix_k() const { return common_prefix_k_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    uint64_t chain_length() const { return blocks_.size(); }

    // Queues the tx for the next produced block and returns that block's
    // height. Duplicate tx_id (queued or included) is rejected.
    uint64_t submit_tx(const LedgerTx& tx);

    // Produces the next block immediately, draining the pending queue.
    const Block& produce_block();

    // Depth rule: confirmed iff tip height >= inclusion_height + k.
    // Throws on heights the chain has never produced.
    bool is_confirmed(uint64_t inclusion_height) const;

    std::optional<uint64_t> inclusion_height(const Hash256& tx_id) const;

    // Recomputes every header digest from scratch.
    bool verify_chain() const;

private:
    std::string id_;
    uint64_t block_interval_s_;
    uint64_t common_prefix_k_;
    std::vector<ProducerSlot> producers_;
    uint64_t total_weight_ = 0;
    Rng producer_rng_;
    std::vector<Block> blocks_;
    std::deque<LedgerTx> pending_;
    std::set<Hash256> seen_tx_ids_;
    std::unordered_map<std::string, uint64_t> inclusion_; // tx_id hex -> height
};

Hash256 block_header_digest(const Block& block, const Hash256& prev_digest);

// Produces n blocks and charges the clock n * block_interval seconds.
// Returns the appended blocks.
std::vector<Block> advance_blocks(SimLedger& ledger, SimClock& clock, uint64_t n);

} // namespace metarelay
