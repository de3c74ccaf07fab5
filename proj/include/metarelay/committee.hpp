#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metarelay/ledger.hpp"
#include "metarelay/multisig.hpp"

namespace metarelay {

// Lazily generated key material for simulation nodes. Triples are
// deterministic in (seed, node id), so any two components looking up the
// same node agree on its keys.
class KeyDirectory {
public:
    explicit KeyDirectory(uint64_t seed) : seed_(seed) {}

    const KeyTriple& triple(const std::string& node) const;

private:
    uint64_t seed_;
    mutable std::map<std::string, KeyTriple> cache_;
};

struct CommitteeMember {
    std::string node;
    PublicKey vk;
};

struct SelectionWindow {
    std::string ledger_id;
    uint64_t first_height = 0;
    uint64_t last_height = 0;
};

// A committee is selected by chain quality over a window of the relay
// chain and is bound to the one source (chain or server log) it attests.
struct Committee {
    std::vector<CommitteeMember> members; // selection order; ties by node id
    SelectionWindow window;
    std::string watched_id;

    size_t size() const { return members.size(); }

    // ceil(c / 10): the members whose keys ship inside each proof.
    size_t included_key_count() const {
        return (members.size() * kSignerNumerator + kSignerDenominator - 1) / kSignerDenominator;
    }

    bool has_member_vk(const PublicKey& vk) const;
};

// Ranking rule on its own: the size_c producers with the most blocks in
// the window, ties broken by ascending node id. Throws naming the
// shortfall when fewer distinct producers exist.
std::vector<std::string> rank_window_producers(std::span<const Block> window, size_t size_c);

// Applies the ranking rule to the last window_k blocks and attaches the
// members' keys. Member proofs of possession are verified at formation.
Committee select_committee(const SimLedger& ledger, uint64_t window_k, size_t size_c,
                           const KeyDirectory& directory, const std::string& watched_id);

// Encoded size law: tx + height + randomness + ceil(c/10) keys + aggregate.
uint64_t proof_size_bytes(uint64_t size_c);

// The committee attestation bundle. Wire layout, no framing:
//   tx (250) | height (32, BE) | randomness (32) | vk_1..vk_m (34 each) | agg (66)
struct CrossProof {
    LedgerTx tx;
    uint64_t height = 0;
    std::array<uint8_t, kRandomnessBytes> randomness{};
    std::vector<PublicKey> included_vks;
    Signature agg_sig;
};

Bytes encode_proof(const CrossProof& proof);
CrossProof decode_proof(std::span<const uint8_t> in); // throws EncodingError
Hash256 proof_digest(const CrossProof& proof);

// Domain-separated message the committee signs: binds the attestation to
// one source, one tx, one height and one nonce.
Hash256 attestation_message(const std::string& source_id, const Hash256& tx_id, uint64_t height,
                            const std::array<uint8_t, kRandomnessBytes>& randomness);

// What a committee can attest over: a chain (confirmation = depth) or a
// server log (confirmation = presence after the ack delay).
class AttestationSource {
public:
    virtual ~AttestationSource() = default;
    virtual const std::string& source_id() const = 0;
    // Height (chain) or entry index (log) iff the tx is present and
    // confirmed; nullopt otherwise.
    virtual std::optional<uint64_t> confirmed_height(const Hash256& tx_id) const = 0;
};

class LedgerSource final : public AttestationSource {
public:
    explicit LedgerSource(const SimLedger& ledger) : ledger_(&ledger) {}
    const std::string& source_id() const override { return ledger_->id(); }
    std::optional<uint64_t> confirmed_height(const Hash256& tx_id) const override;

private:
    const SimLedger* ledger_;
};

// The first ceil(c/10) members in committee order sign. Refuses txs the
// source has not confirmed; throws if any member share fails to verify.
CrossProof generate_proof(const Committee& committee, const AttestationSource& source,
                          const LedgerTx& tx, const std::array<uint8_t, kRandomnessBytes>& randomness,
                          const KeyDirectory& directory);

// True iff the included keys all belong to the committee and have the
// required count, the tx id matches its content, and the aggregate
// verifies over the bound message.
bool verify_proof(const Committee& committee, const CrossProof& proof);

} // namespace metarelay
