#include "metarelay/committee.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "metarelay/sha256.hpp"

namespace metarelay {

const KeyTriple& KeyDirectory::triple(const std::string& node) const {
    auto it = cache_.find(node);
    if (it == cache_.end()) {
        Bytes seed_bytes;
        append_u64_be(seed_bytes, seed_);
        append(seed_bytes, "node." + node);
        it = cache_.emplace(node, keygen(seed_bytes)).first;
    }
    return it->second;
}

bool Committee::has_member_vk(const PublicKey& vk) const {
    return std::any_of(members.begin(), members.end(),
                       [&](const CommitteeMember& m) { return m.vk == vk; });
}

std::vector<std::string> rank_window_producers(std::span<const Block> window, size_t size_c) {
    if (size_c == 0) throw Error("committee size must be positive");
    std::map<std::string, uint64_t> counts;
    for (const Block& block : window) {
        counts[block.producer]++;
    }
    if (counts.size() < size_c) {
        throw Error("committee selection needs " + std::to_string(size_c) +
                    " distinct producers in window, found " + std::to_string(counts.size()));
    }
    std::vector<std::pair<std::string, uint64_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> nodes;
    nodes.reserve(size_c);
    for (size_t i = 0; i < size_c; ++i) nodes.push_back(ranked[i].first);
    return nodes;
}

Committee select_committee(const SimLedger& ledger, uint64_t window_k, size_t size_c,
                           const KeyDirectory& directory, const std::string& watched_id) {
    if (ledger.chain_length() < window_k || window_k == 0) {
        throw Error("ledger " + ledger.id() + ": chain shorter than selection window");
    }

    const uint64_t last = ledger.chain_length() - 1;
    const uint64_t first = last + 1 - window_k;
    const std::vector<std::string> nodes = rank_window_producers(
        std::span<const Block>(ledger.blocks().data() + first, window_k), size_c);

    Committee committee;
    committee.window = SelectionWindow{ledger.id(), first, last};
    committee.watched_id = watched_id;
    committee.members.reserve(size_c);
    std::set<PublicKey> seen_vks;
    for (const std::string& node : nodes) {
        const KeyTriple& triple = directory.triple(node);
        if (!verify_pop(triple.vk, triple.pop)) {
            throw Error("committee formation: proof of possession failed for node " + node);
        }
        if (!seen_vks.insert(triple.vk).second) {
            throw Error("committee formation: duplicate member key for node " + node);
        }
        committee.members.push_back(CommitteeMember{node, triple.vk});
    }
    return committee;
}

uint64_t proof_size_bytes(uint64_t size_c) {
    if (size_c == 0) throw Error("proof size undefined for an empty committee");
    const uint64_t included = (size_c * kSignerNumerator + kSignerDenominator - 1) / kSignerDenominator;
    return kTxBytes + kHeightBytes + kRandomnessBytes + kVkBytes * included + kSigBytes;
}

Bytes encode_proof(const CrossProof& proof) {
    Bytes out = encode_tx(proof.tx);
    out.reserve(out.size() + kHeightBytes + kRandomnessBytes +
                kVkBytes * proof.included_vks.size() + kSigBytes);
    // 32-byte big-endian height: 24 zero bytes then the 64-bit value.
    out.resize(out.size() + kHeightBytes - 8, 0x00);
    append_u64_be(out, proof.height);
    append(out, std::span<const uint8_t>(proof.randomness.data(), proof.randomness.size()));
    for (const PublicKey& vk : proof.included_vks) {
        append(out, std::span<const uint8_t>(vk.bytes.data(), vk.bytes.size()));
    }
    append(out, std::span<const uint8_t>(proof.agg_sig.bytes.data(), proof.agg_sig.bytes.size()));
    return out;
}

CrossProof decode_proof(std::span<const uint8_t> in) {
    constexpr size_t kFixed = kTxBytes + kHeightBytes + kRandomnessBytes + kSigBytes;
    if (in.size() < kFixed + kVkBytes) {
        throw EncodingError("proof encoding too short");
    }
    if ((in.size() - kFixed) % kVkBytes != 0) {
        throw EncodingError("proof encoding length does not fit the field layout");
    }
    const size_t key_count = (in.size() - kFixed) / kVkBytes;

    CrossProof proof;
    size_t at = 0;
    proof.tx = decode_tx(in.subspan(at, kTxBytes));
    at += kTxBytes;
    for (size_t i = 0; i < kHeightBytes - 8; ++i) {
        if (in[at + i] != 0x00) {
            throw EncodingError("proof height exceeds the representable range");
        }
    }
    proof.height = read_u64_be(in.subspan(at + kHeightBytes - 8, 8));
    at += kHeightBytes;
    std::copy_n(in.begin() + at, kRandomnessBytes, proof.randomness.begin());
    at += kRandomnessBytes;
    proof.included_vks.resize(key_count);
    for (size_t i = 0; i < key_count; ++i) {
        std::copy_n(in.begin() + at, kVkBytes, proof.included_vks[i].bytes.begin());
        at += kVkBytes;
    }
    std::copy_n(in.begin() + at, kSigBytes, proof.agg_sig.bytes.begin());
    return proof;
}

Hash256 proof_digest(const CrossProof& proof) {
    const Bytes encoded = encode_proof(proof);
    return sha256(std::span<const uint8_t>(encoded.data(), encoded.size()));
}

Hash256 attestation_message(const std::string& source_id, const Hash256& tx_id, uint64_t height,
                            const std::array<uint8_t, kRandomnessBytes>& randomness) {
    Sha256 h;
    h.update(std::string("metarelay.attest"));
    Bytes id_len;
    append_u64_be(id_len, source_id.size());
    h.update(std::span<const uint8_t>(id_len.data(), id_len.size()));
    h.update(source_id);
    h.update(std::span<const uint8_t>(tx_id.data(), tx_id.size()));
    Bytes height_be;
    height_be.resize(kHeightBytes - 8, 0x00);
    append_u64_be(height_be, height);
    h.update(std::span<const uint8_t>(height_be.data(), height_be.size()));
    h.update(std::span<const uint8_t>(randomness.data(), randomness.size()));
    return h.finish();
}

std::optional<uint64_t> LedgerSource::confirmed_height(const Hash256& tx_id) const {
    const auto height = ledger_->inclusion_height(tx_id);
    if (!height || !ledger_->is_confirmed(*height)) return std::nullopt;
    return height;
}

CrossProof generate_proof(const Committee& committee, const AttestationSource& source,
                          const LedgerTx& tx, const std::array<uint8_t, kRandomnessBytes>& randomness,
                          const KeyDirectory& directory) {
    if (committee.watched_id != source.source_id()) {
        throw Error("committee watches " + committee.watched_id + ", not " + source.source_id());
    }
    const auto height = source.confirmed_height(tx.tx_id);
    if (!height) {
        throw RefusalError("proof refused: tx not confirmed in " + source.source_id());
    }

    const Hash256 message = attestation_message(source.source_id(), tx.tx_id, *height, randomness);
    const std::span<const uint8_t> msg(message.data(), message.size());

    std::vector<SignatureShare> shares;
    shares.reserve(committee.included_key_count());
    for (size_t i = 0; i < committee.included_key_count(); ++i) {
        const CommitteeMember& member = committee.members[i];
        const KeyTriple& triple = directory.triple(member.node);
        SignatureShare share{member.vk, sign(triple.sk, msg)};
        if (!verify(share.vk, msg, share.sig)) {
            throw Error("member " + member.node + " produced an invalid signature share");
        }
        shares.push_back(share);
    }
    const MultiSig ms = aggregate(shares, msg);

    CrossProof proof;
    proof.tx = tx;
    proof.height = *height;
    proof.randomness = randomness;
    proof.included_vks = ms.signer_set;
    proof.agg_sig = ms.sig;
    return proof;
}

bool verify_proof(const Committee& committee, const CrossProof& proof) {
    if (proof.included_vks.size() != committee.included_key_count()) return false;
    for (const PublicKey& vk : proof.included_vks) {
        if (!committee.has_member_vk(vk)) return false;
    }
    // The tx id must match its content; payload tampering shows up here.
    if (proof.tx.tx_id != tx_content_digest(proof.tx.kind, std::span<const uint8_t>(
                                                proof.tx.payload.data(), proof.tx.payload.size()))) {
        return false;
    }
    const Hash256 message =
        attestation_message(committee.watched_id, proof.tx.tx_id, proof.height, proof.randomness);
    if (!verify_aggregate(proof.included_vks, std::span<const uint8_t>(message.data(), message.size()),
                          proof.agg_sig)) {
        return false;
    }
    return encode_proof(proof).size() == proof_size_bytes(committee.size());
}

} // namespace metarelay
