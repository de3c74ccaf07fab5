#include <doctest.h>

#include <cmath>
#include <map>

#include "metarelay/committee.hpp"

using namespace metarelay;

namespace {

Block window_block(const std::string& producer) {
    Block b;
    b.producer = producer;
    return b;
}

std::vector<Block> producers_to_window(const std::vector<std::string>& producers) {
    std::vector<Block> window;
    for (const auto& p : producers) window.push_back(window_block(p));
    return window;
}

// One instantly-final chain plus a confirmed lock tx, ready to attest.
struct ProofRig {
    SimLedger ledger;
    KeyDirectory directory;
    SimClock clock;
    Committee committee;
    LedgerTx tx;

    explicit ProofRig(size_t committee_size, uint64_t seed = 11, uint64_t ledger_k = 0)
        : ledger("src-chain", 5, ledger_k, make_slots(committee_size), seed), directory(seed) {
        advance_blocks(ledger, clock, 8 * std::max<size_t>(committee_size, 4));
        committee = select_committee(ledger, ledger.chain_length(), committee_size, directory,
                                     ledger.id());
        tx = make_tx(TxKind::Lock, Bytes{'o', 'b', 'j'});
        ledger.submit_tx(tx);
        ledger.produce_block();
        if (ledger_k > 0) advance_blocks(ledger, clock, ledger_k);
    }

    static std::vector<ProducerSlot> make_slots(size_t committee_size) {
        std::vector<ProducerSlot> slots;
        const size_t n = committee_size + committee_size / 2 + 4;
        for (size_t i = 0; i < n; ++i) {
            std::string num = std::to_string(i);
            num.insert(num.begin(), 4 - num.size(), '0');
            slots.push_back(ProducerSlot{"node" + num, 1});
        }
        return slots;
    }

    CrossProof make_proof(uint8_t nonce_fill = 0x5c) {
        std::array<uint8_t, kRandomnessBytes> nonce;
        nonce.fill(nonce_fill);
        return generate_proof(committee, LedgerSource(ledger), tx, nonce, directory);
    }
};

} // namespace

TEST_CASE("ranking picks the heaviest producers, ties by ascending id") {
    // brute-force oracle: A appears 3 times, B and C once each -> {A, B}
    const auto window = producers_to_window({"A", "A", "B", "C", "A"});
    std::map<std::string, int> counts;
    for (const Block& b : window) counts[b.producer]++;
    REQUIRE(counts["A"] == 3);
    REQUIRE(counts["B"] == 1);
    REQUIRE(counts["C"] == 1);

    const auto top2 = rank_window_producers(window, 2);
    REQUIRE(top2.size() == 2);
    CHECK(top2[0] == "A");
    CHECK(top2[1] == "B");
}

TEST_CASE("a sole producer forms a committee of one") {
    const auto window = producers_to_window({"A", "A", "A", "A"});
    const auto top = rank_window_producers(window, 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0] == "A");
}

TEST_CASE("selection fails loudly when distinct producers fall short") {
    const auto window = producers_to_window({"A", "B"});
    CHECK_THROWS_WITH_AS(std::ignore = rank_window_producers(window, 3),
                         doctest::Contains("needs 3 distinct producers"), Error);
}

TEST_CASE("selection agrees with a brute-force count over a real chain window") {
    SimLedger ledger("rank-chain", 5, 0, {{"a", 3}, {"b", 2}, {"c", 1}, {"d", 1}}, 21);
    SimClock clock;
    advance_blocks(ledger, clock, 200);
    KeyDirectory directory(21);
    const Committee committee = select_committee(ledger, 120, 2, directory, "rank-chain");

    std::map<std::string, uint64_t> counts;
    for (uint64_t h = ledger.chain_length() - 120; h < ledger.chain_length(); ++h) {
        counts[ledger.blocks()[h].producer]++;
    }
    std::vector<std::pair<uint64_t, std::string>> oracle;
    for (const auto& [node, n] : counts) oracle.push_back({n, node});
    std::sort(oracle.begin(), oracle.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
    REQUIRE(committee.members.size() == 2);
    CHECK(committee.members[0].node == oracle[0].second);
    CHECK(committee.members[1].node == oracle[1].second);
}

TEST_CASE("selection is a pure function of the window") {
    ProofRig rig_a(6, 33);
    ProofRig rig_b(6, 33);
    REQUIRE(rig_a.committee.members.size() == rig_b.committee.members.size());
    for (size_t i = 0; i < rig_a.committee.members.size(); ++i) {
        CHECK(rig_a.committee.members[i].node == rig_b.committee.members[i].node);
        CHECK(rig_a.committee.members[i].vk == rig_b.committee.members[i].vk);
    }
}

TEST_CASE("proof size law: published point, small point, and the error case") {
    CHECK(proof_size_bytes(400) == 1740);
    CHECK(proof_size_bytes(10) == 414);
    CHECK_THROWS_AS(proof_size_bytes(0), Error);
}

TEST_CASE("proof size law matches an independent ceiling evaluation for all c up to 2000") {
    for (uint64_t c = 1; c <= 2000; ++c) {
        const uint64_t expected =
            250 + 32 + 32 + 34 * static_cast<uint64_t>(std::ceil(0.1 * static_cast<double>(c))) + 66;
        CHECK(proof_size_bytes(c) == expected);
    }
    // +10 members -> exactly one more 34-byte key
    for (uint64_t c = 10; c <= 1000; c += 10) {
        CHECK(proof_size_bytes(c + 10) - proof_size_bytes(c) == 34);
    }
}

TEST_CASE("an honestly generated proof verifies and meets the size law") {
    ProofRig rig(10);
    const CrossProof proof = rig.make_proof();
    CHECK(proof.included_vks.size() == 1); // ceil(10/10)
    CHECK(verify_proof(rig.committee, proof));
    CHECK(encode_proof(proof).size() == proof_size_bytes(10));
    CHECK(encode_proof(proof).size() == 414);
}

TEST_CASE("unconfirmed txs are refused") {
    ProofRig rig(4, 17, /*ledger_k=*/0);
    // fresh tx, submitted but not yet included anywhere
    const LedgerTx pending = make_tx(TxKind::Lock, Bytes{'p'});
    std::array<uint8_t, kRandomnessBytes> nonce{};
    CHECK_THROWS_AS(
        std::ignore = generate_proof(rig.committee, LedgerSource(rig.ledger), pending, nonce,
                                     rig.directory),
        RefusalError);

    // included but not deep enough
    SimLedger slow("slow", 5, 3, ProofRig::make_slots(4), 9);
    SimClock clock;
    advance_blocks(slow, clock, 40);
    KeyDirectory directory(9);
    const Committee committee = select_committee(slow, 40, 4, directory, "slow");
    const LedgerTx tx = make_tx(TxKind::Lock, Bytes{'q'});
    slow.submit_tx(tx);
    slow.produce_block();
    CHECK_THROWS_AS(
        std::ignore = generate_proof(committee, LedgerSource(slow), tx, nonce, directory),
        RefusalError);
    advance_blocks(slow, clock, 3);
    CHECK(verify_proof(committee, generate_proof(committee, LedgerSource(slow), tx, nonce, directory)));
}

TEST_CASE("a committee only attests the source it watches") {
    ProofRig rig(4, 23);
    const Committee other = select_committee(rig.ledger, rig.ledger.chain_length(), 4,
                                             rig.directory, "some-other-chain");
    std::array<uint8_t, kRandomnessBytes> nonce{};
    CHECK_THROWS_AS(
        std::ignore = generate_proof(other, LedgerSource(rig.ledger), rig.tx, nonce, rig.directory),
        Error);
}

TEST_CASE("substituting any included key with a non-member breaks verification") {
    ProofRig rig(30, 41);
    const CrossProof proof = rig.make_proof();
    REQUIRE(proof.included_vks.size() == 3);

    const Bytes stranger_seed{'s', 't', 'r'};
    const KeyTriple stranger = keygen(std::span<const uint8_t>(stranger_seed.data(), stranger_seed.size()));
    REQUIRE_FALSE(rig.committee.has_member_vk(stranger.vk));

    for (size_t i = 0; i < proof.included_vks.size(); ++i) {
        CrossProof forged = proof;
        forged.included_vks[i] = stranger.vk;
        CHECK_FALSE(verify_proof(rig.committee, forged));
    }
}

TEST_CASE("proofs survive an encode/decode round trip") {
    for (size_t c : {size_t(1), size_t(7), size_t(25)}) {
        ProofRig rig(c, 100 + c);
        const CrossProof proof = rig.make_proof();
        const Bytes wire = encode_proof(proof);
        const CrossProof back = decode_proof(wire);
        CHECK(back.tx.tx_id == proof.tx.tx_id);
        CHECK(back.tx.payload == proof.tx.payload);
        CHECK(back.height == proof.height);
        CHECK(back.randomness == proof.randomness);
        CHECK(back.included_vks == proof.included_vks);
        CHECK(back.agg_sig.bytes == proof.agg_sig.bytes);
        CHECK(verify_proof(rig.committee, back));
    }
}

TEST_CASE("random committees, payloads and nonces: honest proofs always verify and round-trip") {
    Rng rng(314159);
    for (int trial = 0; trial < 40; ++trial) {
        const size_t committee_size = 1 + rng.bounded(30);
        ProofRig rig(committee_size, 5000 + trial);

        Bytes payload(rng.bounded(LedgerTx::kPayloadCapacity + 1));
        rng.fill(payload);
        const TxKind kind = rng.bounded(2) == 0 ? TxKind::Lock : TxKind::Stake;
        const LedgerTx tx = make_tx(kind, payload);
        rig.ledger.submit_tx(tx);
        rig.ledger.produce_block();

        std::array<uint8_t, kRandomnessBytes> nonce;
        rng.fill(nonce);
        const CrossProof proof =
            generate_proof(rig.committee, LedgerSource(rig.ledger), tx, nonce, rig.directory);

        CHECK(verify_proof(rig.committee, proof));
        const Bytes wire = encode_proof(proof);
        CHECK(wire.size() == proof_size_bytes(committee_size));
        CHECK(verify_proof(rig.committee, decode_proof(wire)));
    }
}

TEST_CASE("sampled single-byte corruptions of the wire image never verify") {
    ProofRig rig(20, 55);
    const CrossProof proof = rig.make_proof();
    const Bytes wire = encode_proof(proof);
    for (size_t at = 0; at < wire.size(); at += 7) {
        Bytes corrupt = wire;
        corrupt[at] ^= 0x41;
        bool rejected = false;
        try {
            rejected = !verify_proof(rig.committee, decode_proof(corrupt));
        } catch (const EncodingError&) {
            rejected = true; // malformed is reported distinctly, still a rejection
        }
        CHECK(rejected);
    }
}

TEST_CASE("truncated or misaligned proof encodings are malformed") {
    ProofRig rig(10, 77);
    const Bytes wire = encode_proof(rig.make_proof());
    CHECK_THROWS_AS(decode_proof(std::span<const uint8_t>(wire.data(), wire.size() - 1)),
                    EncodingError);
    CHECK_THROWS_AS(decode_proof(std::span<const uint8_t>(wire.data(), 100)), EncodingError);
    Bytes padded = wire;
    padded.push_back(0);
    CHECK_THROWS_AS(decode_proof(padded), EncodingError);
}
