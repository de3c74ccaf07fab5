#include <doctest.h>

#include "metarelay/ledger.hpp"

using namespace metarelay;

namespace {

SimLedger make_ledger(uint64_t k, uint64_t seed = 1,
                      std::vector<ProducerSlot> producers = {{"alpha", 1}, {"beta", 1}, {"gamma", 1}}) {
    return SimLedger("chain", 5, k, std::move(producers), seed);
}

} // namespace

TEST_CASE("advancing an empty chain lays down consecutive timestamped blocks") {
    SimLedger ledger = make_ledger(2);
    SimClock clock;
    const auto produced = advance_blocks(ledger, clock, 3);
    REQUIRE(produced.size() == 3);
    CHECK(produced[0].height == 0);
    CHECK(produced[1].height == 1);
    CHECK(produced[2].height == 2);
    CHECK(clock.now == 15);
    CHECK(produced[2].timestamp == 10);
}

TEST_CASE("advancing by zero blocks changes nothing") {
    SimLedger ledger = make_ledger(2);
    SimClock clock;
    advance_blocks(ledger, clock, 4);
    const uint64_t len = ledger.chain_length();
    const auto produced = advance_blocks(ledger, clock, 0);
    CHECK(produced.empty());
    CHECK(ledger.chain_length() == len);
    CHECK(clock.now == 20);
}

TEST_CASE("400 blocks at 5 s take 2000 simulated seconds") {
    SimLedger ledger = make_ledger(400);
    SimClock clock;
    advance_blocks(ledger, clock, 400);
    CHECK(clock.now == 2000);
}

TEST_CASE("a submitted tx lands in the next produced block") {
    SimLedger ledger = make_ledger(2);
    SimClock clock;
    advance_blocks(ledger, clock, 10); // heights 0..9
    const LedgerTx tx = make_tx(TxKind::Plain, Bytes{'h', 'i'});
    const uint64_t promised = ledger.submit_tx(tx);
    CHECK(promised == 10);
    const Block& block = ledger.produce_block();
    CHECK(block.height == 10);
    REQUIRE(block.tx_list.size() == 1);
    CHECK(block.tx_list[0].tx_id == tx.tx_id);
    CHECK(ledger.inclusion_height(tx.tx_id) == 10);
}

TEST_CASE("duplicate tx ids are rejected") {
    SimLedger ledger = make_ledger(2);
    const LedgerTx tx = make_tx(TxKind::Plain, Bytes{'x'});
    ledger.submit_tx(tx);
    CHECK_THROWS_AS(ledger.submit_tx(tx), Error);
    ledger.produce_block();
    CHECK_THROWS_AS(ledger.submit_tx(tx), Error); // still known once included
}

TEST_CASE("oversized payloads are truncated into the fixed 250-byte encoding") {
    Bytes payload(300, 0xab);
    const LedgerTx tx = make_tx(TxKind::Plain, payload);
    CHECK(tx.payload.size() == LedgerTx::kPayloadCapacity);
    const Bytes encoded = encode_tx(tx);
    CHECK(encoded.size() == 250);
    // Round-trips as the truncated tx.
    const LedgerTx back = decode_tx(encoded);
    CHECK(back.tx_id == tx.tx_id);
    CHECK(back.payload == tx.payload);
}

TEST_CASE("every tx kind encodes to exactly 250 bytes") {
    for (TxKind kind : {TxKind::Plain, TxKind::Lock, TxKind::Mint, TxKind::Stake, TxKind::CustomMint}) {
        CHECK(encode_tx(make_tx(kind, Bytes{1, 2, 3})).size() == 250);
        CHECK(encode_tx(make_tx(kind, Bytes{})).size() == 250);
    }
}

TEST_CASE("non-canonical tx encodings are rejected") {
    const LedgerTx tx = make_tx(TxKind::Lock, Bytes{'a', 'b', 'c'});
    Bytes encoded = encode_tx(tx);

    Bytes bad_kind = encoded;
    bad_kind[0] = 9;
    CHECK_THROWS_AS(decode_tx(bad_kind), EncodingError);

    Bytes bad_len = encoded;
    bad_len[33] = 0xff; // length 0xff__ > capacity
    CHECK_THROWS_AS(decode_tx(bad_len), EncodingError);

    Bytes bad_pad = encoded;
    bad_pad[249] = 1;
    CHECK_THROWS_AS(decode_tx(bad_pad), EncodingError);

    CHECK_THROWS_AS(decode_tx(std::span<const uint8_t>(encoded.data(), 100)), EncodingError);
}

TEST_CASE("confirmation needs exactly k blocks on top of inclusion") {
    SimLedger ledger = make_ledger(400);
    SimClock clock;
    advance_blocks(ledger, clock, 10);
    const LedgerTx tx = make_tx(TxKind::Plain, Bytes{'c'});
    const uint64_t at = ledger.submit_tx(tx);
    REQUIRE(at == 10);
    advance_blocks(ledger, clock, 400); // heights 10..409, tip 409
    CHECK_FALSE(ledger.is_confirmed(10));
    advance_blocks(ledger, clock, 1); // tip 410
    CHECK(ledger.is_confirmed(10));
}

TEST_CASE("k=500 confirmation of the genesis-included tx lands at tip 500, timestamp 2500") {
    SimLedger ledger = make_ledger(500);
    SimClock clock;
    const LedgerTx tx = make_tx(TxKind::Plain, Bytes{'g'});
    CHECK(ledger.submit_tx(tx) == 0);
    advance_blocks(ledger, clock, 500); // tip 499
    CHECK_FALSE(ledger.is_confirmed(0));
    advance_blocks(ledger, clock, 1); // tip 500
    CHECK(ledger.is_confirmed(0));
    CHECK(ledger.blocks().back().timestamp == 2500);
}

TEST_CASE("unknown inclusion heights are an error") {
    SimLedger ledger = make_ledger(1);
    SimClock clock;
    advance_blocks(ledger, clock, 3);
    CHECK_THROWS_AS(ledger.is_confirmed(3), Error);
    CHECK_THROWS_AS(ledger.is_confirmed(99), Error);
}

TEST_CASE("confirmation is monotone: once true it stays true") {
    SimLedger ledger = make_ledger(4);
    SimClock clock;
    const LedgerTx tx = make_tx(TxKind::Plain, Bytes{'m'});
    ledger.submit_tx(tx);
    bool was_confirmed = false;
    for (int i = 0; i < 30; ++i) {
        advance_blocks(ledger, clock, 1);
        const bool now_confirmed = ledger.is_confirmed(0);
        if (was_confirmed) CHECK(now_confirmed);
        was_confirmed = now_confirmed;
    }
    CHECK(was_confirmed);
}

TEST_CASE("timestamp law holds over random advances") {
    Rng rng(42);
    SimLedger ledger = make_ledger(1, 7);
    SimClock clock;
    for (int round = 0; round < 20; ++round) {
        advance_blocks(ledger, clock, rng.bounded(17));
    }
    for (const Block& block : ledger.blocks()) {
        CHECK(block.timestamp == block.height * ledger.block_interval());
    }
}

TEST_CASE("hash chain integrity: recomputation reproduces stored digests, tampering breaks it") {
    SimLedger ledger = make_ledger(1, 3);
    SimClock clock;
    ledger.submit_tx(make_tx(TxKind::Lock, Bytes{'t'}));
    advance_blocks(ledger, clock, 8);
    CHECK(ledger.verify_chain());

    Hash256 prev{};
    for (const Block& block : ledger.blocks()) {
        CHECK(block_header_digest(block, prev) == block.header_digest);
        prev = block.header_digest;
    }

    Block tampered = ledger.blocks()[3];
    tampered.producer += "?";
    CHECK(block_header_digest(tampered, ledger.blocks()[2].header_digest) !=
          ledger.blocks()[3].header_digest);
}

TEST_CASE("identical config and seed give byte-identical chains") {
    SimLedger a = make_ledger(2, 99);
    SimLedger b = make_ledger(2, 99);
    SimClock ca, cb;
    advance_blocks(a, ca, 50);
    advance_blocks(b, cb, 50);
    REQUIRE(a.chain_length() == b.chain_length());
    for (size_t i = 0; i < a.chain_length(); ++i) {
        CHECK(a.blocks()[i].header_digest == b.blocks()[i].header_digest);
        CHECK(a.blocks()[i].producer == b.blocks()[i].producer);
    }

    SimLedger c = make_ledger(2, 100);
    SimClock cc;
    advance_blocks(c, cc, 50);
    CHECK(c.blocks().back().header_digest != a.blocks().back().header_digest);
}

TEST_CASE("producer draws follow the configured weights") {
    SimLedger ledger("weighted", 5, 1, {{"heavy", 9}, {"light", 1}}, 5);
    SimClock clock;
    advance_blocks(ledger, clock, 500);
    size_t heavy = 0;
    for (const Block& block : ledger.blocks()) {
        if (block.producer == "heavy") ++heavy;
    }
    CHECK(heavy > 400);
    CHECK(heavy < 500);
}
