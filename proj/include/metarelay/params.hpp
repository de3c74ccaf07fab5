#pragma once

#include <cstdint>

#include "metarelay/errors.hpp"

namespace metarelay {

// Fixed wire sizes. These are protocol constants, not tunables: the proof
// size law and every encoder assert them.
inline constexpr size_t kVkBytes = 34;          // 272-bit public key
inline constexpr size_t kSigBytes = 66;         // 528-bit signature / aggregate
inline constexpr size_t kPopBytes = 66;         // 528-bit proof of possession
inline constexpr size_t kHashBytes = 32;        // 256-bit hash
inline constexpr size_t kTxBytes = 250;         // fixed transaction encoding
inline constexpr size_t kHeightBytes = 32;      // big-endian height field
inline constexpr size_t kRandomnessBytes = 32;  // per-proof nonce

// Of every 10 committee members, the first in committee order contributes
// a key to the proof: ceil(c / 10) included keys.
inline constexpr uint64_t kSignerNumerator = 1;
inline constexpr uint64_t kSignerDenominator = 10;

// Tunable model parameters, defaulting to the reference configuration:
// relay depth k = 400, target depth k' = 500, 5-second block intervals,
// committee of 400, 90-second proof time.
struct ProtocolParams {
    uint64_t block_interval_s = 5;
    uint64_t relay_k = 400;
    uint64_t target_k = 500;
    uint64_t committee_size = 400;
    uint64_t committee_window = 2000;
    uint64_t proof_time_s = 90;

    void validate() const {
        if (block_interval_s == 0) throw Error("block_interval_s must be positive");
        if (committee_size == 0) throw Error("committee_size must be positive");
        if (committee_window == 0) throw Error("committee_window must be positive");
    }
};

} // namespace metarelay
