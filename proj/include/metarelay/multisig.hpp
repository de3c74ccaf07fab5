#pragma once

#include <array>
#include <compare>
#include <span>
#include <vector>

#include "metarelay/bytes.hpp"
#include "metarelay/params.hpp"

namespace metarelay {

// Aggregatable multi-signature scheme with fixed wire sizes: 34-byte
// public keys, 66-byte signatures / proofs of possession, and a 66-byte
// aggregate regardless of signer count.
//
// The scheme is a deterministic keyed-hash instantiation: shares are
// PRF(vk, message) and the aggregate is their byte-wise mod-256 sum, so
// aggregation commutes and never cancels duplicate shares. It keeps the
// exact sizes and the verify contracts; it is a simulation primitive,
// not hardened cryptography.

struct PublicKey {
    std::array<uint8_t, kVkBytes> bytes{};
    auto operator<=>(const PublicKey&) const = default;
};

struct SecretKey {
    std::array<uint8_t, 32> bytes{}; // opaque
    auto operator<=>(const SecretKey&) const = default;
};

struct Signature {
    std::array<uint8_t, kSigBytes> bytes{};
    auto operator<=>(const Signature&) const = default;
};

struct ProofOfPossession {
    std::array<uint8_t, kPopBytes> bytes{};
    auto operator<=>(const ProofOfPossession&) const = default;
};

struct KeyTriple {
    PublicKey vk;
    SecretKey sk;
    ProofOfPossession pop;
};

struct SignatureShare {
    PublicKey vk;
    Signature sig;
};

struct MultiSig {
    Signature sig;
    std::vector<PublicKey> signer_set;
};

KeyTriple keygen(std::span<const uint8_t> seed);
PublicKey derive_vk(const SecretKey& sk);

Signature sign(const SecretKey& sk, std::span<const uint8_t> message);
bool verify(const PublicKey& vk, std::span<const uint8_t> message, const Signature& sig);

bool verify_pop(const PublicKey& vk, const ProofOfPossession& pop);

// Every share must verify over the given message; a share signed over a
// different message is indistinguishable from a corrupt one and is
// rejected the same way. Throws on an empty list or any bad share.
MultiSig aggregate(std::span<const SignatureShare> shares, std::span<const uint8_t> message);

bool verify_aggregate(std::span<const PublicKey> signer_set, std::span<const uint8_t> message,
                      const Signature& agg);

} // namespace metarelay
