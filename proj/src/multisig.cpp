#include "metarelay/multisig.hpp"

#include <algorithm>

#include "metarelay/errors.hpp"
#include "metarelay/sha256.hpp"

namespace metarelay {

namespace {

// 66 deterministic bytes from (key, tag, data): three counters of SHA-256,
// truncated.
std::array<uint8_t, 66> prf66(std::span<const uint8_t> key, const std::string& tag,
                              std::span<const uint8_t> data) {
    std::array<uint8_t, 66> out{};
    size_t filled = 0;
    for (uint8_t counter = 0; filled < out.size(); ++counter) {
        Sha256 h;
        h.update(std::string("metarelay.prf"));
        h.update_byte(counter);
        h.update(key);
        h.update(tag);
        h.update(data);
        const Hash256 block = h.finish();
        const size_t take = std::min(block.size(), out.size() - filled);
        std::copy_n(block.begin(), take, out.begin() + filled);
        filled += take;
    }
    return out;
}

std::span<const uint8_t> as_span(const std::array<uint8_t, 34>& a) { return {a.data(), a.size()}; }
std::span<const uint8_t> as_span(const std::array<uint8_t, 32>& a) { return {a.data(), a.size()}; }

} // namespace

PublicKey derive_vk(const SecretKey& sk) {
    PublicKey vk;
    Sha256 h0;
    h0.update(std::string("metarelay.vk0"));
    h0.update(as_span(sk.bytes));
    const Hash256 a = h0.finish();
    Sha256 h1;
    h1.update(std::string("metarelay.vk1"));
    h1.update(as_span(sk.bytes));
    const Hash256 b = h1.finish();
    std::copy_n(a.begin(), 32, vk.bytes.begin());
    std::copy_n(b.begin(), 2, vk.bytes.begin() + 32);
    return vk;
}

KeyTriple keygen(std::span<const uint8_t> seed) {
    KeyTriple triple;
    Sha256 h;
    h.update(std::string("metarelay.sk"));
    h.update(seed);
    triple.sk.bytes = h.finish();
    triple.vk = derive_vk(triple.sk);
    triple.pop.bytes = prf66(as_span(triple.vk.bytes), "pop", {});
    return triple;
}

Signature sign(const SecretKey& sk, std::span<const uint8_t> message) {
    const PublicKey vk = derive_vk(sk);
    Signature sig;
    sig.bytes = prf66(as_span(vk.bytes), "sig", message);
    return sig;
}

bool verify(const PublicKey& vk, std::span<const uint8_t> message, const Signature& sig) {
    return prf66(as_span(vk.bytes), "sig", message) == sig.bytes;
}

bool verify_pop(const PublicKey& vk, const ProofOfPossession& pop) {
    return prf66(as_span(vk.bytes), "pop", {}) == pop.bytes;
}

MultiSig aggregate(std::span<const SignatureShare> shares, std::span<const uint8_t> message) {
    if (shares.empty()) {
        throw Error("aggregate: share list must not be empty");
    }
    MultiSig ms;
    ms.signer_set.reserve(shares.size());
    for (const SignatureShare& share : shares) {
        if (!verify(share.vk, message, share.sig)) {
            throw Error("aggregate: share does not verify over the message");
        }
        for (size_t i = 0; i < kSigBytes; ++i) {
            ms.sig.bytes[i] = static_cast<uint8_t>(ms.sig.bytes[i] + share.sig.bytes[i]);
        }
        ms.signer_set.push_back(share.vk);
    }
    return ms;
}

bool verify_aggregate(std::span<const PublicKey> signer_set, std::span<const uint8_t> message,
                      const Signature& agg) {
    if (signer_set.empty()) return false;
    std::array<uint8_t, kSigBytes> sum{};
    for (const PublicKey& vk : signer_set) {
        const auto share = prf66(as_span(vk.bytes), "sig", message);
        for (size_t i = 0; i < kSigBytes; ++i) {
            sum[i] = static_cast<uint8_t>(sum[i] + share[i]);
        }
    }
    return sum == agg.bytes;
}

} // namespace metarelay
