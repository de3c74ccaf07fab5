#include "metarelay/rng.hpp"

#include "metarelay/sha256.hpp"

namespace metarelay {

uint64_t derive_seed(uint64_t seed, const std::string& label) {
    Bytes buf;
    append_u64_be(buf, seed);
    append(buf, label);
    const Hash256 digest = sha256(std::span<const uint8_t>(buf.data(), buf.size()));
    return read_u64_be(std::span<const uint8_t>(digest.data(), 8));
}

} // namespace metarelay
