#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "metarelay/bytes.hpp"

namespace metarelay {

// SplitMix64. Chosen over std::mt19937_64 + distributions because the
// standard distributions are not bit-reproducible across library
// implementations, and every draw here must be.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Multiply-shift; the bias is < n / 2^64.
    uint64_t bounded(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    void fill(std::span<uint8_t> out) {
        size_t i = 0;
        while (i < out.size()) {
            uint64_t v = next();
            for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
                out[i] = static_cast<uint8_t>(v >> (8 * b));
            }
        }
    }

private:
    uint64_t state_;
};

// Stable 64-bit stream seed derived from a parent seed and a label,
// so sub-generators (per ledger, per purpose) never share a stream.
uint64_t derive_seed(uint64_t seed, const std::string& label);

} // namespace metarelay
