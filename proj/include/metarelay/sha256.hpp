#pragma once

#include <cstdint>
#include <cstddef>
#include <span>

#include "metarelay/bytes.hpp"

namespace metarelay {

// Streaming SHA-256 (FIPS 180-4). Self-contained, no external deps.
class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    Sha256& update(std::span<const uint8_t> data);
    Sha256& update(const std::string& s) {
        return update(std::span<const uint8_t>(
            reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }
    Sha256& update_byte(uint8_t b) { return update(std::span<const uint8_t>(&b, 1)); }
    Hash256 finish();

private:
    void process_block(const uint8_t* block);

    uint32_t state_[8];
    uint64_t total_len_ = 0;
    uint8_t buffer_[64];
    size_t buffer_len_ = 0;
};

inline Hash256 sha256(std::span<const uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.finish();
}

} // namespace metarelay
