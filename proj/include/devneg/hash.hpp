#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string_view>

#include "devneg/bytes.hpp"

namespace devneg {

struct Hash256 {
    std::array<uint8_t, 32> v{};

    auto operator<=>(const Hash256&) const = default;
    ByteView view() const { return {v.data(), v.size()}; }
    std::string hex() const { return to_hex(view()); }
    static Hash256 from_hex(std::string_view s);
    bool is_zero() const {
        for (uint8_t b : v)
            if (b) return false;
        return true;
    }
};

Hash256 sha256(ByteView data);
Hash256 sha256(std::string_view data);

// Incremental SHA-256, used wherever a digest covers several fields.
class Sha256 {
public:
    Sha256();
    Sha256& update(ByteView data);
    Sha256& update(std::string_view data);
    Sha256& update(const Hash256& h) { return update(h.view()); }
    Hash256 finish();

private:
    std::array<uint8_t, 104> state_;  // crypto_hash_sha256_state, opaque here
};

// 64-byte SHA-512 digest, needed for hash-to-group-element derivation.
std::array<uint8_t, 64> sha512(ByteView data);

}  // namespace devneg
