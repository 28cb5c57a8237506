#include "devneg/hash.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace devneg {

static_assert(sizeof(crypto_hash_sha256_state) <= 104,
              "sha256 state buffer too small");

namespace {
struct SodiumInit {
    SodiumInit() {
        if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
    }
};
const SodiumInit g_sodium_init{};
}  // namespace

Hash256 sha256(ByteView data) {
    Hash256 h;
    crypto_hash_sha256(h.v.data(), data.data(), data.size());
    return h;
}

Hash256 sha256(std::string_view data) {
    return sha256(ByteView{reinterpret_cast<const uint8_t*>(data.data()), data.size()});
}

Hash256 Hash256::from_hex(std::string_view s) {
    Bytes b = devneg::from_hex(s);
    if (b.size() != 32) throw DecodeError("hash hex must be 32 bytes");
    Hash256 h;
    std::memcpy(h.v.data(), b.data(), 32);
    return h;
}

Sha256::Sha256() {
    auto* st = reinterpret_cast<crypto_hash_sha256_state*>(state_.data());
    crypto_hash_sha256_init(st);
}

Sha256& Sha256::update(ByteView data) {
    auto* st = reinterpret_cast<crypto_hash_sha256_state*>(state_.data());
    crypto_hash_sha256_update(st, data.data(), data.size());
    return *this;
}

Sha256& Sha256::update(std::string_view data) {
    return update(ByteView{reinterpret_cast<const uint8_t*>(data.data()), data.size()});
}

Hash256 Sha256::finish() {
    auto* st = reinterpret_cast<crypto_hash_sha256_state*>(state_.data());
    Hash256 h;
    crypto_hash_sha256_final(st, h.v.data());
    return h;
}

std::array<uint8_t, 64> sha512(ByteView data) {
    std::array<uint8_t, 64> out;
    crypto_hash_sha512(out.data(), data.data(), data.size());
    return out;
}

}  // namespace devneg
