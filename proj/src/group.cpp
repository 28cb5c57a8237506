#include "devneg/group.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace devneg::group {

namespace {
// Group order L = 2^252 + 27742317777372353535851937790883648493,
// little-endian.
constexpr uint8_t kOrderLE[32] = {
    0xed, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7,
    0xa2, 0xde, 0xf9, 0xde, 0x14, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10};

bool lt_order(const uint8_t b[32]) {
    for (int i = 31; i >= 0; --i) {
        if (b[i] < kOrderLE[i]) return true;
        if (b[i] > kOrderLE[i]) return false;
    }
    return false;  // equal
}
}  // namespace

Scalar Scalar::from_u64(uint64_t v) {
    Scalar s;
    for (int i = 0; i < 8; ++i) s.b_[i] = uint8_t(v >> (8 * i));
    return s;
}

Scalar Scalar::reduce_64(const uint8_t wide[64]) {
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.b_.data(), wide);
    return s;
}

Scalar Scalar::random(Rng& rng) {
    uint8_t wide[64];
    rng.fill(wide, sizeof wide);
    return reduce_64(wide);
}

Scalar Scalar::from_hash(const Hash256& h) {
    uint8_t wide[64] = {};
    std::memcpy(wide, h.v.data(), 32);
    return reduce_64(wide);
}

std::optional<Scalar> Scalar::from_canonical_bytes(ByteView b) {
    if (b.size() != 32 || !lt_order(b.data())) return std::nullopt;
    Scalar s;
    std::memcpy(s.b_.data(), b.data(), 32);
    return s;
}

Scalar Scalar::from_bytes16(const uint8_t b[16]) {
    Scalar s;
    std::memcpy(s.b_.data(), b, 16);
    return s;
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar r;
    crypto_core_ristretto255_scalar_add(r.b_.data(), b_.data(), o.b_.data());
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    Scalar r;
    crypto_core_ristretto255_scalar_sub(r.b_.data(), b_.data(), o.b_.data());
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar r;
    crypto_core_ristretto255_scalar_mul(r.b_.data(), b_.data(), o.b_.data());
    return r;
}

Scalar Scalar::negate() const {
    Scalar r;
    crypto_core_ristretto255_scalar_negate(r.b_.data(), b_.data());
    return r;
}

bool Scalar::is_zero() const {
    uint8_t acc = 0;
    for (uint8_t c : b_) acc |= c;
    return acc == 0;
}

Point Point::base() {
    return base_mul(Scalar::from_u64(1));
}

Point Point::base_mul(const Scalar& s) {
    if (s.is_zero()) return identity();
    Point p;
    if (crypto_scalarmult_ristretto255_base(p.enc_.data(), s.data()) != 0)
        throw std::logic_error("ristretto base_mul failed");
    return p;
}

Point Point::from_hash64(const uint8_t wide[64]) {
    Point p;
    if (crypto_core_ristretto255_from_hash(p.enc_.data(), wide) != 0)
        throw std::logic_error("ristretto from_hash failed");
    return p;
}

std::optional<Point> Point::from_bytes(ByteView b) {
    if (b.size() != 32) return std::nullopt;
    Point p;
    std::memcpy(p.enc_.data(), b.data(), 32);
    if (p.is_identity()) return p;
    if (crypto_core_ristretto255_is_valid_point(p.enc_.data()) != 1)
        return std::nullopt;
    return p;
}

Point Point::operator+(const Point& o) const {
    if (is_identity()) return o;
    if (o.is_identity()) return *this;
    Point r;
    if (crypto_core_ristretto255_add(r.enc_.data(), enc_.data(), o.enc_.data()) != 0)
        throw std::logic_error("ristretto add failed");
    return r;
}

Point Point::operator-(const Point& o) const {
    if (o.is_identity()) return *this;
    Point r;
    if (crypto_core_ristretto255_sub(r.enc_.data(), enc_.data(), o.enc_.data()) != 0)
        throw std::logic_error("ristretto sub failed");
    return r;
}

Point Point::mul(const Scalar& s) const {
    if (s.is_zero() || is_identity()) return identity();
    Point r;
    if (crypto_scalarmult_ristretto255(r.enc_.data(), s.data(), enc_.data()) != 0) {
        // Prime order: n*P = O with canonical n != 0 implies P = O, which is
        // handled above; anything else means the input was never validated.
        throw std::logic_error("ristretto scalarmult failed");
    }
    return r;
}

bool Point::is_identity() const {
    uint8_t acc = 0;
    for (uint8_t c : enc_) acc |= c;
    return acc == 0;
}

}  // namespace devneg::group
