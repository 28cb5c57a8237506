#pragma once

// Thin value-type wrapper over libsodium's ristretto255 prime-order group.
// Points and scalars are kept in their canonical 32-byte encodings; any
// Point that exists was either produced by a group operation or validated
// on decode, so arithmetic never fails. The identity element (all-zero
// encoding) is a legal value everywhere, which sigma-protocol verification
// relies on.

#include <array>
#include <cstdint>
#include <optional>

#include "devneg/bytes.hpp"
#include "devneg/hash.hpp"
#include "devneg/rng.hpp"

namespace devneg::group {

class Scalar {
public:
    Scalar() = default;  // zero

    static Scalar from_u64(uint64_t v);
    // Reduce 64 uniform bytes mod the group order.
    static Scalar reduce_64(const uint8_t wide[64]);
    static Scalar random(Rng& rng);
    static Scalar from_hash(const Hash256& h);  // widened then reduced
    // Canonical little-endian value < group order; rejects otherwise.
    static std::optional<Scalar> from_canonical_bytes(ByteView b);
    // Low 16 bytes set, rest zero — always canonical.
    static Scalar from_bytes16(const uint8_t b[16]);

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar negate() const;

    bool is_zero() const;
    bool operator==(const Scalar& o) const { return b_ == o.b_; }
    ByteView view() const { return {b_.data(), b_.size()}; }
    const uint8_t* data() const { return b_.data(); }

private:
    std::array<uint8_t, 32> b_{};
};

class Point {
public:
    Point() = default;  // identity

    static Point identity() { return Point(); }
    static Point base();                      // the ristretto255 base point
    static Point base_mul(const Scalar& s);   // s * base
    static Point from_hash64(const uint8_t wide[64]);
    static std::optional<Point> from_bytes(ByteView b);  // validated decode

    Point operator+(const Point& o) const;
    Point operator-(const Point& o) const;
    Point mul(const Scalar& s) const;

    bool is_identity() const;
    bool operator==(const Point& o) const { return enc_ == o.enc_; }
    ByteView view() const { return {enc_.data(), enc_.size()}; }
    const uint8_t* data() const { return enc_.data(); }

private:
    std::array<uint8_t, 32> enc_{};
};

}  // namespace devneg::group
