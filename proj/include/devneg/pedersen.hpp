#pragma once

// Pedersen commitments over ristretto255: C = v*G + r*H with H derived by
// hashing to the group, so log_G(H) is unknown. Computationally binding,
// perfectly hiding.

#include <cstdint>
#include <optional>

#include "devneg/group.hpp"
#include "devneg/money.hpp"
#include "devneg/rng.hpp"

namespace devneg::zkp {

inline constexpr int kRangeBits = 32;
inline constexpr uint64_t kValueBound = 1ULL << kRangeBits;

struct PedersenGens {
    group::Point g;
    group::Point h;
};

// Fixed generators for this codebase; H = from_hash(SHA-512 of a domain tag).
const PedersenGens& pedersen_gens();

struct Commitment {
    group::Point point;
    bool operator==(const Commitment& o) const { return point == o.point; }
};

struct Opening {
    Money value = 0;
    group::Scalar blinding;
};

Commitment commit(Money value, const group::Scalar& blinding);
group::Scalar random_blinding(Rng& rng);
bool verify_opening(const Commitment& c, Money value, const group::Scalar& blinding);

// Session commitments to a secret interval [p_min, p_max].
struct BoundCommitments {
    Commitment cmin;
    Commitment cmax;
    Opening open_min;  // held by the committing party only
    Opening open_max;
};

// Requires 0 <= p_min <= p_max < 2^32.
BoundCommitments commit_bounds(Money p_min, Money p_max, uint64_t rng_seed);

}  // namespace devneg::zkp
