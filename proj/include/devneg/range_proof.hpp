#pragma once

// Non-interactive proof that a public offer p satisfies p_min <= p <= p_max
// against Pedersen commitments to the secret bounds, without revealing them.
//
// Construction: both differences d1 = p - p_min and d2 = p_max - p are
// commitments derivable from public data (D1 = p*G - Cmin, D2 = Cmax - p*G).
// Each difference is decomposed into kRangeBits bit commitments; every bit
// commitment carries a CDS OR-proof that it opens to 0 or 1, and a Schnorr
// proof on base H links the weighted bit sum to the difference commitment.
// All challenges derive from one Fiat-Shamir digest that binds the session
// id and the offer, so proofs cannot be replayed across sessions or prices.
//
// Wire layout (byte-exact, version 1):
//   u8 version | u8 k | u8 group_id (1 = ristretto255) | u8 reserved
//   2 sides, low side (p - p_min) first, each:
//     k records of: B (32) | c0 (16) | c1 (16) | z0 (32) | z1 (32)
//     link record:  A (32) | z (32)
// Challenge split is XOR over 16-byte strings; c0 xor c1 must equal the
// global challenge (the first 16 bytes of the transcript digest).

#include <cstdint>
#include <optional>

#include "devneg/pedersen.hpp"

namespace devneg::zkp {

inline constexpr uint8_t kProofVersion = 1;
inline constexpr uint8_t kGroupRistretto255 = 1;
inline constexpr size_t kBitRecordSize = 32 + 16 + 16 + 32 + 32;
inline constexpr size_t kProofSize =
    4 + 2 * (size_t(kRangeBits) * kBitRecordSize + 64);

struct RangeProof {
    Bytes bytes;  // full canonical encoding, kProofSize long
};

// Prover refuses (throws std::domain_error) when the offer lies outside
// [p_min, p_max] — no valid proof exists to emit.
RangeProof prove_in_range(Money offer, const BoundCommitments& bounds,
                          const Hash256& session_id, uint64_t rng_seed);

// True iff the proof is valid for exactly this (offer, cmin, cmax,
// session_id) tuple. Malformed encodings return false, never throw.
bool verify_in_range(Money offer, const Commitment& cmin, const Commitment& cmax,
                     const RangeProof& proof, const Hash256& session_id);

}  // namespace devneg::zkp
