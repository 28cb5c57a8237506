#pragma once

// Secure two-party overlap pre-check: does buyer_max >= seller_min, one bit
// out, nothing else revealed. The buyer holds the Paillier key and sends
// Enc(buyer_max); the seller folds in -seller_min homomorphically and blinds
// the difference d as r*d + r' with r >= 1 and 0 <= r' < r, which preserves
// the sign of d exactly (and maps d = 0 to a non-negative value, so the >=
// predicate holds). The buyer decrypts, reports the sign, and both parties
// learn exactly the one output bit. Semi-honest model.

#include <cstdint>

#include "devneg/hash.hpp"
#include "devneg/money.hpp"
#include "devneg/paillier.hpp"

namespace devneg::hom {

struct FeasResult {
    bool feasible = false;
    Hash256 transcript_hash;
};

// Full protocol transcript; payload fields are the exact wire bytes carried
// by the FeasCommit / FeasBlind / FeasResult messages.
struct FeasTranscript {
    Bytes commit_payload;  // buyer -> seller: public key + Enc(buyer_max)
    Bytes blind_payload;   // seller -> buyer: Enc(r*d + r')
    Bytes result_payload;  // buyer -> seller: the predicate bit
    mpz_class blinded_plain;  // buyer-side decryption, kept for leakage tests
    FeasResult result;
};

inline constexpr uint32_t kFeasValueBits = 32;

// Blinding factors r in [1, 2^31], r' in [0, r).
FeasTranscript run_overlap_check(const PaillierKeypair& buyer_key, Money buyer_max,
                                 Money seller_min, uint64_t rng_seed);

// Spec-shaped entry point: generates a fresh deterministic keypair per call.
FeasResult overlap_check(Money buyer_max, Money seller_min, uint32_t key_bits,
                         uint64_t rng_seed);

}  // namespace devneg::hom
