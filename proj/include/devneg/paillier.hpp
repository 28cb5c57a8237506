#pragma once

// Paillier additively homomorphic encryption over n^2 with g = n + 1.
// Deterministic keygen from a seed (MT-seeded GMP randstate) so transcripts
// replay exactly. Plaintexts are residues mod n; signed values use the
// n - |v| encoding with the midpoint threshold for sign recovery.

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "devneg/bytes.hpp"

namespace devneg::hom {

struct PaillierPublicKey {
    mpz_class n;
    mpz_class n_squared;
    uint32_t bits = 0;  // requested modulus length
};

struct PaillierKeypair {
    PaillierPublicKey pk;
    mpz_class lambda;  // lcm(p-1, q-1)
    mpz_class mu;      // lambda^{-1} mod n
};

// Deterministic randomness source for encryption blinding.
class PaillierRng {
public:
    explicit PaillierRng(uint64_t seed);
    mpz_class below(const mpz_class& bound);  // uniform in [0, bound)

private:
    gmp_randclass state_;
};

PaillierKeypair paillier_keygen(uint32_t bits, uint64_t seed);

// Requires 0 <= m < n; ciphertexts are randomized.
mpz_class paillier_encrypt(const PaillierPublicKey& pk, const mpz_class& m,
                           PaillierRng& rng);
mpz_class paillier_decrypt(const PaillierKeypair& kp, const mpz_class& ct);

// Enc(a) (+) Enc(b) = Enc(a + b mod n)
mpz_class hom_add(const PaillierPublicKey& pk, const mpz_class& ct_a,
                  const mpz_class& ct_b);
// Enc(m) ^ k = Enc(k * m mod n), k >= 0
mpz_class hom_scale(const PaillierPublicKey& pk, const mpz_class& ct, const mpz_class& k);

mpz_class encode_signed(const PaillierPublicKey& pk, const mpz_class& v);
mpz_class decode_signed(const PaillierPublicKey& pk, const mpz_class& m);

// Big-endian magnitude, u32 length prefix.
Bytes mpz_to_bytes(const mpz_class& v);
mpz_class mpz_from_bytes(ByteView b);
void write_mpz(ByteWriter& w, const mpz_class& v);
mpz_class read_mpz(ByteReader& r);

// Key files: "DNPK" | u16 version | u8 kind (0 public, 1 secret) | u32 bits |
// lp(n) [| lp(lambda) | lp(mu)]
Bytes serialize_public_key(const PaillierPublicKey& pk);
Bytes serialize_keypair(const PaillierKeypair& kp);
PaillierPublicKey parse_public_key(ByteView data);
PaillierKeypair parse_keypair(ByteView data);

}  // namespace devneg::hom
