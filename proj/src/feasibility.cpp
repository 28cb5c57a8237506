#include "devneg/feasibility.hpp"

#include <stdexcept>

#include "devneg/rng.hpp"

namespace devneg::hom {

namespace {
void check_value(Money v, const char* what) {
    if (v < 0 || uint64_t(v) >= (1ULL << kFeasValueBits))
        throw std::invalid_argument(std::string(what) + " must fit in 32 bits");
}
}  // namespace

FeasTranscript run_overlap_check(const PaillierKeypair& buyer_key, Money buyer_max,
                                 Money seller_min, uint64_t rng_seed) {
    check_value(buyer_max, "buyer_max");
    check_value(seller_min, "seller_min");
    const PaillierPublicKey& pk = buyer_key.pk;

    // Blinding bound: |r*d + r'| <= r_max * (2^32 + 1) must stay strictly
    // inside (-n/2, n/2) or sign recovery breaks. The modulus additionally
    // needs 2^128 headroom over that magnitude (short moduli make the
    // blinded residues cluster near the wrap point and are factorable at
    // desk). Checked before any message is sent.
    const mpz_class r_max = mpz_class(1) << 31;
    const mpz_class d_max = (mpz_class(1) << kFeasValueBits) + 1;
    if ((2 * r_max * d_max) << 128 >= pk.n)
        throw std::invalid_argument("values too large for chosen key length");

    PaillierRng rng(rng_seed);
    FeasTranscript t;

    // Buyer commits Enc(buyer_max) alongside the public key.
    mpz_class ct_b = paillier_encrypt(pk, mpz_class(uint64_t(buyer_max)), rng);
    {
        ByteWriter w;
        w.raw(serialize_public_key(pk));
        write_mpz(w, ct_b);
        t.commit_payload = w.take();
    }

    // Seller: Enc(d) = Enc(buyer_max) (+) Enc(-seller_min), then blind.
    mpz_class ct_neg = paillier_encrypt(
        pk, encode_signed(pk, mpz_class(-int64_t(seller_min))), rng);
    mpz_class ct_d = hom_add(pk, ct_b, ct_neg);
    mpz_class r = rng.below(r_max) + 1;      // [1, 2^31]
    mpz_class r_prime = rng.below(r);        // [0, r)
    mpz_class ct_blinded =
        hom_add(pk, hom_scale(pk, ct_d, r), paillier_encrypt(pk, r_prime, rng));
    {
        ByteWriter w;
        write_mpz(w, ct_blinded);
        t.blind_payload = w.take();
    }

    // Buyer decrypts the blinded difference and reports only its sign.
    t.blinded_plain = decode_signed(pk, paillier_decrypt(buyer_key, ct_blinded));
    t.result.feasible = t.blinded_plain >= 0;
    t.result_payload = {uint8_t(t.result.feasible ? 1 : 0)};

    Sha256 h;
    h.update(std::string_view{"devneg.feas.v1"});
    ByteWriter w;
    w.lp(t.commit_payload);
    w.lp(t.blind_payload);
    w.lp(t.result_payload);
    h.update(w.bytes());
    t.result.transcript_hash = h.finish();
    return t;
}

FeasResult overlap_check(Money buyer_max, Money seller_min, uint32_t key_bits,
                         uint64_t rng_seed) {
    PaillierKeypair kp = paillier_keygen(key_bits, derive_seed(rng_seed, 0));
    return run_overlap_check(kp, buyer_max, seller_min, derive_seed(rng_seed, 1))
        .result;
}

}  // namespace devneg::hom
