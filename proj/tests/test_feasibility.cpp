#include <doctest.h>

#include "devneg/feasibility.hpp"
#include "devneg/rng.hpp"

using namespace devneg;
using namespace devneg::hom;

namespace {
const PaillierKeypair& test_key() {
    static const PaillierKeypair kp = paillier_keygen(512, 0xfeedbeef);
    return kp;
}
}  // namespace

TEST_SUITE_BEGIN("feasibility");

TEST_CASE("encrypt/decrypt identity and randomization") {
    const auto& kp = test_key();
    PaillierRng rng(1);
    auto ct0 = paillier_encrypt(kp.pk, 0, rng);
    CHECK(paillier_decrypt(kp, ct0) == 0);

    auto ct_a = paillier_encrypt(kp.pk, 12345, rng);
    auto ct_b = paillier_encrypt(kp.pk, 12345, rng);
    CHECK(ct_a != ct_b);  // randomized
    CHECK(paillier_decrypt(kp, ct_a) == 12345);
    CHECK(paillier_decrypt(kp, ct_b) == 12345);

    CHECK_THROWS_AS(paillier_encrypt(kp.pk, kp.pk.n, rng), std::invalid_argument);
    CHECK_THROWS_AS(paillier_encrypt(kp.pk, mpz_class(-1), rng), std::invalid_argument);
}

TEST_CASE("additive homomorphism and scaling") {
    const auto& kp = test_key();
    PaillierRng rng(2);
    auto sum = hom_add(kp.pk, paillier_encrypt(kp.pk, 3, rng),
                       paillier_encrypt(kp.pk, 4, rng));
    CHECK(paillier_decrypt(kp, sum) == 7);

    CHECK(paillier_decrypt(kp, hom_scale(kp.pk, paillier_encrypt(kp.pk, 5, rng), 3)) == 15);

    // Scalar multiplication against plaintext arithmetic, 100 random cases.
    Rng r(3);
    for (int i = 0; i < 100; ++i) {
        uint64_t m = r.below(1ULL << 32);
        uint64_t k = r.below(1ULL << 20);
        auto ct = paillier_encrypt(kp.pk, mpz_class(m), rng);
        auto scaled = hom_scale(kp.pk, ct, mpz_class(k));
        CHECK(paillier_decrypt(kp, scaled) == mpz_class(m) * k);
    }
}

TEST_CASE("signed encoding round trip") {
    const auto& kp = test_key();
    for (int64_t v : {int64_t(0), int64_t(1), int64_t(-1), int64_t(1) << 40,
                      -(int64_t(1) << 40)}) {
        CHECK(decode_signed(kp.pk, encode_signed(kp.pk, mpz_class(v))) == v);
    }
}

TEST_CASE("overlap check matches the plaintext predicate") {
    const auto& kp = test_key();
    CHECK(run_overlap_check(kp, 10000, 8000, 1).result.feasible);
    CHECK_FALSE(run_overlap_check(kp, 7900, 8000, 2).result.feasible);
    CHECK(run_overlap_check(kp, 8000, 8000, 3).result.feasible);  // d = 0 is >=

    // Small exhaustive grid; the full [0,50]^2 grid runs in acceptance.
    for (Money bm = 0; bm <= 12; ++bm)
        for (Money sm = 0; sm <= 12; ++sm) {
            auto t = run_overlap_check(kp, bm, sm, uint64_t(bm * 100 + sm));
            CHECK(t.result.feasible == (bm >= sm));
        }
}

TEST_CASE("fresh-key entry point") {
    auto r = overlap_check(10000, 8000, 512, 99);
    CHECK(r.feasible);
    CHECK_FALSE(overlap_check(7900, 8000, 512, 99).feasible);
}

TEST_CASE("blinding preserves sign exhaustively") {
    // sign(r*d + r') = sign(d) for every d != 0, with d = 0 mapping to a
    // non-negative value; r >= 1, 0 <= r' < r.
    Rng rng(11);
    for (int64_t d = -1000; d <= 1000; ++d) {
        int64_t r = int64_t(rng.below(1ULL << 31)) + 1;
        int64_t rp = int64_t(rng.below(uint64_t(r)));
        __int128 blinded = __int128(r) * d + rp;
        if (d > 0) CHECK(blinded > 0);
        if (d < 0) CHECK(blinded < 0);
        if (d == 0) CHECK(blinded >= 0);
    }
}

TEST_CASE("blinded view varies across seeds while the bit is stable") {
    const auto& kp = test_key();
    mpz_class first;
    for (uint64_t seed = 0; seed < 8; ++seed) {
        auto t = run_overlap_check(kp, 9000, 7000, seed);
        CHECK(t.result.feasible);
        if (seed == 0)
            first = t.blinded_plain;
        else
            CHECK(t.blinded_plain != first);
    }
}

TEST_CASE("value and key-size validation") {
    const auto& kp = test_key();
    CHECK_THROWS_AS(run_overlap_check(kp, Money(1) << 33, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_overlap_check(kp, -1, 0, 1), std::invalid_argument);
    // 128-bit key cannot satisfy the blinding bound for 32-bit values.
    auto tiny = paillier_keygen(128, 5);
    CHECK_THROWS_AS(run_overlap_check(tiny, 10, 5, 1), std::invalid_argument);
}

TEST_CASE("key serialization round trips") {
    const auto& kp = test_key();
    auto pub = parse_public_key(serialize_public_key(kp.pk));
    CHECK(pub.n == kp.pk.n);
    CHECK(pub.bits == kp.pk.bits);
    auto full = parse_keypair(serialize_keypair(kp));
    CHECK(full.lambda == kp.lambda);
    CHECK(full.mu == kp.mu);
    PaillierRng rng(9);
    auto ct = paillier_encrypt(pub, 42, rng);
    CHECK(paillier_decrypt(full, ct) == 42);
}

TEST_CASE("transcript hash binds the exchanged payloads") {
    const auto& kp = test_key();
    auto t1 = run_overlap_check(kp, 10000, 8000, 1);
    auto t2 = run_overlap_check(kp, 10000, 8000, 2);
    CHECK(t1.result.transcript_hash != t2.result.transcript_hash);
    auto t1_again = run_overlap_check(kp, 10000, 8000, 1);
    CHECK(t1.result.transcript_hash == t1_again.result.transcript_hash);
}

TEST_SUITE_END();
