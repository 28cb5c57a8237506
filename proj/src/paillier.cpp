#include "devneg/paillier.hpp"

#include <stdexcept>

namespace devneg::hom {

namespace {
constexpr char kMagic[4] = {'D', 'N', 'P', 'K'};
constexpr uint16_t kVersion = 1;
}  // namespace

PaillierRng::PaillierRng(uint64_t seed) : state_(gmp_randinit_mt) {
    state_.seed(static_cast<unsigned long>(seed));
}

mpz_class PaillierRng::below(const mpz_class& bound) {
    return state_.get_z_range(bound);
}

PaillierKeypair paillier_keygen(uint32_t bits, uint64_t seed) {
    if (bits < 128 || bits % 2 != 0)
        throw std::invalid_argument("paillier key length must be even and >= 128");
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(static_cast<unsigned long>(seed));
    const uint32_t half = bits / 2;

    auto draw_prime = [&]() {
        mpz_class c = rng.get_z_bits(half);
        mpz_setbit(c.get_mpz_t(), half - 1);  // keep the full length
        mpz_class p;
        mpz_nextprime(p.get_mpz_t(), c.get_mpz_t());
        return p;
    };

    for (;;) {
        mpz_class p = draw_prime();
        mpz_class q = draw_prime();
        if (p == q) continue;
        mpz_class n = p * q;
        mpz_class pm1 = p - 1, qm1 = q - 1;
        mpz_class lambda;
        mpz_lcm(lambda.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), lambda.get_mpz_t(), n.get_mpz_t());
        if (g != 1) continue;
        PaillierKeypair kp;
        kp.pk.n = n;
        kp.pk.n_squared = n * n;
        kp.pk.bits = bits;
        kp.lambda = lambda;
        mpz_class mu;
        if (mpz_invert(mu.get_mpz_t(), lambda.get_mpz_t(), n.get_mpz_t()) == 0) continue;
        kp.mu = mu;
        return kp;
    }
}

mpz_class paillier_encrypt(const PaillierPublicKey& pk, const mpz_class& m,
                           PaillierRng& rng) {
    if (m < 0 || m >= pk.n) throw std::invalid_argument("plaintext out of range");
    mpz_class r;
    do {
        r = rng.below(pk.n);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t());
        if (r > 0 && g == 1) break;
    } while (true);
    // (1 + n)^m = 1 + m*n (mod n^2)
    mpz_class gm = (1 + m * pk.n) % pk.n_squared;
    mpz_class rn;
    mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t(), pk.n_squared.get_mpz_t());
    return (gm * rn) % pk.n_squared;
}

mpz_class paillier_decrypt(const PaillierKeypair& kp, const mpz_class& ct) {
    if (ct <= 0 || ct >= kp.pk.n_squared) throw std::invalid_argument("ciphertext out of range");
    mpz_class u;
    mpz_powm(u.get_mpz_t(), ct.get_mpz_t(), kp.lambda.get_mpz_t(),
             kp.pk.n_squared.get_mpz_t());
    mpz_class l = (u - 1) / kp.pk.n;
    return (l * kp.mu) % kp.pk.n;
}

mpz_class hom_add(const PaillierPublicKey& pk, const mpz_class& ct_a,
                  const mpz_class& ct_b) {
    return (ct_a * ct_b) % pk.n_squared;
}

mpz_class hom_scale(const PaillierPublicKey& pk, const mpz_class& ct, const mpz_class& k) {
    if (k < 0) throw std::invalid_argument("hom_scale: negative factor");
    mpz_class out;
    mpz_powm(out.get_mpz_t(), ct.get_mpz_t(), k.get_mpz_t(), pk.n_squared.get_mpz_t());
    return out;
}

mpz_class encode_signed(const PaillierPublicKey& pk, const mpz_class& v) {
    mpz_class m = v % pk.n;
    if (m < 0) m += pk.n;
    return m;
}

mpz_class decode_signed(const PaillierPublicKey& pk, const mpz_class& m) {
    return (m > pk.n / 2) ? mpz_class(m - pk.n) : m;
}

Bytes mpz_to_bytes(const mpz_class& v) {
    if (v < 0) throw std::invalid_argument("mpz_to_bytes: negative");
    size_t count = 0;
    Bytes out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
    if (v == 0) return {};
    mpz_export(out.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    out.resize(count);
    return out;
}

mpz_class mpz_from_bytes(ByteView b) {
    mpz_class v;
    if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return v;
}

void write_mpz(ByteWriter& w, const mpz_class& v) { w.lp(mpz_to_bytes(v)); }

mpz_class read_mpz(ByteReader& r) { return mpz_from_bytes(r.lp()); }

Bytes serialize_public_key(const PaillierPublicKey& pk) {
    ByteWriter w;
    w.raw(kMagic, 4);
    w.u16be(kVersion);
    w.u8(0);
    w.u32be(pk.bits);
    write_mpz(w, pk.n);
    return w.take();
}

Bytes serialize_keypair(const PaillierKeypair& kp) {
    ByteWriter w;
    w.raw(kMagic, 4);
    w.u16be(kVersion);
    w.u8(1);
    w.u32be(kp.pk.bits);
    write_mpz(w, kp.pk.n);
    write_mpz(w, kp.lambda);
    write_mpz(w, kp.mu);
    return w.take();
}

namespace {
uint8_t parse_key_header(ByteReader& r, uint32_t& bits) {
    ByteView magic = r.raw(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw DecodeError("bad key magic");
    if (r.u16be() != kVersion) throw DecodeError("unsupported key version");
    uint8_t kind = r.u8();
    bits = r.u32be();
    return kind;
}
}  // namespace

PaillierPublicKey parse_public_key(ByteView data) {
    ByteReader r(data);
    uint32_t bits = 0;
    if (parse_key_header(r, bits) != 0) throw DecodeError("not a public key");
    PaillierPublicKey pk;
    pk.bits = bits;
    pk.n = read_mpz(r);
    pk.n_squared = pk.n * pk.n;
    r.expect_done();
    return pk;
}

PaillierKeypair parse_keypair(ByteView data) {
    ByteReader r(data);
    uint32_t bits = 0;
    if (parse_key_header(r, bits) != 1) throw DecodeError("not a secret key");
    PaillierKeypair kp;
    kp.pk.bits = bits;
    kp.pk.n = read_mpz(r);
    kp.pk.n_squared = kp.pk.n * kp.pk.n;
    kp.lambda = read_mpz(r);
    kp.mu = read_mpz(r);
    r.expect_done();
    return kp;
}

}  // namespace devneg::hom
