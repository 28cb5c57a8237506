#include "devneg/range_proof.hpp"

#include <cstring>
#include <stdexcept>

namespace devneg::zkp {

using group::Point;
using group::Scalar;

namespace {

constexpr std::string_view kFsTag = "devneg.rangeproof.v1";

struct BitProof {
    Point b;
    uint8_t c0[16];
    uint8_t c1[16];
    Scalar z0;
    Scalar z1;
};

struct SideProof {
    BitProof bits[kRangeBits];
    Point link_a;
    Scalar link_z;
};

struct SideSecrets {
    uint32_t value = 0;
    Scalar s[kRangeBits];       // bit blindings
    Scalar w[kRangeBits];       // real-branch nonces
    Point a0[kRangeBits];       // both OR commitments, index = branch bit
    Point a1[kRangeBits];
    uint8_t c_sim[kRangeBits][16];
    Scalar z_sim[kRangeBits];
    Scalar link_w;
    Scalar link_e;  // exponent proven in the link statement
};

void xor16(const uint8_t a[16], const uint8_t b[16], uint8_t out[16]) {
    for (int i = 0; i < 16; ++i) out[i] = a[i] ^ b[i];
}

// Sum_i 2^i * B_i via Horner from the top bit down.
Point weighted_bit_sum(const Point bits[kRangeBits]) {
    Point acc = bits[kRangeBits - 1];
    for (int i = kRangeBits - 2; i >= 0; --i) {
        acc = acc + acc;
        acc = acc + bits[i];
    }
    return acc;
}

// Commit phase for one side: bit commitments, OR commitments, link nonce.
SideSecrets commit_side(uint32_t value, Rng& rng) {
    SideSecrets sec;
    sec.value = value;
    Scalar u;  // Sum 2^i s_i
    for (int i = 0; i < kRangeBits; ++i) {
        sec.s[i] = Scalar::random(rng);
        u = u + sec.s[i] * Scalar::from_u64(1ULL << i);
        sec.w[i] = Scalar::random(rng);
        rng.fill(sec.c_sim[i], 16);
        sec.z_sim[i] = Scalar::random(rng);
    }
    sec.link_w = Scalar::random(rng);
    sec.link_e = u;  // caller folds in the difference blinding
    return sec;
}

// Statement points for the two branches of bit commitment B:
// branch 0 claims B = s*H, branch 1 claims B - G = s*H.
Point branch_statement(const Point& b, int branch) {
    return branch == 0 ? b : b - pedersen_gens().g;
}

void fill_side_points(SideSecrets& sec, Point b_out[kRangeBits]) {
    const auto& gens = pedersen_gens();
    for (int i = 0; i < kRangeBits; ++i) {
        const int bit = (sec.value >> i) & 1;
        Point b = gens.h.mul(sec.s[i]);
        if (bit) b = b + gens.g;
        b_out[i] = b;
        // Real branch: a = w*H. Simulated branch: a = z*H - c*Y.
        Point a_real = gens.h.mul(sec.w[i]);
        Point y_sim = branch_statement(b, 1 - bit);
        Point a_sim = gens.h.mul(sec.z_sim[i]) -
                      y_sim.mul(Scalar::from_bytes16(sec.c_sim[i]));
        if (bit == 0) {
            sec.a0[i] = a_real;
            sec.a1[i] = a_sim;
        } else {
            sec.a0[i] = a_sim;
            sec.a1[i] = a_real;
        }
    }
}

void hash_side(Sha256& fs, const Point b[kRangeBits], const Point a0[kRangeBits],
               const Point a1[kRangeBits], const Point& link_a) {
    for (int i = 0; i < kRangeBits; ++i) fs.update(b[i].view());
    for (int i = 0; i < kRangeBits; ++i) {
        fs.update(a0[i].view());
        fs.update(a1[i].view());
    }
    fs.update(link_a.view());
}

void serialize_side(ByteWriter& w, const SideProof& side) {
    for (const auto& bp : side.bits) {
        w.raw(bp.b.view());
        w.raw(bp.c0, 16);
        w.raw(bp.c1, 16);
        w.raw(bp.z0.view());
        w.raw(bp.z1.view());
    }
    w.raw(side.link_a.view());
    w.raw(side.link_z.view());
}

bool parse_side(ByteReader& r, SideProof& side) {
    for (auto& bp : side.bits) {
        auto b = Point::from_bytes(r.raw(32));
        if (!b) return false;
        bp.b = *b;
        std::memcpy(bp.c0, r.raw(16).data(), 16);
        std::memcpy(bp.c1, r.raw(16).data(), 16);
        auto z0 = Scalar::from_canonical_bytes(r.raw(32));
        auto z1 = Scalar::from_canonical_bytes(r.raw(32));
        if (!z0 || !z1) return false;
        bp.z0 = *z0;
        bp.z1 = *z1;
    }
    auto a = Point::from_bytes(r.raw(32));
    auto z = Scalar::from_canonical_bytes(r.raw(32));
    if (!a || !z) return false;
    side.link_a = *a;
    side.link_z = *z;
    return true;
}

}  // namespace

RangeProof prove_in_range(Money offer, const BoundCommitments& bounds,
                          const Hash256& session_id, uint64_t rng_seed) {
    if (offer < bounds.open_min.value || offer > bounds.open_max.value)
        throw std::domain_error("offer outside committed range; no proof exists");
    if (offer < 0 || uint64_t(offer) >= kValueBound)
        throw std::domain_error("offer outside proof value bound");

    const auto& gens = pedersen_gens();
    Rng rng(rng_seed);

    const uint32_t v1 = uint32_t(offer - bounds.open_min.value);
    const uint32_t v2 = uint32_t(bounds.open_max.value - offer);

    SideSecrets sec1 = commit_side(v1, rng);
    SideSecrets sec2 = commit_side(v2, rng);
    // D1 = offer*G - Cmin has blinding -r_min, D2 = Cmax - offer*G has r_max.
    sec1.link_e = sec1.link_e + bounds.open_min.blinding;
    sec2.link_e = sec2.link_e - bounds.open_max.blinding;

    Point b1[kRangeBits], b2[kRangeBits];
    fill_side_points(sec1, b1);
    fill_side_points(sec2, b2);
    Point link_a1 = gens.h.mul(sec1.link_w);
    Point link_a2 = gens.h.mul(sec2.link_w);

    ByteWriter header;
    header.u8(kProofVersion);
    header.u8(uint8_t(kRangeBits));
    header.u8(kGroupRistretto255);
    header.u8(0);

    Sha256 fs;
    fs.update(kFsTag);
    fs.update(header.bytes());
    fs.update(session_id);
    ByteWriter ob;
    ob.u64be(uint64_t(offer));
    fs.update(ob.bytes());
    fs.update(bounds.cmin.point.view());
    fs.update(bounds.cmax.point.view());
    hash_side(fs, b1, sec1.a0, sec1.a1, link_a1);
    hash_side(fs, b2, sec2.a0, sec2.a1, link_a2);
    const Hash256 digest = fs.finish();
    uint8_t c16[16];
    std::memcpy(c16, digest.v.data(), 16);
    const Scalar c_full = Scalar::from_bytes16(c16);

    auto close_side = [&](SideSecrets& sec, const Point b[kRangeBits]) {
        SideProof side;
        for (int i = 0; i < kRangeBits; ++i) {
            const int bit = (sec.value >> i) & 1;
            side.bits[i].b = b[i];
            uint8_t c_real[16];
            xor16(c16, sec.c_sim[i], c_real);
            const Scalar z_real =
                sec.w[i] + Scalar::from_bytes16(c_real) * sec.s[i];
            if (bit == 0) {
                std::memcpy(side.bits[i].c0, c_real, 16);
                std::memcpy(side.bits[i].c1, sec.c_sim[i], 16);
                side.bits[i].z0 = z_real;
                side.bits[i].z1 = sec.z_sim[i];
            } else {
                std::memcpy(side.bits[i].c0, sec.c_sim[i], 16);
                std::memcpy(side.bits[i].c1, c_real, 16);
                side.bits[i].z0 = sec.z_sim[i];
                side.bits[i].z1 = z_real;
            }
        }
        side.link_z = sec.link_w + c_full * sec.link_e;
        return side;
    };

    SideProof side1 = close_side(sec1, b1);
    SideProof side2 = close_side(sec2, b2);
    side1.link_a = link_a1;
    side2.link_a = link_a2;

    ByteWriter w;
    w.raw(header.bytes());
    serialize_side(w, side1);
    serialize_side(w, side2);
    RangeProof proof{w.take()};
    if (proof.bytes.size() != kProofSize)
        throw std::logic_error("range proof serialization size mismatch");
    return proof;
}

bool verify_in_range(Money offer, const Commitment& cmin, const Commitment& cmax,
                     const RangeProof& proof, const Hash256& session_id) {
    if (proof.bytes.size() != kProofSize) return false;
    if (offer < 0 || uint64_t(offer) >= kValueBound) return false;

    const auto& gens = pedersen_gens();
    try {
        ByteReader r(proof.bytes);
        uint8_t version = r.u8(), k = r.u8(), grp = r.u8(), reserved = r.u8();
        if (version != kProofVersion || k != kRangeBits ||
            grp != kGroupRistretto255 || reserved != 0)
            return false;

        SideProof side1, side2;
        if (!parse_side(r, side1) || !parse_side(r, side2)) return false;
        r.expect_done();

        // Recompute all OR commitments from the responses.
        Point a0_1[kRangeBits], a1_1[kRangeBits], a0_2[kRangeBits], a1_2[kRangeBits];
        Point b1[kRangeBits], b2[kRangeBits];
        auto recompute = [&](const SideProof& side, Point b[kRangeBits],
                             Point a0[kRangeBits], Point a1[kRangeBits]) {
            for (int i = 0; i < kRangeBits; ++i) {
                const auto& bp = side.bits[i];
                b[i] = bp.b;
                a0[i] = gens.h.mul(bp.z0) -
                        branch_statement(bp.b, 0).mul(Scalar::from_bytes16(bp.c0));
                a1[i] = gens.h.mul(bp.z1) -
                        branch_statement(bp.b, 1).mul(Scalar::from_bytes16(bp.c1));
            }
        };
        recompute(side1, b1, a0_1, a1_1);
        recompute(side2, b2, a0_2, a1_2);

        ByteWriter header;
        header.u8(kProofVersion);
        header.u8(uint8_t(kRangeBits));
        header.u8(kGroupRistretto255);
        header.u8(0);

        Sha256 fs;
        fs.update(kFsTag);
        fs.update(header.bytes());
        fs.update(session_id);
        ByteWriter ob;
        ob.u64be(uint64_t(offer));
        fs.update(ob.bytes());
        fs.update(cmin.point.view());
        fs.update(cmax.point.view());
        hash_side(fs, b1, a0_1, a1_1, side1.link_a);
        hash_side(fs, b2, a0_2, a1_2, side2.link_a);
        const Hash256 digest = fs.finish();
        uint8_t c16[16];
        std::memcpy(c16, digest.v.data(), 16);
        const Scalar c_full = Scalar::from_bytes16(c16);

        // Every bit's challenge pair must split the global challenge.
        auto side_challenges_ok = [&](const SideProof& side) {
            for (const auto& bp : side.bits) {
                uint8_t x[16];
                xor16(bp.c0, bp.c1, x);
                if (std::memcmp(x, c16, 16) != 0) return false;
            }
            return true;
        };
        if (!side_challenges_ok(side1) || !side_challenges_ok(side2)) return false;

        // Link checks: X = Sum 2^i B_i - D must satisfy z*H == A + c*X.
        const Point offer_g = Point::base_mul(Scalar::from_u64(uint64_t(offer)));
        const Point d1 = offer_g - cmin.point;
        const Point d2 = cmax.point - offer_g;
        auto link_ok = [&](const SideProof& side, const Point b[kRangeBits],
                           const Point& d) {
            Point x = weighted_bit_sum(b) - d;
            return gens.h.mul(side.link_z) == side.link_a + x.mul(c_full);
        };
        return link_ok(side1, b1, d1) && link_ok(side2, b2, d2);
    } catch (const DecodeError&) {
        return false;
    }
}

}  // namespace devneg::zkp
