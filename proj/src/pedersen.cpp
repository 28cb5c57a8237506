#include "devneg/pedersen.hpp"

#include <stdexcept>
#include <string_view>

namespace devneg::zkp {

const PedersenGens& pedersen_gens() {
    static const PedersenGens gens = [] {
        PedersenGens g;
        g.g = group::Point::base();
        constexpr std::string_view tag = "devneg.pedersen.h.v1";
        auto wide = sha512(ByteView{reinterpret_cast<const uint8_t*>(tag.data()), tag.size()});
        g.h = group::Point::from_hash64(wide.data());
        return g;
    }();
    return gens;
}

Commitment commit(Money value, const group::Scalar& blinding) {
    if (value < 0 || uint64_t(value) >= kValueBound)
        throw std::invalid_argument("commit: value outside [0, 2^32)");
    const auto& gens = pedersen_gens();
    group::Point p = group::Point::base_mul(group::Scalar::from_u64(uint64_t(value))) +
                     gens.h.mul(blinding);
    return {p};
}

group::Scalar random_blinding(Rng& rng) { return group::Scalar::random(rng); }

bool verify_opening(const Commitment& c, Money value, const group::Scalar& blinding) {
    if (value < 0 || uint64_t(value) >= kValueBound) return false;
    return commit(value, blinding).point == c.point;
}

BoundCommitments commit_bounds(Money p_min, Money p_max, uint64_t rng_seed) {
    if (p_min < 0 || p_min > p_max) throw std::invalid_argument("bounds out of order");
    if (uint64_t(p_max) >= kValueBound)
        throw std::invalid_argument("bound exceeds 2^32-1 minor units");
    Rng rng(rng_seed);
    BoundCommitments b;
    b.open_min = {p_min, random_blinding(rng)};
    b.open_max = {p_max, random_blinding(rng)};
    b.cmin = commit(p_min, b.open_min.blinding);
    b.cmax = commit(p_max, b.open_max.blinding);
    return b;
}

}  // namespace devneg::zkp
