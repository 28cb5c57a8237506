#include "devneg/scenario.hpp"

#include <algorithm>
#include <stdexcept>

namespace devneg::sim {

const char* to_string(Domain d) { return d == Domain::insurance ? "insurance" : "b2b"; }

const char* to_string(Complexity c) {
    switch (c) {
        case Complexity::S: return "S";
        case Complexity::M: return "M";
        case Complexity::C: return "C";
    }
    return "?";
}

namespace {

std::string pick_mix(const std::vector<StrategyMixEntry>& mix, Rng& rng) {
    double total = 0;
    for (const auto& e : mix) total += e.weight;
    double u = rng.uniform01() * total;
    for (const auto& e : mix) {
        u -= e.weight;
        if (u < 0) return e.spec;
    }
    return mix.back().spec;
}

TermRange draw_term(const std::string& name, const RangeDistribution& price,
                    bool feasible, Rng& rng) {
    const double lo = double(price.lo), hi = double(price.hi);
    const double mid = rng.uniform(lo * 1.6, hi * 0.6);

    TermRange t;
    t.name = name;
    auto clamp_price = [&](double v) {
        return Money(std::clamp(v, lo, hi));
    };
    if (feasible) {
        // Build the instance around an explicit agreement zone.
        const double zopa = mid * rng.uniform(0.05, 0.20);
        t.seller_min = clamp_price(mid - zopa / 2);
        t.buyer_max = clamp_price(mid + zopa / 2);
        t.buyer_min = clamp_price(double(t.seller_min) - mid * rng.uniform(0.10, 0.40));
        t.seller_max = clamp_price(double(t.buyer_max) + mid * rng.uniform(0.10, 0.40));
    } else {
        const double gap = mid * rng.uniform(0.02, 0.15);
        t.buyer_max = clamp_price(mid - gap / 2);
        t.seller_min = clamp_price(mid + gap / 2);
        t.buyer_min = clamp_price(double(t.buyer_max) - mid * rng.uniform(0.10, 0.40));
        t.seller_max = clamp_price(double(t.seller_min) + mid * rng.uniform(0.10, 0.40));
        if (t.buyer_max >= t.seller_min) t.seller_min = t.buyer_max + 1;  // clamp collision
    }
    return t;
}

}  // namespace

ScenarioInstance generate_scenario(const ScenarioSpec& spec, uint64_t seed) {
    if (spec.price.hi <= spec.price.lo)
        throw std::invalid_argument("degenerate price distribution");
    if (spec.buyer_mix.empty() || spec.seller_mix.empty())
        throw std::invalid_argument("empty strategy mix");

    Rng rng(seed);
    ScenarioInstance inst;
    inst.domain = spec.domain;
    inst.complexity = spec.complexity;
    inst.seed = seed;

    const bool feasible = rng.bernoulli(spec.overlap_prob);
    const int n_terms = spec.complexity == Complexity::S   ? 1
                        : spec.complexity == Complexity::M ? 2
                                                           : 3;
    static const char* kTermNames[] = {"price", "volume", "warranty"};
    for (int i = 0; i < n_terms; ++i)
        inst.terms.push_back(draw_term(kTermNames[i], spec.price,
                                       i == 0 ? feasible : rng.bernoulli(0.9), rng));

    inst.buyer_strategy = pick_mix(spec.buyer_mix, rng);
    inst.seller_strategy = pick_mix(spec.seller_mix, rng);
    inst.buyer_dishonest = rng.bernoulli(spec.buyer_dishonest_prob);
    inst.seller_dishonest = rng.bernoulli(spec.seller_dishonest_prob);
    inst.migration_rounds = spec.migration_rounds;
    return inst;
}

std::vector<ScenarioInstance> generate_scenarios(const ScenarioSpec& spec,
                                                 uint64_t master_seed) {
    std::vector<ScenarioInstance> out;
    out.reserve(spec.trials);
    for (uint32_t i = 0; i < spec.trials; ++i)
        out.push_back(generate_scenario(spec, derive_seed(master_seed, i)));
    return out;
}

}  // namespace devneg::sim
