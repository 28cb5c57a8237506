#pragma once

// Synthetic scenario generation calibrated to the published value ranges:
// insurance premiums in [1121.00, 63770.00] (stored as cents), B2B unit
// prices from the configured range. Instances carry 1/2/3 negotiable terms
// by complexity; bargaining runs on the price term, extra terms contribute
// protocol operations to the cost model.

#include <cstdint>
#include <string>
#include <vector>

#include "devneg/money.hpp"
#include "devneg/rng.hpp"
#include "devneg/world_model.hpp"

namespace devneg::sim {

using wm::Complexity;
using wm::Domain;

struct TermRange {
    std::string name;
    Money buyer_min = 0;
    Money buyer_max = 0;
    Money seller_min = 0;
    Money seller_max = 0;
};

struct ScenarioInstance {
    Domain domain = Domain::insurance;
    Complexity complexity = Complexity::M;
    std::vector<TermRange> terms;  // terms[0] is the bargained price
    std::string buyer_strategy;
    std::string seller_strategy;
    bool buyer_dishonest = false;
    bool seller_dishonest = false;
    std::vector<uint32_t> migration_rounds;
    uint64_t seed = 0;
};

struct RangeDistribution {
    Money lo = 0;  // domain price floor, minor units
    Money hi = 0;  // domain price ceiling
};

struct StrategyMixEntry {
    std::string spec;
    double weight = 1.0;
};

struct ScenarioSpec {
    Domain domain = Domain::insurance;
    Complexity complexity = Complexity::M;
    RangeDistribution price;
    double overlap_prob = 0.92;
    double buyer_dishonest_prob = 0.05;
    double seller_dishonest_prob = 0.10;
    std::vector<StrategyMixEntry> buyer_mix;
    std::vector<StrategyMixEntry> seller_mix;
    std::vector<uint32_t> migration_rounds;
    uint32_t trials = 150;
};

// Throws std::invalid_argument on degenerate distributions (hi <= lo or an
// empty strategy mix).
ScenarioInstance generate_scenario(const ScenarioSpec& spec, uint64_t seed);

std::vector<ScenarioInstance> generate_scenarios(const ScenarioSpec& spec,
                                                 uint64_t master_seed);

const char* to_string(Domain d);
const char* to_string(Complexity c);

}  // namespace devneg::sim
