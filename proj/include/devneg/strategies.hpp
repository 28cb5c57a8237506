#pragma once

// Concession schedules. A strategy proposes the next price from its own
// pretend range (the engine clamps to the committed range whenever proofs
// are required, and always keeps offers monotone and never past the
// counterparty's standing offer). The three shipped schedules produce the
// fast/medium/slow round regimes the harness needs.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "devneg/money.hpp"

namespace devneg::proto {

enum class Role : uint8_t { buyer = 0, seller = 1 };

struct StrategyCtx {
    Role role = Role::buyer;
    // Range the strategy bargains over; equals the true constraint for
    // honest agents, a shifted range for dishonest ones.
    Money anchor_lo = 0;
    Money anchor_hi = 0;
    uint32_t round = 1;  // 1-based
    uint32_t max_rounds = 10;
    std::optional<Money> own_last;
    std::optional<Money> counter_last;
};

class Strategy {
public:
    virtual ~Strategy() = default;
    virtual Money propose(const StrategyCtx& ctx) const = 0;
    virtual std::string name() const = 0;
};

// Fixed absolute step per round from the agent's own opening extreme.
class LinearStrategy final : public Strategy {
public:
    explicit LinearStrategy(Money step) : step_(step) {}
    Money propose(const StrategyCtx& ctx) const override;
    std::string name() const override { return "linear:" + std::to_string(step_); }

private:
    Money step_;
};

// Closes a fixed fraction of the current offer gap each round.
class FractionOfGapStrategy final : public Strategy {
public:
    explicit FractionOfGapStrategy(double fraction = 0.25) : fraction_(fraction) {}
    Money propose(const StrategyCtx& ctx) const override;
    std::string name() const override;

private:
    double fraction_;
};

// Time-dependent: concedes (round/max)^e of the own range, so almost
// nothing early and everything near the deadline.
class BoulwareStrategy final : public Strategy {
public:
    explicit BoulwareStrategy(double exponent = 3.0) : exponent_(exponent) {}
    Money propose(const StrategyCtx& ctx) const override;
    std::string name() const override;

private:
    double exponent_;
};

// Registry of shipped strategies by name ("linear:<step>", "gap:<frac>",
// "boulware:<exp>").
std::unique_ptr<Strategy> make_strategy(const std::string& spec);

}  // namespace devneg::proto
