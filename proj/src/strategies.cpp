#include "devneg/strategies.hpp"

#include <cmath>
#include <stdexcept>

namespace devneg::proto {

namespace {
Money opening(const StrategyCtx& ctx) {
    return ctx.role == Role::buyer ? ctx.anchor_lo : ctx.anchor_hi;
}
}  // namespace

Money LinearStrategy::propose(const StrategyCtx& ctx) const {
    if (!ctx.own_last) return opening(ctx);
    return ctx.role == Role::buyer ? *ctx.own_last + step_ : *ctx.own_last - step_;
}

Money FractionOfGapStrategy::propose(const StrategyCtx& ctx) const {
    if (!ctx.own_last || !ctx.counter_last) return opening(ctx);
    Money gap = ctx.role == Role::buyer ? *ctx.counter_last - *ctx.own_last
                                        : *ctx.own_last - *ctx.counter_last;
    if (gap <= 0) return *ctx.own_last;
    Money step = std::max<Money>(1, Money(std::floor(fraction_ * double(gap))));
    return ctx.role == Role::buyer ? *ctx.own_last + step : *ctx.own_last - step;
}

std::string FractionOfGapStrategy::name() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "gap:%.2f", fraction_);
    return buf;
}

Money BoulwareStrategy::propose(const StrategyCtx& ctx) const {
    double t = double(ctx.round - 1) / double(ctx.max_rounds - 1);
    double frac = std::pow(t, exponent_);
    Money width = ctx.anchor_hi - ctx.anchor_lo;
    Money moved = Money(std::floor(frac * double(width)));
    return ctx.role == Role::buyer ? ctx.anchor_lo + moved : ctx.anchor_hi - moved;
}

std::string BoulwareStrategy::name() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "boulware:%.1f", exponent_);
    return buf;
}

std::unique_ptr<Strategy> make_strategy(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "linear") return std::make_unique<LinearStrategy>(arg.empty() ? 1000 : std::stoll(arg));
    if (kind == "gap")
        return std::make_unique<FractionOfGapStrategy>(arg.empty() ? 0.25 : std::stod(arg));
    if (kind == "boulware")
        return std::make_unique<BoulwareStrategy>(arg.empty() ? 3.0 : std::stod(arg));
    throw std::invalid_argument("unknown strategy spec: " + spec);
}

}  // namespace devneg::proto
