#pragma once

// Pre-execution safety gate: score predicted outcomes on fairness, policy
// compliance and user benefit, and reject any action whose expected critic
// score is not strictly above theta_safe. Any world-model failure makes the
// verdict unsafe (fail closed). The critic is rule-based: its contract (the
// expected-score threshold) is what the rest of the system depends on.

#include <optional>
#include <string>

#include "devneg/session.hpp"
#include "devneg/world_model.hpp"

namespace devneg::critic {

struct GuardrailConfig {
    proto::Role role = proto::Role::buyer;
    Money p_min = 0;  // principal's acceptable interval
    Money p_max = 0;
};

struct CriticScore {
    double value = 0.0;  // 0 when policy violated, else mean(fairness, benefit)
    double fairness = 0.0;
    double user_benefit = 0.0;
    bool policy_ok = false;
};

// Fairness is scored over the principal's own interval (the counterparty's
// true range is unknown at gate time); user benefit is the principal's
// normalized surplus. Timeout outcomes score zero across the board.
CriticScore critic_eval(const wm::RolloutOutcome& outcome, const GuardrailConfig& g);

struct SafetyVerdict {
    bool safe = false;
    double expected_score = 0.0;
    uint32_t rollouts_used = 0;
    std::optional<std::string> rejected_reason;
};

struct ProposedAction {
    enum class Kind : uint8_t { accept = 0, offer = 1 } kind = Kind::accept;
    Money value = 0;  // settle price for accept, price for offer
};

// n must be in [5, 10]. For an accept the predicted outcome is the binding
// agreement itself, evaluated across n identical rollouts; for an offer the
// world model samples n counterparty trajectories.
SafetyVerdict gate(const ProposedAction& action, const wm::RolloutState& state,
                   const wm::ActionPredictor& model, const GuardrailConfig& g,
                   double theta_safe, uint32_t n, uint64_t seed);

// Bridges the session engine's accept hook onto the gate.
class CriticAcceptGate final : public proto::AcceptGate {
public:
    CriticAcceptGate(const wm::ActionPredictor* model, double theta_safe, uint32_t n)
        : model_(model), theta_(theta_safe), n_(n) {}

    proto::GateDecision evaluate(const proto::GateCtx& ctx) override;

private:
    const wm::ActionPredictor* model_;
    double theta_;
    uint32_t n_;
};

}  // namespace devneg::critic
