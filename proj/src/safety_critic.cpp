#include "devneg/safety_critic.hpp"

#include <stdexcept>

namespace devneg::critic {

CriticScore critic_eval(const wm::RolloutOutcome& outcome, const GuardrailConfig& g) {
    CriticScore s;
    if (outcome.status != wm::RolloutStatus::Agreed || !outcome.settle) {
        s.policy_ok = true;  // no deal violates nothing, it just helps nobody
        return s;
    }
    const Money price = *outcome.settle;
    s.policy_ok = price >= g.p_min && price <= g.p_max;
    if (!s.policy_ok) return s;  // value stays 0

    s.fairness = proto::fairness_score(price, g.p_min, g.p_max);
    const double width = double(g.p_max - g.p_min);
    if (width == 0) {
        s.user_benefit = 1.0;
    } else if (g.role == proto::Role::buyer) {
        s.user_benefit = double(g.p_max - price) / width;
    } else {
        s.user_benefit = double(price - g.p_min) / width;
    }
    s.value = 0.5 * (s.fairness + s.user_benefit);
    return s;
}

SafetyVerdict gate(const ProposedAction& action, const wm::RolloutState& state,
                   const wm::ActionPredictor& model, const GuardrailConfig& g,
                   double theta_safe, uint32_t n, uint64_t seed) {
    SafetyVerdict v;
    if (n < 5 || n > 10) throw std::invalid_argument("gate rollouts must be in [5, 10]");
    try {
        double sum = 0;
        if (action.kind == ProposedAction::Kind::accept) {
            wm::RolloutOutcome oc;
            oc.status = wm::RolloutStatus::Agreed;
            oc.settle = action.value;
            oc.end_round = state.round;
            for (uint32_t i = 0; i < n; ++i) sum += critic_eval(oc, g).value;
        } else {
            wm::RolloutState next = state;
            next.own_offer = action.value;
            auto outcomes = wm::rollout(next, model, n, seed);
            for (const auto& oc : outcomes) sum += critic_eval(oc, g).value;
        }
        v.expected_score = sum / double(n);
        v.rollouts_used = n;
        v.safe = v.expected_score > theta_safe;  // strict inequality
        if (!v.safe) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "expected critic score %.3f <= theta %.3f",
                          v.expected_score, theta_safe);
            v.rejected_reason = buf;
        }
    } catch (const std::exception& e) {
        v.safe = false;
        v.expected_score = 0.0;
        v.rollouts_used = 0;
        v.rejected_reason = std::string("world model failure: ") + e.what();
    }
    return v;
}

proto::GateDecision CriticAcceptGate::evaluate(const proto::GateCtx& ctx) {
    GuardrailConfig g{ctx.role, ctx.p_min, ctx.p_max};
    wm::RolloutState st;
    st.own_is_buyer = ctx.role == proto::Role::buyer;
    st.own_min = ctx.p_min;
    st.own_max = ctx.p_max;
    st.round = ctx.round;
    st.max_rounds = ctx.max_rounds;
    ProposedAction a{ProposedAction::Kind::accept, ctx.proposed_settle};
    SafetyVerdict v = gate(a, st, *model_, g, theta_, n_, ctx.seed);
    proto::GateDecision d;
    d.safe = v.safe;
    d.expected_score = v.expected_score;
    d.rollouts_used = v.rollouts_used;
    d.reason = v.rejected_reason.value_or("");
    return d;
}

}  // namespace devneg::critic
