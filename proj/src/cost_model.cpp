#include "devneg/cost_model.hpp"

#include <cmath>

namespace devneg::sim {

const char* to_string(Tier t) {
    switch (t) {
        case Tier::high: return "high";
        case Tier::mid: return "mid";
        case Tier::low: return "low";
    }
    return "?";
}

const char* task_name(sched::TaskKind k) {
    switch (k) {
        case sched::TaskKind::plan_inference: return "plan_inference";
        case sched::TaskKind::market_lookup: return "market_lookup";
        case sched::TaskKind::proof_gen: return "proof_gen";
        case sched::TaskKind::summarize: return "summarize";
        case sched::TaskKind::critic_eval: return "critic_eval";
    }
    return "?";
}

CostModel CostModel::defaults() {
    CostModel m;
    m.base_ops = {
        {"attest", {45'000, 350}},       {"feasibility", {120'000, 900}},
        {"proof_gen", {80'000, 650}},    {"proof_verify", {24'000, 200}},
        {"plan_inference", {18'000, 150}}, {"critic_eval", {6'000, 50}},
        {"send_msg", {4'000, 30}},       {"market_lookup", {160'000, 1'200}},
        {"summarize", {80'000, 600}},    {"restore", {30'000, 250}},
    };
    m.cloud_ops = {
        {"plan_inference", {12'000, 0}},
        {"market_lookup", {25'000, 0}},
        {"summarize", {15'000, 0}},
        {"relay", {8'000, 0}},
    };
    m.cloud_cost_micro = {
        {"plan_inference", 25.0},
        {"market_lookup", 10.0},
        {"summarize", 15.0},
        {"relay", 2.0},
    };
    return m;
}

OpCost CostModel::local_cost(std::string_view op, Tier t) const {
    auto it = base_ops.find(op);
    if (it == base_ops.end()) return {0, 0};
    const double s = tier_scale[int(t)];
    return {uint64_t(std::llround(double(it->second.us) * s)),
            uint64_t(std::llround(double(it->second.mj) * s))};
}

CostMeter::CostMeter(const CostModel& model, Tier tier, RoutingPolicy policy,
                     uint64_t start_ms)
    : model_(model), tier_(tier), policy_(policy), start_ms_(start_ms) {}

void CostMeter::add(std::string_view component, uint64_t us, uint64_t mj,
                    bool in_budget) {
    total_us_ += us;
    total_mj_ += mj;
    if (in_budget) budget_us_ += us;
    breakdown_[std::string(component)] += us;
}

void CostMeter::charge(std::string_view op, uint64_t) {
    if (policy_.mode == Routing::all_cloud) {
        // Centralized baseline: every protocol step is a device-cloud round
        // trip plus server compute.
        auto it = model_.cloud_ops.find("relay");
        uint64_t us = model_.cloud_rtt_us + (it != model_.cloud_ops.end() ? it->second.us : 0);
        add("transport", us, model_.cloud_radio_mj, true);
        return;
    }
    OpCost c = model_.local_cost(op, tier_);
    std::string_view component = op == "send_msg"            ? "transport"
                                 : op == "attest"            ? "attestation"
                                 : op == "feasibility"       ? "feasibility"
                                 : op == "proof_gen"         ? "proofs"
                                 : op == "proof_verify"      ? "proofs"
                                                             : "protocol";
    add(component, c.us, c.mj, true);
}

uint64_t CostMeter::now_ms() const { return start_ms_ + total_us_ / 1000; }

sched::Site CostMeter::charge_task(sched::TaskKind kind, std::string_view agent_tag) {
    const char* name = task_name(kind);
    const OpCost local = model_.local_cost(name, tier_);
    const bool is_private = kind != sched::TaskKind::market_lookup;

    sched::Site site = sched::Site::local;
    switch (policy_.mode) {
        case Routing::all_local:
            site = sched::Site::local;
            break;
        case Routing::all_cloud:
            site = sched::Site::cloud;
            break;
        case Routing::naive:
            // Privacy-blind latency threshold.
            site = double(local.us) / 1000.0 > policy_.naive_threshold_ms
                       ? sched::Site::cloud
                       : sched::Site::local;
            break;
        case Routing::smart: {
            sched::TaskProfile profile;
            profile.task_id = name;
            profile.kind = kind;
            profile.privacy = is_private ? sched::PrivacyClass::user_private
                                         : sched::PrivacyClass::public_data;
            auto cit = model_.cloud_ops.find(name);
            const uint64_t cloud_us =
                model_.cloud_rtt_us + (cit != model_.cloud_ops.end() ? cit->second.us : 0);
            profile.est_latency_ms[0] = double(local.us) / 1000.0;
            profile.est_latency_ms[1] = double(cloud_us) / 1000.0;
            profile.est_energy_j[0] = double(local.mj) / 1000.0;
            profile.est_energy_j[1] = double(model_.cloud_radio_mj) / 1000.0;
            auto mit = model_.cloud_cost_micro.find(name);
            profile.est_cost_micro[1] = mit != model_.cloud_cost_micro.end() ? mit->second : 0;
            profile.privacy_risk_bits[1] = is_private ? policy_.private_payload_entropy_bits : 0;
            site = sched::place(profile, sched::SchedulerWeights{1.0, 0.5, 0.1, 0.0});
            break;
        }
    }
    if (policy_.force_plan_cloud && kind == sched::TaskKind::plan_inference)
        site = sched::Site::cloud;

    std::string_view component = kind == sched::TaskKind::plan_inference  ? "planning"
                                 : kind == sched::TaskKind::critic_eval   ? "critic"
                                 : kind == sched::TaskKind::market_lookup ? "lookup"
                                                                          : "state";
    if (site == sched::Site::local) {
        add(component, local.us, local.mj, true);
    } else {
        auto cit = model_.cloud_ops.find(name);
        uint64_t us = model_.cloud_rtt_us + (cit != model_.cloud_ops.end() ? cit->second.us : 0);
        add(component, us, model_.cloud_radio_mj, true);
        double entropy = 0.0;
        if (is_private) {
            std::string key = std::string(agent_tag) + "/" + name;
            if (entropy_charged_.insert(key).second)
                entropy = policy_.private_payload_entropy_bits;
        }
        placements_.push_back({name, true, entropy});
    }
    return site;
}

void CostMeter::charge_migration(uint64_t raw_bytes, double compression_reduction,
                                 bool codec_enabled) {
    uint64_t us = 0, mj = 0;
    if (codec_enabled) {
        const OpCost compress = model_.local_cost("summarize", tier_);
        const OpCost restore = model_.local_cost("restore", tier_);
        const double sent = double(raw_bytes) * (1.0 - compression_reduction);
        us = compress.us + restore.us +
             uint64_t(std::llround(sent * 1e6 / double(model_.bandwidth_bytes_per_s)));
        mj = compress.mj + restore.mj + model_.cloud_radio_mj;
    } else {
        us = uint64_t(std::llround(double(raw_bytes) * 1e6 /
                                   double(model_.bandwidth_bytes_per_s)));
        mj = model_.cloud_radio_mj * 4;  // longer radio-on window
    }
    add("migration", us, mj, false);
}

}  // namespace devneg::sim
