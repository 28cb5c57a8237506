#pragma once

// Simulated-cost bookkeeping for the harness. Latency and energy are cost
// model outputs (integer microseconds / millijoules), not wall-clock
// measurements: per-op device-tier tables seeded from the published
// component timings on the high tier (proof 80 ms, attestation 45 ms,
// feasibility 120 ms), uniform tier scale factors, and a cloud table of
// round-trip plus compute. The meter is also the task router: protocol ops
// always run locally, schedulable tasks (planning, lookups, summarization,
// critic) go through the offload policy, and every placement is recorded
// for the leakage account (declared private entropy charged once per agent
// and task kind).

#include <map>
#include <set>
#include <string>

#include "devneg/offload.hpp"
#include "devneg/session.hpp"

namespace devneg::sim {

enum class Tier : uint8_t { high = 0, mid = 1, low = 2 };
const char* to_string(Tier t);

struct OpCost {
    uint64_t us = 0;
    uint64_t mj = 0;
};

struct CostModel {
    // High-tier per-op costs; mid/low apply the scale factors.
    std::map<std::string, OpCost, std::less<>> base_ops;
    double tier_scale[3] = {1.0, 1.8, 3.2};
    double tau_importance[3] = {0.35, 0.50, 0.65};

    uint64_t cloud_rtt_us = 220'000;
    std::map<std::string, OpCost, std::less<>> cloud_ops;  // compute on the far side
    std::map<std::string, double, std::less<>> cloud_cost_micro;
    uint64_t cloud_radio_mj = 80;

    uint64_t bandwidth_bytes_per_s = 2'000'000;

    static CostModel defaults();
    OpCost local_cost(std::string_view op, Tier t) const;
};

enum class Routing : uint8_t {
    smart = 0,      // offload-scheduler decides
    naive = 1,      // privacy-blind latency threshold
    all_cloud = 2,  // cloud-only baseline
    all_local = 3,  // device-only baseline
};

struct RoutingPolicy {
    Routing mode = Routing::smart;
    double naive_threshold_ms = 40.0;
    // Declared entropy of constraint-derived private payloads, charged once
    // per (agent, task kind) when such a payload reaches the cloud.
    double private_payload_entropy_bits = 88.0;
    bool force_plan_cloud = false;  // world-model ablation: cloud planning
};

class CostMeter final : public proto::OpMeter {
public:
    CostMeter(const CostModel& model, Tier tier, RoutingPolicy policy,
              uint64_t start_ms = 0);

    // Protocol ops from the session engine; always local compute.
    void charge(std::string_view op, uint64_t bytes = 0) override;
    uint64_t now_ms() const override;

    // Schedulable tasks; returns the chosen site and records the placement.
    sched::Site charge_task(sched::TaskKind kind, std::string_view agent_tag);

    // State migration: compress + transmit + restore when the codec is on,
    // raw transmission otherwise. Counted in the migration component, which
    // is excluded from the interactive-latency budget.
    void charge_migration(uint64_t raw_bytes, double compression_reduction,
                          bool codec_enabled);

    uint64_t total_us() const { return total_us_; }
    uint64_t budget_us() const { return budget_us_; }  // total minus migration
    uint64_t total_mj() const { return total_mj_; }
    const std::map<std::string, uint64_t>& breakdown_us() const { return breakdown_; }
    const std::vector<proto::Placement>& placements() const { return placements_; }

private:
    void add(std::string_view component, uint64_t us, uint64_t mj, bool in_budget);

    const CostModel& model_;
    Tier tier_;
    RoutingPolicy policy_;
    uint64_t start_ms_;
    uint64_t total_us_ = 0;
    uint64_t budget_us_ = 0;
    uint64_t total_mj_ = 0;
    std::map<std::string, uint64_t> breakdown_;
    std::vector<proto::Placement> placements_;
    std::set<std::string> entropy_charged_;
};

const char* task_name(sched::TaskKind k);

}  // namespace devneg::sim
