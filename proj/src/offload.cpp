#include "devneg/offload.hpp"

#include <stdexcept>

namespace devneg::sched {

void validate(const TaskProfile& t) {
    for (int s = 0; s < 2; ++s) {
        if (t.est_latency_ms[s] < 0 || t.est_energy_j[s] < 0 ||
            t.est_cost_micro[s] < 0 || t.privacy_risk_bits[s] < 0)
            throw std::invalid_argument("task estimates must be non-negative: " + t.task_id);
    }
    if (t.privacy_risk_bits[int(Site::local)] != 0)
        throw std::invalid_argument("local privacy risk must be zero: " + t.task_id);
}

void validate(const SchedulerWeights& w) {
    if (w.alpha < 0 || w.beta < 0 || w.gamma < 0 || w.p_max_bits < 0)
        throw std::invalid_argument("scheduler weights must be non-negative");
    if (w.alpha == 0 && w.beta == 0 && w.gamma == 0)
        throw std::invalid_argument("at least one scheduler weight must be positive");
}

double objective(const TaskProfile& t, const SchedulerWeights& w, Site site) {
    const int s = int(site);
    return w.alpha * t.est_latency_ms[s] + w.beta * t.est_energy_j[s] +
           w.gamma * t.est_cost_micro[s];
}

Site place(const TaskProfile& t, const SchedulerWeights& w) {
    validate(t);
    validate(w);
    if (t.privacy == PrivacyClass::user_private) return Site::local;
    if (t.privacy_risk_bits[int(Site::cloud)] > w.p_max_bits) return Site::local;
    return objective(t, w, Site::cloud) < objective(t, w, Site::local) ? Site::cloud
                                                                       : Site::local;
}

std::vector<Site> place_batch(std::span<const TaskProfile> tasks,
                              const SchedulerWeights& w) {
    std::vector<Site> out;
    out.reserve(tasks.size());
    for (const auto& t : tasks) out.push_back(place(t, w));
    return out;
}

TaskProfile observe(TaskProfile t, Site executed, double actual_latency_ms,
                    double actual_energy_j) {
    if (actual_latency_ms < 0 || actual_energy_j < 0)
        throw std::invalid_argument("observed actuals must be non-negative");
    const int s = int(executed);
    t.est_latency_ms[s] = (1.0 - kObserveEta) * t.est_latency_ms[s] +
                          kObserveEta * actual_latency_ms;
    t.est_energy_j[s] =
        (1.0 - kObserveEta) * t.est_energy_j[s] + kObserveEta * actual_energy_j;
    return t;
}

}  // namespace devneg::sched
