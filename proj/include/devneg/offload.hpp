#pragma once

// Local-vs-cloud task placement minimizing alpha*L + beta*E + gamma*C under
// a hard privacy constraint: user-private tasks never leave the device, and
// a public task may only move to the cloud when its declared cloud risk is
// within the budget AND the cloud objective is strictly better (ties stay
// local). Tasks are independent, so the batch optimum is the per-task
// argmin; an exhaustive oracle over all 2^n assignments confirms this in
// the tests.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "devneg/money.hpp"

namespace devneg::sched {

enum class TaskKind : uint8_t {
    plan_inference = 0,
    market_lookup = 1,
    proof_gen = 2,
    summarize = 3,
    critic_eval = 4,
};

enum class PrivacyClass : uint8_t { user_private = 0, public_data = 1 };

enum class Site : uint8_t { local = 0, cloud = 1 };

struct TaskProfile {
    std::string task_id;
    TaskKind kind = TaskKind::plan_inference;
    PrivacyClass privacy = PrivacyClass::user_private;
    double est_latency_ms[2] = {0, 0};  // [local, cloud]
    double est_energy_j[2] = {0, 0};
    double est_cost_micro[2] = {0, 0};  // micro-currency units
    double privacy_risk_bits[2] = {0, 0};
};

struct SchedulerWeights {
    double alpha = 1.0;
    double beta = 0.5;
    double gamma = 0.1;
    double p_max_bits = 0.0;
};

// Throws std::invalid_argument on negative estimates, nonzero local risk,
// or all-zero weights.
void validate(const TaskProfile& t);
void validate(const SchedulerWeights& w);

double objective(const TaskProfile& t, const SchedulerWeights& w, Site site);

Site place(const TaskProfile& t, const SchedulerWeights& w);

std::vector<Site> place_batch(std::span<const TaskProfile> tasks,
                              const SchedulerWeights& w);

// EMA adaptation of the latency/energy estimates for the executed site:
// est <- (1 - eta) * est + eta * actual, eta = 0.2.
inline constexpr double kObserveEta = 0.2;
TaskProfile observe(TaskProfile t, Site executed, double actual_latency_ms,
                    double actual_energy_j);

}  // namespace devneg::sched
