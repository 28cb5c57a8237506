#pragma once

// Counterparty behavior predictor. The teacher is a scripted scoring table
// (softmax over hand-designed logits) acting as the ground-truth oracle; the
// student is a single-hidden-layer network trained against it with the
// soft-target distillation loss
//     L = alpha * CE(y, y_hat) + (1 - alpha) * T^2 * KL(p_T^T || p_S^T)
// (the T^2 factor keeps gradient magnitudes comparable across temperatures).
// Rollouts sample counterparty action trajectories for planning and the
// safety gate.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "devneg/bytes.hpp"
#include "devneg/money.hpp"
#include "devneg/rng.hpp"

namespace devneg::wm {

enum class Domain : uint8_t { insurance = 0, b2b = 1 };
enum class Complexity : uint8_t { S = 0, M = 1, C = 2 };

inline constexpr int kFeatureDim = 8;  // 3 numeric + domain one-hot + complexity one-hot
inline constexpr int kNumActions = 5;

// Action space of the modeled counterparty. Counter moves close 5% / 15% /
// 30% of the remaining gap; hold stands firm without conceding.
enum class Action : uint8_t {
    accept = 0,
    counter_small = 1,
    counter_medium = 2,
    counter_large = 3,
    hold = 4,
};

struct NegotiationFeature {
    double round_frac = 0.0;       // elapsed rounds / max rounds, [0,1]
    double gap_frac = 0.0;         // remaining gap / initial gap, [0,1]
    double concession_rate = 0.0;  // counterparty's last concession / initial gap
    Domain domain = Domain::insurance;
    Complexity complexity = Complexity::M;
};

using FeatureVec = Eigen::Matrix<double, kFeatureDim, 1>;
using ActionDistribution = std::array<double, kNumActions>;

FeatureVec featurize(const NegotiationFeature& f);

// Deterministic scripted oracle; the seed parameter is accepted for
// interface symmetry and ignored.
ActionDistribution teacher_predict(const NegotiationFeature& f, uint64_t seed = 0);

struct KDParams {
    double alpha = 0.5;           // in [0,1]
    double kd_temperature = 2.0;  // > 0
};

// Throws on invalid params or a non-normalized teacher distribution.
double kd_loss(const Eigen::Matrix<double, kNumActions, 1>& student_logits,
               const ActionDistribution& teacher_probs, int hard_label,
               const KDParams& p);
Eigen::Matrix<double, kNumActions, 1> kd_loss_grad(
    const Eigen::Matrix<double, kNumActions, 1>& student_logits,
    const ActionDistribution& teacher_probs, int hard_label, const KDParams& p);

class StudentModel {
public:
    static constexpr int kHidden = 32;

    static StudentModel init(uint64_t seed);

    Eigen::Matrix<double, kNumActions, 1> logits(const FeatureVec& x) const;
    ActionDistribution predict(const NegotiationFeature& f) const;
    int top1(const NegotiationFeature& f) const;

    Bytes serialize() const;
    static StudentModel deserialize(ByteView data);

    bool operator==(const StudentModel& o) const;

    Eigen::MatrixXd w1;  // kHidden x kFeatureDim
    Eigen::VectorXd b1;  // kHidden
    Eigen::MatrixXd w2;  // kNumActions x kHidden
    Eigen::VectorXd b2;  // kNumActions
};

struct DistillReport {
    StudentModel model;
    double holdout_agreement = 0.0;  // top-1 match with the teacher
    double final_loss = 0.0;
    uint32_t epochs = 0;
};

// Full-batch gradient descent, fixed learning rate 0.05, deterministic
// under the seed. dataset_size >= 1000; throws on divergence (NaN loss).
DistillReport distill(size_t dataset_size, const KDParams& p, uint32_t epochs,
                      uint64_t seed);

// --- rollouts ---------------------------------------------------------------

class ActionPredictor {
public:
    virtual ~ActionPredictor() = default;
    virtual ActionDistribution predict(const NegotiationFeature& f) const = 0;
};

class TeacherPredictor final : public ActionPredictor {
public:
    ActionDistribution predict(const NegotiationFeature& f) const override {
        return teacher_predict(f);
    }
};

class StudentPredictor final : public ActionPredictor {
public:
    explicit StudentPredictor(const StudentModel* m) : model_(m) {}
    ActionDistribution predict(const NegotiationFeature& f) const override {
        return model_->predict(f);
    }

private:
    const StudentModel* model_;
};

enum class RolloutStatus : uint8_t { Agreed, Timeout };

struct RolloutOutcome {
    RolloutStatus status = RolloutStatus::Timeout;
    std::optional<Money> settle;
    uint32_t end_round = 0;
    double weight = 1.0;  // trajectory probability under the model
};

struct RolloutState {
    bool own_is_buyer = true;
    Money own_min = 0;
    Money own_max = 0;
    Money own_offer = 0;      // our standing offer
    Money counter_offer = 0;  // counterparty's standing offer
    uint32_t round = 1;
    uint32_t max_rounds = 10;
    Money initial_gap = 0;
    Domain domain = Domain::insurance;
    Complexity complexity = Complexity::M;
};

// n must be in [5, 10]; trajectory t draws from derive_seed(seed, t), so a
// longer run extends a shorter one with the same prefix.
std::vector<RolloutOutcome> rollout(const RolloutState& state,
                                    const ActionPredictor& model, uint32_t n,
                                    uint64_t seed);

}  // namespace devneg::wm
