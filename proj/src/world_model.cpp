#include "devneg/world_model.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace devneg::wm {

namespace {

using Logits = Eigen::Matrix<double, kNumActions, 1>;

Logits softmax(const Logits& z) {
    Logits shifted = z.array() - z.maxCoeff();
    Logits e = shifted.array().exp();
    return e / e.sum();
}

void validate_distribution(const ActionDistribution& p) {
    double sum = 0;
    for (double v : p) {
        if (v < 0) throw std::invalid_argument("negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("teacher distribution not normalized");
}

void validate_params(const KDParams& p) {
    if (p.alpha < 0.0 || p.alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
    if (!(p.kd_temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
}

}  // namespace

FeatureVec featurize(const NegotiationFeature& f) {
    FeatureVec x;
    x << f.round_frac, f.gap_frac, f.concession_rate,
        f.domain == Domain::insurance ? 1.0 : 0.0,
        f.domain == Domain::b2b ? 1.0 : 0.0,
        f.complexity == Complexity::S ? 1.0 : 0.0,
        f.complexity == Complexity::M ? 1.0 : 0.0,
        f.complexity == Complexity::C ? 1.0 : 0.0;
    return x;
}

// Frozen teacher scoring table. Shapes that matter downstream: a closed gap
// is an almost-sure accept, a large gap at the deadline is dominated by
// hold, counter sizes grow with gap and time pressure, and domain/complexity
// only nudge.
ActionDistribution teacher_predict(const NegotiationFeature& f, uint64_t) {
    const double rf = std::clamp(f.round_frac, 0.0, 1.0);
    const double gap = std::clamp(f.gap_frac, 0.0, 1.0);
    const double conc = std::clamp(f.concession_rate, 0.0, 1.0);

    Logits z;
    // Quartic gate: accept only lights up once the gap has nearly closed
    // (z crosses 0 near gap ~ 0.12, saturates at +11 for a closed gap).
    const double closed = (1.0 - gap) * (1.0 - gap) * (1.0 - gap) * (1.0 - gap);
    z(int(Action::accept)) = 20.0 * closed - 9.0 + 1.0 * rf;
    z(int(Action::counter_small)) = 1.3 + 1.2 * (1.0 - rf) - 1.5 * gap;
    z(int(Action::counter_medium)) = 1.2 + 0.6 * gap;
    z(int(Action::counter_large)) = 0.4 + 2.2 * gap * rf + 0.8 * conc;
    z(int(Action::hold)) = -0.8 + 3.2 * gap * rf + 10.0 * std::max(0.0, rf - 0.8);

    if (f.domain == Domain::b2b) z(int(Action::accept)) += 0.15;
    if (f.complexity == Complexity::C) {
        z(int(Action::hold)) += 0.2;
        z(int(Action::accept)) -= 0.1;
    } else if (f.complexity == Complexity::S) {
        z(int(Action::accept)) += 0.1;
    }

    Logits p = softmax(z);
    ActionDistribution out;
    for (int i = 0; i < kNumActions; ++i) out[size_t(i)] = p(i);
    return out;
}

double kd_loss(const Logits& student_logits, const ActionDistribution& teacher_probs,
               int hard_label, const KDParams& p) {
    validate_params(p);
    validate_distribution(teacher_probs);
    if (hard_label < 0 || hard_label >= kNumActions)
        throw std::invalid_argument("hard label out of range");
    const double T = p.kd_temperature;

    Logits ps = softmax(student_logits);
    double ce = -std::log(std::max(ps(hard_label), 1e-300));

    Logits log_pt;
    for (int i = 0; i < kNumActions; ++i)
        log_pt(i) = std::log(std::max(teacher_probs[size_t(i)], 1e-300));
    Logits pt_t = softmax(log_pt / T);
    Logits ps_t = softmax(student_logits / T);
    double kl = 0;
    for (int i = 0; i < kNumActions; ++i)
        kl += pt_t(i) * (std::log(std::max(pt_t(i), 1e-300)) -
                         std::log(std::max(ps_t(i), 1e-300)));

    return p.alpha * ce + (1.0 - p.alpha) * T * T * kl;
}

Logits kd_loss_grad(const Logits& student_logits, const ActionDistribution& teacher_probs,
                    int hard_label, const KDParams& p) {
    validate_params(p);
    validate_distribution(teacher_probs);
    const double T = p.kd_temperature;

    Logits ps = softmax(student_logits);
    Logits grad_ce = ps;
    grad_ce(hard_label) -= 1.0;

    Logits log_pt;
    for (int i = 0; i < kNumActions; ++i)
        log_pt(i) = std::log(std::max(teacher_probs[size_t(i)], 1e-300));
    Logits pt_t = softmax(log_pt / T);
    Logits ps_t = softmax(student_logits / T);
    // d/dz [T^2 * KL] = T * (p_S^T - p_T^T)
    Logits grad_kl = T * (ps_t - pt_t);

    return p.alpha * grad_ce + (1.0 - p.alpha) * grad_kl;
}

StudentModel StudentModel::init(uint64_t seed) {
    StudentModel m;
    Rng r(seed);
    auto fill = [&r](Eigen::MatrixXd& mat) {
        for (Eigen::Index c = 0; c < mat.cols(); ++c)
            for (Eigen::Index row = 0; row < mat.rows(); ++row)
                mat(row, c) = r.uniform(-0.1, 0.1);
    };
    m.w1.resize(kHidden, kFeatureDim);
    m.b1 = Eigen::VectorXd::Zero(kHidden);
    m.w2.resize(kNumActions, kHidden);
    m.b2 = Eigen::VectorXd::Zero(kNumActions);
    fill(m.w1);
    fill(m.w2);
    return m;
}

Eigen::Matrix<double, kNumActions, 1> StudentModel::logits(const FeatureVec& x) const {
    Eigen::VectorXd h = (w1 * x + b1).array().tanh();
    return w2 * h + b2;
}

ActionDistribution StudentModel::predict(const NegotiationFeature& f) const {
    Logits p = softmax(logits(featurize(f)));
    ActionDistribution out;
    for (int i = 0; i < kNumActions; ++i) out[size_t(i)] = p(i);
    return out;
}

int StudentModel::top1(const NegotiationFeature& f) const {
    Logits z = logits(featurize(f));
    int best = 0;
    for (int i = 1; i < kNumActions; ++i)
        if (z(i) > z(best)) best = i;
    return best;
}

bool StudentModel::operator==(const StudentModel& o) const {
    return w1 == o.w1 && b1 == o.b1 && w2 == o.w2 && b2 == o.b2;
}

Bytes StudentModel::serialize() const {
    ByteWriter w;
    w.raw("DNWM", 4);
    w.u8(1);  // version
    w.u32be(kFeatureDim);
    w.u32be(kHidden);
    w.u32be(kNumActions);
    auto put = [&w](const double* p, size_t n) {
        for (size_t i = 0; i < n; ++i) {
            uint64_t bits;
            std::memcpy(&bits, &p[i], 8);
            w.u64be(bits);
        }
    };
    put(w1.data(), size_t(w1.size()));
    put(b1.data(), size_t(b1.size()));
    put(w2.data(), size_t(w2.size()));
    put(b2.data(), size_t(b2.size()));
    return w.take();
}

StudentModel StudentModel::deserialize(ByteView data) {
    ByteReader r(data);
    ByteView magic = r.raw(4);
    if (std::memcmp(magic.data(), "DNWM", 4) != 0) throw DecodeError("bad model magic");
    if (r.u8() != 1) throw DecodeError("unsupported model version");
    if (r.u32be() != kFeatureDim || r.u32be() != kHidden || r.u32be() != kNumActions)
        throw DecodeError("model shape mismatch");
    StudentModel m;
    m.w1.resize(kHidden, kFeatureDim);
    m.b1.resize(kHidden);
    m.w2.resize(kNumActions, kHidden);
    m.b2.resize(kNumActions);
    auto get = [&r](double* p, size_t n) {
        for (size_t i = 0; i < n; ++i) {
            uint64_t bits = r.u64be();
            std::memcpy(&p[i], &bits, 8);
        }
    };
    get(m.w1.data(), size_t(m.w1.size()));
    get(m.b1.data(), size_t(m.b1.size()));
    get(m.w2.data(), size_t(m.w2.size()));
    get(m.b2.data(), size_t(m.b2.size()));
    r.expect_done();
    return m;
}

namespace {

struct Dataset {
    Eigen::MatrixXd x;        // kFeatureDim x N
    Eigen::MatrixXd soft;     // kNumActions x N (teacher probs)
    std::vector<int> hard;    // argmax teacher
};

NegotiationFeature sample_feature(Rng& rng) {
    NegotiationFeature f;
    f.round_frac = rng.uniform01();
    f.gap_frac = rng.uniform01();
    f.concession_rate = rng.uniform01();
    f.domain = rng.bernoulli(0.5) ? Domain::b2b : Domain::insurance;
    uint64_t c = rng.below(3);
    f.complexity = c == 0 ? Complexity::S : (c == 1 ? Complexity::M : Complexity::C);
    return f;
}

Dataset sample_dataset(size_t n, Rng& rng) {
    Dataset d;
    d.x.resize(kFeatureDim, Eigen::Index(n));
    d.soft.resize(kNumActions, Eigen::Index(n));
    d.hard.resize(n);
    for (size_t i = 0; i < n; ++i) {
        NegotiationFeature f = sample_feature(rng);
        d.x.col(Eigen::Index(i)) = featurize(f);
        ActionDistribution t = teacher_predict(f);
        int best = 0;
        for (int a = 1; a < kNumActions; ++a)
            if (t[size_t(a)] > t[size_t(best)]) best = a;
        d.hard[i] = best;
        for (int a = 0; a < kNumActions; ++a) d.soft(a, Eigen::Index(i)) = t[size_t(a)];
    }
    return d;
}

}  // namespace

DistillReport distill(size_t dataset_size, const KDParams& p, uint32_t epochs,
                      uint64_t seed) {
    validate_params(p);
    if (dataset_size < 1000)
        throw std::invalid_argument("distill: dataset_size must be >= 1000");
    const double lr = 0.05;
    const double T = p.kd_temperature;

    Rng data_rng(derive_seed(seed, 1));
    Dataset train = sample_dataset(dataset_size, data_rng);
    Dataset holdout = sample_dataset(std::max<size_t>(500, dataset_size / 5), data_rng);
    const Eigen::Index n = train.x.cols();

    StudentModel m = StudentModel::init(derive_seed(seed, 2));
    double last_loss = 0;

    Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(kNumActions, n);
    for (Eigen::Index i = 0; i < n; ++i) onehot(train.hard[size_t(i)], i) = 1.0;

    // Tempered teacher targets are fixed across epochs.
    Eigen::MatrixXd pt_t(kNumActions, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Logits log_pt = train.soft.col(i).array().max(1e-300).log();
        pt_t.col(i) = softmax(log_pt / T);
    }

    auto col_softmax = [](Eigen::MatrixXd z) {
        for (Eigen::Index i = 0; i < z.cols(); ++i) {
            Eigen::VectorXd c = z.col(i);
            c.array() -= c.maxCoeff();
            c = c.array().exp();
            z.col(i) = c / c.sum();
        }
        return z;
    };

    // Plain gradient descent over fixed-order mini-batches (no momentum, no
    // adaptive rates); deterministic under the seed.
    const Eigen::Index batch = 64;
    for (uint32_t e = 0; e < epochs; ++e) {
        double epoch_loss = 0;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index len = std::min(batch, n - start);
            auto xb = train.x.middleCols(start, len);
            auto yb = onehot.middleCols(start, len);
            auto ptb = pt_t.middleCols(start, len);

            Eigen::MatrixXd pre1 = (m.w1 * xb).colwise() + m.b1;
            Eigen::MatrixXd h = pre1.array().tanh();
            Eigen::MatrixXd z = (m.w2 * h).colwise() + m.b2;
            Eigen::MatrixXd ps = col_softmax(z);
            Eigen::MatrixXd ps_t = col_softmax(z / T);

            double ce = 0, kl = 0;
            for (Eigen::Index i = 0; i < len; ++i) {
                ce -= std::log(std::max(ps(train.hard[size_t(start + i)], i), 1e-300));
                for (int a = 0; a < kNumActions; ++a)
                    kl += ptb(a, i) * (std::log(std::max(ptb(a, i), 1e-300)) -
                                       std::log(std::max(ps_t(a, i), 1e-300)));
            }
            epoch_loss += p.alpha * ce + (1.0 - p.alpha) * T * T * kl;

            Eigen::MatrixXd g =
                (p.alpha * (ps - yb) + (1.0 - p.alpha) * T * (ps_t - ptb)) /
                double(len);
            Eigen::MatrixXd dw2 = g * h.transpose();
            Eigen::VectorXd db2 = g.rowwise().sum();
            Eigen::MatrixXd dh = m.w2.transpose() * g;
            Eigen::MatrixXd dpre1 = dh.array() * (1.0 - h.array().square());
            Eigen::MatrixXd dw1 = dpre1 * xb.transpose();
            Eigen::VectorXd db1 = dpre1.rowwise().sum();

            m.w2 -= lr * dw2;
            m.b2 -= lr * db2;
            m.w1 -= lr * dw1;
            m.b1 -= lr * db1;
        }
        last_loss = epoch_loss / double(n);
        if (!std::isfinite(last_loss))
            throw std::runtime_error("distillation diverged: loss is not finite at epoch " +
                                     std::to_string(e));
    }

    // Held-out top-1 agreement with the teacher.
    Eigen::MatrixXd pre1 = (m.w1 * holdout.x).colwise() + m.b1;
    Eigen::MatrixXd h = pre1.array().tanh();
    Eigen::MatrixXd z = (m.w2 * h).colwise() + m.b2;
    Eigen::Index agree = 0;
    for (Eigen::Index i = 0; i < holdout.x.cols(); ++i) {
        Eigen::Index best = 0;
        z.col(i).maxCoeff(&best);
        if (int(best) == holdout.hard[size_t(i)]) ++agree;
    }

    DistillReport rep;
    rep.model = std::move(m);
    rep.holdout_agreement = double(agree) / double(holdout.x.cols());
    rep.final_loss = last_loss;
    rep.epochs = epochs;
    return rep;
}

std::vector<RolloutOutcome> rollout(const RolloutState& state,
                                    const ActionPredictor& model, uint32_t n,
                                    uint64_t seed) {
    if (n < 5 || n > 10)
        throw std::invalid_argument("rollout count must be in [5, 10]");

    std::vector<RolloutOutcome> out;
    out.reserve(n);
    // Simulated counterparties concede toward, never past, the midpoint of
    // the standing offers; without this cap a standoff against an
    // unreachable counterpart would drift into spurious predicted accepts.
    const Money mid0 = (state.own_offer + state.counter_offer) / 2;
    for (uint32_t t = 0; t < n; ++t) {
        Rng rng(derive_seed(seed, t));
        RolloutOutcome oc;
        Money own = state.own_offer;
        Money counter = state.counter_offer;
        Money last_counter_move = 0;
        const Money init_gap = std::max<Money>(1, state.initial_gap);

        for (uint32_t r = state.round; r <= state.max_rounds; ++r) {
            Money gap = std::abs(counter - own);
            if (gap == 0) {
                oc.status = RolloutStatus::Agreed;
                oc.settle = own;
                oc.end_round = r;
                break;
            }
            NegotiationFeature f;
            f.round_frac = double(r) / double(state.max_rounds);
            f.gap_frac = std::clamp(double(gap) / double(init_gap), 0.0, 1.0);
            f.concession_rate =
                std::clamp(double(last_counter_move) / double(init_gap), 0.0, 1.0);
            f.domain = state.domain;
            f.complexity = state.complexity;

            ActionDistribution dist = model.predict(f);
            double u = rng.uniform01(), acc = 0;
            int action = kNumActions - 1;
            for (int a = 0; a < kNumActions; ++a) {
                acc += dist[size_t(a)];
                if (u < acc) {
                    action = a;
                    break;
                }
            }
            oc.weight *= std::max(dist[size_t(action)], 1e-12);

            if (action == int(Action::accept)) {
                // Counterparty takes our standing offer.
                oc.status = RolloutStatus::Agreed;
                oc.settle = own;
                oc.end_round = r + (r == state.round ? 1 : 0);
                break;
            }
            double frac = action == int(Action::counter_small)   ? 0.05
                          : action == int(Action::counter_medium) ? 0.15
                          : action == int(Action::counter_large)  ? 0.30
                                                                   : 0.0;
            Money counter_move = Money(std::floor(frac * double(gap)));
            if (frac > 0) counter_move = std::max<Money>(counter_move, 1);
            counter += state.own_is_buyer ? -counter_move : counter_move;
            counter = state.own_is_buyer ? std::max(counter, mid0)
                                         : std::min(counter, mid0);
            last_counter_move = counter_move;

            // Our reference policy inside the rollout: close 15% of the gap,
            // clamped to our own range.
            Money new_gap = std::abs(counter - own);
            Money own_move = std::max<Money>(Money(std::floor(0.15 * double(new_gap))),
                                             new_gap > 0 ? 1 : 0);
            own += state.own_is_buyer ? own_move : -own_move;
            own = std::clamp(own, state.own_min, state.own_max);

            if ((state.own_is_buyer && own >= counter) ||
                (!state.own_is_buyer && own <= counter)) {
                oc.status = RolloutStatus::Agreed;
                oc.settle = counter;
                oc.end_round = r;
                break;
            }
            oc.end_round = r;
        }
        if (oc.status == RolloutStatus::Timeout) oc.end_round = state.max_rounds;
        out.push_back(oc);
    }
    return out;
}

}  // namespace devneg::wm
