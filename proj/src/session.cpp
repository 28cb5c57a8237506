#include "devneg/session.hpp"

#include <algorithm>
#include <cstring>

#include "devneg/feasibility.hpp"
#include "devneg/range_proof.hpp"
#include "devneg/rng.hpp"

namespace devneg::proto {

namespace {

class TickMeter final : public OpMeter {
public:
    explicit TickMeter(uint64_t start_ms) : now_ms_(start_ms) {}
    void charge(std::string_view, uint64_t) override { ++now_ms_; }
    uint64_t now_ms() const override { return now_ms_; }

private:
    uint64_t now_ms_;
};

Hash256 to_hash(ByteView b) {
    Hash256 h;
    if (b.size() == 32) std::memcpy(h.v.data(), b.data(), 32);
    return h;
}

}  // namespace

const char* to_string(SessionStatus s) {
    switch (s) {
        case SessionStatus::Agreed: return "agreed";
        case SessionStatus::Infeasible: return "infeasible";
        case SessionStatus::Timeout: return "timeout";
        case SessionStatus::AttestFailed: return "attest_failed";
        case SessionStatus::ProofRejected: return "proof_rejected";
        case SessionStatus::SafetyAborted: return "safety_aborted";
    }
    return "?";
}

PrivateConstraint PrivateConstraint::create(Money p_min, Money p_max, Role role,
                                            uint64_t seed) {
    PrivateConstraint c;
    c.p_min = p_min;
    c.p_max = p_max;
    c.role = role;
    c.bounds = zkp::commit_bounds(p_min, p_max, seed);  // validates the interval
    return c;
}

AttestResult attest_session(AttestationRecord& a, AttestationRecord& b,
                            const std::set<Hash256>& registry) {
    AttestResult res;
    for (AttestationRecord* rec : {&a, &b}) {
        if (rec->code_hash.size() != 32) {
            rec->registry_ok = false;
            res.protocol_error = true;
            res.outcome = AttestOutcome::Aborted;
            return res;
        }
        rec->registry_ok = registry.count(to_hash(rec->code_hash)) > 0;
    }
    res.outcome = (a.registry_ok && b.registry_ok) ? AttestOutcome::Established
                                                   : AttestOutcome::Aborted;
    return res;
}

Money settle(Money offer_a, Money offer_b) {
    // Money is non-negative and < 2^32 here, so the sum cannot overflow.
    Money sum = offer_a + offer_b;
    return sum >= 0 ? sum / 2 : (sum - 1) / 2;  // floor for any sign
}

double fairness_score(Money settle_price, Money zopa_lo, Money zopa_hi) {
    if (zopa_lo > zopa_hi) throw std::invalid_argument("empty ZOPA");
    if (zopa_lo == zopa_hi) return 1.0;
    if (settle_price < zopa_lo || settle_price > zopa_hi) return 0.0;
    const double width = double(zopa_hi - zopa_lo);
    const double u_buyer = double(zopa_hi - settle_price) / width;
    const double u_seller = double(settle_price - zopa_lo) / width;
    return u_buyer * u_seller / 0.25;
}

// --- crypto engines ---------------------------------------------------------

FeasExchange RealCryptoEngine::feasibility(Money buyer_max, Money seller_min,
                                           uint64_t seed) {
    auto kp = hom::paillier_keygen(key_bits_, derive_seed(seed, 0));
    auto t = hom::run_overlap_check(kp, buyer_max, seller_min, derive_seed(seed, 1));
    return {t.commit_payload, t.blind_payload, t.result_payload, t.result.feasible};
}

std::optional<Bytes> RealCryptoEngine::prove(Money offer, const PrivateConstraint& c,
                                             const Hash256& session_id, uint64_t seed) {
    if (offer < c.p_min || offer > c.p_max) return std::nullopt;
    return zkp::prove_in_range(offer, c.bounds, session_id, seed).bytes;
}

bool RealCryptoEngine::verify(Money offer, const zkp::Commitment& cmin,
                              const zkp::Commitment& cmax, ByteView proof,
                              const Hash256& session_id) {
    zkp::RangeProof p{Bytes(proof.begin(), proof.end())};
    return zkp::verify_in_range(offer, cmin, cmax, p, session_id);
}

FeasExchange ModeledCryptoEngine::feasibility(Money buyer_max, Money seller_min,
                                              uint64_t seed) {
    FeasExchange ex;
    ex.feasible = buyer_max >= seller_min;
    Sha256 h1, h2;
    ByteWriter w;
    w.u64be(seed);
    h1.update(std::string_view{"modeled.feas.commit"}).update(w.bytes());
    h2.update(std::string_view{"modeled.feas.blind"}).update(w.bytes());
    ex.commit_payload = Bytes(32);
    ex.blind_payload = Bytes(32);
    auto d1 = h1.finish(), d2 = h2.finish();
    std::memcpy(ex.commit_payload.data(), d1.v.data(), 32);
    std::memcpy(ex.blind_payload.data(), d2.v.data(), 32);
    ex.result_payload = {uint8_t(ex.feasible ? 1 : 0)};
    return ex;
}

namespace {
Bytes modeled_proof_bytes(Money offer, const zkp::Commitment& cmin,
                          const zkp::Commitment& cmax, const Hash256& session_id) {
    Sha256 h;
    h.update(std::string_view{"modeled.rangeproof"});
    h.update(session_id);
    ByteWriter w;
    w.u64be(uint64_t(offer));
    h.update(w.bytes());
    h.update(cmin.point.view());
    h.update(cmax.point.view());
    auto d = h.finish();
    return Bytes(d.v.begin(), d.v.end());
}
}  // namespace

std::optional<Bytes> ModeledCryptoEngine::prove(Money offer, const PrivateConstraint& c,
                                                const Hash256& session_id, uint64_t) {
    if (offer < c.p_min || offer > c.p_max) return std::nullopt;
    return modeled_proof_bytes(offer, {c.bounds.cmin.point}, {c.bounds.cmax.point},
                               session_id);
}

bool ModeledCryptoEngine::verify(Money offer, const zkp::Commitment& cmin,
                                 const zkp::Commitment& cmax, ByteView proof,
                                 const Hash256& session_id) {
    Bytes expect = modeled_proof_bytes(offer, cmin, cmax, session_id);
    return proof.size() == expect.size() &&
           std::equal(proof.begin(), proof.end(), expect.begin());
}

// --- session engine ---------------------------------------------------------

AgentId make_agent_id(uint64_t tag) {
    AgentId id{};
    ByteWriter w;
    w.u64be(tag);
    Hash256 h = sha256(w.bytes());
    std::memcpy(id.data(), h.v.data(), id.size());
    return id;
}

Hash256 session_id_for(uint64_t seed, const AgentId& buyer, const AgentId& seller) {
    Sha256 h;
    h.update(std::string_view{"devneg.session.v1"});
    ByteWriter w;
    w.u64be(seed);
    h.update(w.bytes());
    h.update(ByteView{buyer.data(), buyer.size()});
    h.update(ByteView{seller.data(), seller.size()});
    return h.finish();
}

namespace {

struct Courier {
    // Owns sequencing, loss/retry, transcript capture and message audit.
    std::vector<NegotiationMessage>& transcript;
    const SessionConfig& config;
    OpMeter& meter;
    Rng loss_rng;
    uint64_t seq_buyer = 0;
    uint64_t seq_seller = 0;
    bool failed = false;  // loss beyond the retry budget

    bool send(AgentEndpoint& from, AgentEndpoint& to, bool from_is_buyer,
              MsgKind kind, Bytes payload, audit::DecisionKind sent_kind,
              const std::string& sent_note) {
        NegotiationMessage m;
        m.kind = kind;
        m.sender = from.id;
        m.sequence = ++(from_is_buyer ? seq_buyer : seq_seller);
        m.payload = std::move(payload);
        Bytes encoded = encode_message(m);
        meter.charge("send_msg", encoded.size());

        bool delivered = false;
        for (uint32_t attempt = 0; attempt <= config.transport_retries; ++attempt) {
            if (!loss_rng.bernoulli(config.transport_loss_prob)) {
                delivered = true;
                break;
            }
        }
        if (!delivered) {
            failed = true;
            return false;
        }
        transcript.push_back(m);

        audit::RecordContent sent;
        sent.timestamp_ms = meter.now_ms();
        sent.kind = sent_kind;
        sent.inputs_digest = sha256(encoded);
        sent.reasoning = sent_note;
        sent.outcome = to_string(kind);
        from.log.append(sent);

        if (kind == MsgKind::Offer) {
            audit::RecordContent recv;
            recv.timestamp_ms = meter.now_ms();
            recv.kind = audit::DecisionKind::offer_recv;
            recv.inputs_digest = sha256(encoded);
            recv.reasoning = "counterparty offer";
            recv.outcome = "received";
            to.log.append(recv);
        }
        return true;
    }
};

struct Bargainer {
    AgentEndpoint& self;
    Role role;
    std::optional<Money> own_last;
    std::optional<Money> counter_last;

    Money anchor_lo(bool proofs_on) const {
        Money width = self.constraint.p_max - self.constraint.p_min;
        if (self.dishonest && !proofs_on)
            return role == Role::buyer ? std::max<Money>(0, self.constraint.p_min - width)
                                       : self.constraint.p_min + width;
        return self.constraint.p_min;
    }
    Money anchor_hi(bool proofs_on) const {
        Money width = self.constraint.p_max - self.constraint.p_min;
        if (self.dishonest && !proofs_on)
            return role == Role::buyer ? std::max<Money>(0, self.constraint.p_max - width)
                                       : self.constraint.p_max + width;
        return self.constraint.p_max;
    }
};

}  // namespace

SessionOutcome run_session(AgentEndpoint& buyer, AgentEndpoint& seller,
                           const SessionConfig& config, SessionServices& services,
                           uint64_t seed) {
    if (!services.crypto) throw std::invalid_argument("crypto engine required");
    TickMeter fallback_meter(config.start_time_ms);
    OpMeter& meter = services.meter ? *services.meter : fallback_meter;

    SessionOutcome out;
    const Hash256 sid = session_id_for(seed, buyer.id, seller.id);
    std::optional<Money> epsilon = config.epsilon_abs;
    Money initial_gap = 0;

    Courier courier{out.transcript, config, meter, Rng(derive_seed(seed, 1))};

    auto log_goal = [&](AgentEndpoint& a, const std::string& text) {
        audit::RecordContent c;
        c.timestamp_ms = meter.now_ms();
        c.kind = audit::DecisionKind::goal;
        c.inputs_digest = sid;
        c.reasoning = text;
        c.outcome = "session opened";
        a.log.append(c);
    };
    log_goal(buyer, "negotiate purchase within private constraint");
    log_goal(seller, "negotiate sale within private constraint");

    auto finish = [&](SessionStatus status, std::optional<Money> price,
                      uint32_t rounds) -> SessionOutcome& {
        out.status = status;
        out.settle_price = price;
        out.rounds_used = rounds;
        if (status == SessionStatus::Agreed && price) {
            Money zopa_lo = std::max(buyer.constraint.p_min, seller.constraint.p_min);
            Money zopa_hi = std::min(buyer.constraint.p_max, seller.constraint.p_max);
            out.fairness =
                (zopa_lo <= zopa_hi) ? fairness_score(*price, zopa_lo, zopa_hi) : 0.0;
        }
        out.epsilon_used = epsilon ? *epsilon : 0;
        MerkleTree tree;
        for (const auto& m : out.transcript) tree.append(encode_message(m));
        out.transcript_root = tree.root();
        static const std::vector<Placement> no_placements;
        out.leakage_bits = leakage_account(
            out.transcript, services.placements ? *services.placements : no_placements);
        for (AgentEndpoint* a : {&buyer, &seller}) {
            audit::RecordContent c;
            c.timestamp_ms = meter.now_ms();
            c.kind = audit::DecisionKind::outcome;
            c.inputs_digest = out.transcript_root;
            c.reasoning = std::string("status=") + to_string(status);
            c.outcome = price ? format_money(*price) : "none";
            a->log.append(c);
        }
        return out;
    };

    // Attestation: exchanged first; a failure stops all further processing.
    meter.charge("attest");
    AttestationRecord ra{buyer.id, buyer.code_hash, false};
    AttestationRecord rb{seller.id, seller.code_hash, false};
    AttestResult attest = attest_session(ra, rb, services.registry);
    auto attest_payload = [](const AgentEndpoint& a) {
        AttestPayload p;
        p.code_hash = a.code_hash;
        std::memcpy(p.commit_min.data(), a.constraint.bounds.cmin.point.data(), 32);
        std::memcpy(p.commit_max.data(), a.constraint.bounds.cmax.point.data(), 32);
        return encode_attest(p);
    };
    if (!courier.send(buyer, seller, true, MsgKind::Attest, attest_payload(buyer),
                      audit::DecisionKind::plan, "attestation report"))
        return finish(SessionStatus::Timeout, std::nullopt, 0);
    if (!courier.send(seller, buyer, false, MsgKind::Attest, attest_payload(seller),
                      audit::DecisionKind::plan, "attestation report"))
        return finish(SessionStatus::Timeout, std::nullopt, 0);
    if (attest.outcome == AttestOutcome::Aborted) {
        courier.send(buyer, seller, true, MsgKind::Abort,
                     encode_abort(AbortReason::AttestFailed),
                     audit::DecisionKind::abort_, "attestation failed");
        return finish(SessionStatus::AttestFailed, std::nullopt, 0);
    }

    // Feasibility pre-check: one bit out, infeasible sessions stop here.
    if (config.feasibility_enabled) {
        meter.charge("feasibility");
        FeasExchange ex = services.crypto->feasibility(
            buyer.constraint.p_max, seller.constraint.p_min, derive_seed(seed, 2));
        if (!courier.send(buyer, seller, true, MsgKind::FeasCommit, ex.commit_payload,
                          audit::DecisionKind::plan, "feasibility commit") ||
            !courier.send(seller, buyer, false, MsgKind::FeasBlind, ex.blind_payload,
                          audit::DecisionKind::plan, "feasibility blind") ||
            !courier.send(buyer, seller, true, MsgKind::FeasResult, ex.result_payload,
                          audit::DecisionKind::plan, "feasibility result"))
            return finish(SessionStatus::Timeout, std::nullopt, 0);
        if (!ex.feasible) {
            courier.send(buyer, seller, true, MsgKind::Abort,
                         encode_abort(AbortReason::Infeasible),
                         audit::DecisionKind::abort_, "ranges do not overlap");
            return finish(SessionStatus::Infeasible, std::nullopt, 0);
        }
    }

    Bargainer bb{buyer, Role::buyer, {}, {}};
    Bargainer bs{seller, Role::seller, {}, {}};

    // One actor step: propose, maybe accept, else offer with proof.
    // Returns the terminal outcome if the session ended.
    auto act = [&](Bargainer& me, Bargainer& other, AgentEndpoint& me_ep,
                   AgentEndpoint& other_ep, bool is_buyer,
                   uint32_t round) -> std::optional<SessionOutcome> {
        StrategyCtx sctx;
        sctx.role = me.role;
        sctx.anchor_lo = me.anchor_lo(config.proofs_enabled);
        sctx.anchor_hi = me.anchor_hi(config.proofs_enabled);
        sctx.round = round;
        sctx.max_rounds = config.max_rounds;
        sctx.own_last = me.own_last;
        sctx.counter_last = me.counter_last;
        Money candidate = me_ep.strategy->propose(sctx);

        if (me_ep.planner) {
            PlanCtx pctx;
            pctx.role = me.role;
            pctx.p_min = sctx.anchor_lo;
            pctx.p_max = sctx.anchor_hi;
            pctx.candidate = candidate;
            pctx.own_last = me.own_last;
            pctx.counter_last = me.counter_last;
            pctx.round = round;
            pctx.max_rounds = config.max_rounds;
            pctx.initial_gap = initial_gap;
            pctx.seed = derive_seed(seed, 400 + round * 4 + (is_buyer ? 0 : 1));
            candidate = me_ep.planner->refine(pctx);
        }

        // Monotone concessions, never past the counterparty's standing offer.
        if (me.own_last)
            candidate = is_buyer ? std::max(candidate, *me.own_last)
                                 : std::min(candidate, *me.own_last);
        if (me.counter_last)
            candidate = is_buyer ? std::min(candidate, *me.counter_last)
                                 : std::max(candidate, *me.counter_last);
        // Hard bound last: honest agents never leave their own range;
        // dishonest ones are forced back only when proofs must be produced.
        if (config.proofs_enabled || !me_ep.dishonest) {
            candidate = std::clamp(candidate, me_ep.constraint.p_min,
                                   me_ep.constraint.p_max);
        } else {
            candidate = std::clamp(candidate, sctx.anchor_lo, sctx.anchor_hi);
        }
        candidate = std::max<Money>(candidate, 0);

        if (me.counter_last) {
            Money gap = std::abs(*me.counter_last - candidate);
            if (!epsilon) {
                epsilon = std::max<Money>(
                    config.epsilon_floor,
                    Money(__int128(gap) * config.epsilon_rel_bp / 10000));
            }
            if (initial_gap == 0) initial_gap = gap;
            if (gap < *epsilon) {
                Money price = settle(*me.counter_last, candidate);
                // The midpoint can overshoot a range edge by up to eps/2;
                // accepting outside the own constraint is never rational.
                bool accept_ok = price >= me_ep.constraint.p_min &&
                                 price <= me_ep.constraint.p_max;
                if (accept_ok && me_ep.gate) {
                    meter.charge("critic");
                    GateCtx gctx;
                    gctx.role = me.role;
                    gctx.p_min = me_ep.constraint.p_min;
                    gctx.p_max = me_ep.constraint.p_max;
                    gctx.proposed_settle = price;
                    gctx.round = round;
                    gctx.max_rounds = config.max_rounds;
                    gctx.seed = derive_seed(seed, 600 + round * 4 + (is_buyer ? 0 : 1));
                    GateDecision d = me_ep.gate->evaluate(gctx);
                    if (!d.safe) {
                        accept_ok = false;
                        ++out.gate_rejections;
                        audit::RecordContent c;
                        c.timestamp_ms = meter.now_ms();
                        c.kind = audit::DecisionKind::guardrail;
                        c.inputs_digest = sid;
                        c.reasoning = "accept rejected: " + d.reason;
                        c.outcome = "continue bargaining";
                        me_ep.log.append(c);
                    }
                }
                if (accept_ok) {
                    if (!courier.send(me_ep, other_ep, is_buyer, MsgKind::Accept,
                                      encode_accept(price), audit::DecisionKind::accept,
                                      "converged within epsilon"))
                        return finish(SessionStatus::Timeout, std::nullopt, round);
                    // Receiver validates before the agreement binds: a settle
                    // outside its own range is refused, never booked.
                    if (price < other_ep.constraint.p_min ||
                        price > other_ep.constraint.p_max) {
                        courier.send(other_ep, me_ep, !is_buyer, MsgKind::Abort,
                                     encode_abort(AbortReason::SafetyRejected),
                                     audit::DecisionKind::abort_,
                                     "settle outside own constraint");
                        return finish(SessionStatus::SafetyAborted, std::nullopt, round);
                    }
                    return finish(SessionStatus::Agreed, price, round);
                }
            }
        }

        // Counter-offer with (optional) range proof.
        Bytes proof;
        if (config.proofs_enabled) {
            meter.charge("proof_gen");
            auto p = services.crypto->prove(candidate, me_ep.constraint, sid,
                                            derive_seed(seed, 200 + round * 4 +
                                                                  (is_buyer ? 0 : 1)));
            if (!p) {
                // Clamping keeps candidates provable; reaching this means a
                // broken strategy, surfaced as a protocol abort.
                courier.send(me_ep, other_ep, is_buyer, MsgKind::Abort,
                             encode_abort(AbortReason::ProtocolError),
                             audit::DecisionKind::abort_, "prover refused own offer");
                return finish(SessionStatus::ProofRejected, std::nullopt, round);
            }
            proof = std::move(*p);
        }
        OfferPayload op{candidate, round, proof};
        if (!courier.send(me_ep, other_ep, is_buyer, MsgKind::Offer, encode_offer(op),
                          audit::DecisionKind::offer_sent,
                          "concession schedule " + me_ep.strategy->name()))
            return finish(SessionStatus::Timeout, std::nullopt, round);
        me.own_last = candidate;

        // Receiver verifies the proof before evaluating the offer.
        if (config.proofs_enabled) {
            meter.charge("proof_verify");
            bool ok = services.crypto->verify(
                candidate, me_ep.constraint.bounds.cmin,
                me_ep.constraint.bounds.cmax, proof, sid);
            if (!ok) {
                courier.send(other_ep, me_ep, !is_buyer, MsgKind::Abort,
                             encode_abort(AbortReason::ProofRejected),
                             audit::DecisionKind::abort_, "range proof failed");
                return finish(SessionStatus::ProofRejected, std::nullopt, round);
            }
        }
        other.counter_last = candidate;
        return std::nullopt;
    };

    for (uint32_t round = 1; round <= config.max_rounds; ++round) {
        if (auto done = act(bb, bs, buyer, seller, true, round)) return *done;
        if (auto done = act(bs, bb, seller, buyer, false, round)) return *done;
    }
    return finish(SessionStatus::Timeout, std::nullopt, config.max_rounds);
}

}  // namespace devneg::proto
