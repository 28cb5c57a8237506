#pragma once

// Bilateral alternating-offer session between two agent endpoints over a
// simulated lossy transport. The engine enforces attestation against a code
// hash registry, the feasibility pre-check, per-offer range proofs, the
// 10-round limit, the convergence rule |offer_A - offer_B| < eps with
// settlement at floor((offer_A + offer_B)/2), audit logging on both ends,
// and leakage accounting. The buyer proposes first; fixed order keeps
// transcripts reproducible.

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "devneg/audit_log.hpp"
#include "devneg/leakage.hpp"
#include "devneg/messages.hpp"
#include "devneg/pedersen.hpp"
#include "devneg/strategies.hpp"

namespace devneg::proto {

struct PrivateConstraint {
    Money p_min = 0;
    Money p_max = 0;
    Role role = Role::buyer;
    zkp::BoundCommitments bounds;  // openings stay with the owner

    // Enforces 0 <= p_min <= p_max < 2^32 and fixes commitments for the
    // lifetime of the session.
    static PrivateConstraint create(Money p_min, Money p_max, Role role, uint64_t seed);
};

struct AttestationRecord {
    AgentId agent_id{};
    Bytes code_hash;  // well-formed = 32 bytes
    bool registry_ok = false;
};

enum class AttestOutcome : uint8_t { Established, Aborted };

struct AttestResult {
    AttestOutcome outcome = AttestOutcome::Aborted;
    bool protocol_error = false;  // malformed hash
};

// Established iff both well-formed hashes appear in the registry; updates
// each record's registry_ok.
AttestResult attest_session(AttestationRecord& a, AttestationRecord& b,
                            const std::set<Hash256>& registry);

// floor((offer_a + offer_b) / 2); caller guarantees |offer_a - offer_b| < eps.
Money settle(Money offer_a, Money offer_b);

// Normalized Nash product over the ZOPA, 1.0 exactly at the midpoint,
// 0.0 at either edge; degenerate ZOPA (lo == hi) scores 1.0, a settle
// outside the ZOPA scores 0.0.
double fairness_score(Money settle_price, Money zopa_lo, Money zopa_hi);

enum class SessionStatus : uint8_t {
    Agreed,
    Infeasible,
    Timeout,
    AttestFailed,
    ProofRejected,
    SafetyAborted,
};

const char* to_string(SessionStatus s);

struct SessionConfig {
    uint32_t max_rounds = 10;
    std::optional<Money> epsilon_abs;  // explicit convergence threshold
    uint32_t epsilon_rel_bp = 100;     // else: basis points of the first gap
    Money epsilon_floor = 1;           // and never below this
    bool feasibility_enabled = true;
    bool proofs_enabled = true;
    double transport_loss_prob = 0.0;
    uint32_t transport_retries = 2;
    uint64_t start_time_ms = 0;
};

// Feasibility transcript + range-proof provider. The real engine runs
// Paillier and the ristretto sigma proofs; the modeled engine keeps the
// identical message flow and refusal semantics with hash stand-in payloads
// so large simulation sweeps stay inside their runtime budget.
struct FeasExchange {
    Bytes commit_payload;
    Bytes blind_payload;
    Bytes result_payload;
    bool feasible = false;
};

class ICryptoEngine {
public:
    virtual ~ICryptoEngine() = default;
    virtual FeasExchange feasibility(Money buyer_max, Money seller_min,
                                     uint64_t seed) = 0;
    // nullopt = prover refuses (offer outside the committed range)
    virtual std::optional<Bytes> prove(Money offer, const PrivateConstraint& c,
                                       const Hash256& session_id, uint64_t seed) = 0;
    virtual bool verify(Money offer, const zkp::Commitment& cmin,
                        const zkp::Commitment& cmax, ByteView proof,
                        const Hash256& session_id) = 0;
    virtual const char* name() const = 0;
};

class RealCryptoEngine final : public ICryptoEngine {
public:
    explicit RealCryptoEngine(uint32_t feas_key_bits = 512)
        : key_bits_(feas_key_bits) {}
    FeasExchange feasibility(Money buyer_max, Money seller_min, uint64_t seed) override;
    std::optional<Bytes> prove(Money offer, const PrivateConstraint& c,
                               const Hash256& session_id, uint64_t seed) override;
    bool verify(Money offer, const zkp::Commitment& cmin, const zkp::Commitment& cmax,
                ByteView proof, const Hash256& session_id) override;
    const char* name() const override { return "real"; }

private:
    uint32_t key_bits_;
};

class ModeledCryptoEngine final : public ICryptoEngine {
public:
    FeasExchange feasibility(Money buyer_max, Money seller_min, uint64_t seed) override;
    std::optional<Bytes> prove(Money offer, const PrivateConstraint& c,
                               const Hash256& session_id, uint64_t seed) override;
    bool verify(Money offer, const zkp::Commitment& cmin, const zkp::Commitment& cmax,
                ByteView proof, const Hash256& session_id) override;
    const char* name() const override { return "modeled"; }
};

// Charged once per protocol operation; the harness maps ops onto its
// device-tier cost tables and drives the simulated clock. The default
// meter just ticks 1 ms per op so unit tests get monotone timestamps.
class OpMeter {
public:
    virtual ~OpMeter() = default;
    virtual void charge(std::string_view op, uint64_t bytes = 0) = 0;
    virtual uint64_t now_ms() const = 0;
};

struct PlanCtx {
    Role role = Role::buyer;
    Money p_min = 0;
    Money p_max = 0;
    Money candidate = 0;
    std::optional<Money> own_last;
    std::optional<Money> counter_last;
    uint32_t round = 1;
    uint32_t max_rounds = 10;
    Money initial_gap = 0;
    uint64_t seed = 0;
};

class Planner {
public:
    virtual ~Planner() = default;
    // May move the strategy's candidate; the engine re-clamps afterwards.
    virtual Money refine(const PlanCtx& ctx) = 0;
};

struct GateCtx {
    Role role = Role::buyer;
    Money p_min = 0;
    Money p_max = 0;
    Money proposed_settle = 0;
    uint32_t round = 1;
    uint32_t max_rounds = 10;
    uint64_t seed = 0;
};

struct GateDecision {
    bool safe = true;
    double expected_score = 1.0;
    uint32_t rollouts_used = 0;
    std::string reason;
};

class AcceptGate {
public:
    virtual ~AcceptGate() = default;
    virtual GateDecision evaluate(const GateCtx& ctx) = 0;
};

struct AgentEndpoint {
    AgentId id{};
    Bytes code_hash;
    PrivateConstraint constraint;
    const Strategy* strategy = nullptr;
    // When true and proofs are off, the agent anchors one range-width
    // outside its committed interval; range proofs make this impossible.
    bool dishonest = false;
    Planner* planner = nullptr;
    AcceptGate* gate = nullptr;
    audit::AuditLog log;
};

struct SessionOutcome {
    SessionStatus status = SessionStatus::Timeout;
    std::optional<Money> settle_price;
    uint32_t rounds_used = 0;
    double fairness = 0.0;
    double leakage_bits = 0.0;
    Hash256 transcript_root;
    std::vector<NegotiationMessage> transcript;
    Money epsilon_used = 0;
    uint32_t gate_rejections = 0;
};

struct SessionServices {
    ICryptoEngine* crypto = nullptr;  // required
    OpMeter* meter = nullptr;         // optional
    // Task placements accumulated by the harness during the run; folded
    // into the leakage account at session end.
    const std::vector<Placement>* placements = nullptr;
    std::set<Hash256> registry;
};

AgentId make_agent_id(uint64_t tag);
Hash256 session_id_for(uint64_t seed, const AgentId& buyer, const AgentId& seller);

SessionOutcome run_session(AgentEndpoint& buyer, AgentEndpoint& seller,
                           const SessionConfig& config, SessionServices& services,
                           uint64_t seed);

}  // namespace devneg::proto
