#include <doctest.h>

#include "devneg/rng.hpp"
#include "devneg/session.hpp"

using namespace devneg;
using namespace devneg::proto;

namespace {

struct Party {
    std::unique_ptr<Strategy> strategy;
    AgentEndpoint ep;
};

Hash256 code_hash_of(const char* name) { return sha256(std::string_view{name}); }

Party make_party(uint64_t tag, Role role, Money p_min, Money p_max,
                 const std::string& strategy_spec, uint64_t seed) {
    Party p;
    p.strategy = make_strategy(strategy_spec);
    p.ep.id = make_agent_id(tag);
    auto h = code_hash_of(role == Role::buyer ? "buyer-agent-v1" : "seller-agent-v1");
    p.ep.code_hash.assign(h.v.begin(), h.v.end());
    p.ep.constraint = PrivateConstraint::create(p_min, p_max, role, seed);
    p.ep.strategy = p.strategy.get();
    return p;
}

SessionServices make_services(ICryptoEngine* engine) {
    SessionServices s;
    s.crypto = engine;
    s.registry = {code_hash_of("buyer-agent-v1"), code_hash_of("seller-agent-v1")};
    return s;
}

// Engine wrapper that flips a byte in every produced proof.
struct CorruptingEngine final : ICryptoEngine {
    explicit CorruptingEngine(ICryptoEngine* inner) : inner(inner) {}
    ICryptoEngine* inner;
    FeasExchange feasibility(Money bm, Money sm, uint64_t seed) override {
        return inner->feasibility(bm, sm, seed);
    }
    std::optional<Bytes> prove(Money offer, const PrivateConstraint& c,
                               const Hash256& sid, uint64_t seed) override {
        auto p = inner->prove(offer, c, sid, seed);
        if (p && !p->empty()) (*p)[0] ^= 0xff;
        return p;
    }
    bool verify(Money offer, const zkp::Commitment& cmin, const zkp::Commitment& cmax,
                ByteView proof, const Hash256& sid) override {
        return inner->verify(offer, cmin, cmax, proof, sid);
    }
    const char* name() const override { return "corrupting"; }
};

}  // namespace

TEST_SUITE_BEGIN("protocol");

TEST_CASE("settle takes the floor of the mean") {
    CHECK(settle(10000, 10000) == 10000);
    CHECK(settle(10000, 10050) == 10025);
    CHECK(settle(9999, 10000) == 9999);  // floor, not round
    CHECK(settle(0, 1) == 0);
}

TEST_CASE("fairness score shape") {
    CHECK(fairness_score(10000, 8000, 12000) == doctest::Approx(1.0));
    CHECK(fairness_score(8000, 8000, 12000) == doctest::Approx(0.0));
    CHECK(fairness_score(12000, 8000, 12000) == doctest::Approx(0.0));
    // (3/4 * 1/4) / 0.25 = 0.75
    CHECK(fairness_score(9000, 8000, 12000) == doctest::Approx(0.75));
    CHECK(fairness_score(5000, 5000, 5000) == 1.0);  // degenerate ZOPA
    CHECK_THROWS_AS(fairness_score(1, 10, 5), std::invalid_argument);
}

TEST_CASE("fairness brute-force argmax sits at the ZOPA midpoint") {
    Rng rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        Money lo = Money(rng.below(50000));
        Money hi = lo + 2 + Money(rng.below(900));
        Money best = lo;
        double best_v = -1;
        for (Money s = lo; s <= hi; ++s) {
            double v = fairness_score(s, lo, hi);
            if (v > best_v) {
                best_v = v;
                best = s;
            }
        }
        // Integer grid: the argmax is floor((lo+hi)/2) (or the twin middle
        // point for even widths; the product is symmetric, floor wins the
        // strict > comparison scanning upward).
        CHECK(best == (lo + hi) / 2);
        CHECK(fairness_score((lo + hi) / 2, lo, hi) == doctest::Approx(best_v));
    }
}

TEST_CASE("message encoding golden bytes and round trip") {
    NegotiationMessage m;
    m.kind = MsgKind::Offer;
    m.sender = make_agent_id(1);
    m.sequence = 3;
    m.payload = encode_offer({10000, 2, {}});
    Bytes enc = encode_message(m);
    // kind(1) + sender(16) + seq(8) + len(4) + payload(8+4+4)
    CHECK(enc.size() == 1 + 16 + 8 + 4 + 16);
    CHECK(enc[0] == 5);
    // sequence big-endian
    CHECK(enc[17 + 7] == 3);
    auto dec = decode_message(enc);
    REQUIRE(dec.has_value());
    CHECK(*dec == m);

    // Golden vector, frozen: full hex of a fixed message.
    NegotiationMessage g;
    g.kind = MsgKind::Accept;
    g.sender.fill(0xab);
    g.sequence = 0x0102030405060708ULL;
    g.payload = encode_accept(10025);
    CHECK(to_hex(encode_message(g)) ==
          "06"
          "abababababababababababababababab"
          "0102030405060708"
          "00000008"
          "0000000000002729");

    CHECK_FALSE(decode_message(Bytes{}).has_value());
    Bytes truncated(enc.begin(), enc.end() - 1);
    CHECK_FALSE(decode_message(truncated).has_value());
    Bytes badkind = enc;
    badkind[0] = 0;
    CHECK_FALSE(decode_message(badkind).has_value());
}

TEST_CASE("message encode/decode is injective over random messages") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        NegotiationMessage m;
        m.kind = static_cast<MsgKind>(1 + rng.below(7));
        m.sender = make_agent_id(rng.next_u64());
        m.sequence = rng.next_u64();
        m.payload.resize(rng.below(64));
        rng.fill(m.payload.data(), m.payload.size());
        auto dec = decode_message(encode_message(m));
        REQUIRE(dec.has_value());
        CHECK(*dec == m);
    }
}

TEST_CASE("attestation against the registry") {
    std::set<Hash256> registry = {code_hash_of("a"), code_hash_of("b")};
    auto mk = [](uint64_t tag, const char* name) {
        AttestationRecord r;
        r.agent_id = make_agent_id(tag);
        auto h = code_hash_of(name);
        r.code_hash.assign(h.v.begin(), h.v.end());
        return r;
    };
    auto ra = mk(1, "a"), rb = mk(2, "b");
    CHECK(attest_session(ra, rb, registry).outcome == AttestOutcome::Established);
    CHECK(ra.registry_ok);
    CHECK(rb.registry_ok);

    auto rc = mk(3, "c");  // not certified
    CHECK(attest_session(ra, rc, registry).outcome == AttestOutcome::Aborted);
    CHECK_FALSE(rc.registry_ok);

    CHECK(attest_session(ra, rb, {}).outcome == AttestOutcome::Aborted);  // empty registry

    AttestationRecord malformed;
    malformed.agent_id = make_agent_id(4);
    malformed.code_hash = {1, 2, 3};  // not 32 bytes
    auto res = attest_session(ra, malformed, registry);
    CHECK(res.outcome == AttestOutcome::Aborted);
    CHECK(res.protocol_error);
}

TEST_CASE("identical opening offers agree in round 1") {
    ModeledCryptoEngine engine;
    auto services = make_services(&engine);
    // Buyer opens at its p_min = 10000, seller at its p_max = 10000.
    auto buyer = make_party(1, Role::buyer, 10000, 12000, "linear:500", 21);
    auto seller = make_party(2, Role::seller, 8000, 10000, "linear:500", 22);
    SessionConfig cfg;
    cfg.epsilon_abs = 100;
    auto out = run_session(buyer.ep, seller.ep, cfg, services, 99);
    CHECK(out.status == SessionStatus::Agreed);
    CHECK(out.settle_price == 10000);
    CHECK(out.rounds_used == 1);
}

TEST_CASE("linear concession example settles at 10000 in round 6") {
    // buyer [5000,12000], seller [8000,15000], both linear step 1000,
    // eps = 100: offers 5000/15000, 6000/14000, ..., round 6 meets at 10000.
    for (bool real : {false, true}) {
        ModeledCryptoEngine modeled;
        RealCryptoEngine real_engine(512);
        auto services =
            make_services(real ? static_cast<ICryptoEngine*>(&real_engine) : &modeled);
        auto buyer = make_party(1, Role::buyer, 5000, 12000, "linear:1000", 31);
        auto seller = make_party(2, Role::seller, 8000, 15000, "linear:1000", 32);
        SessionConfig cfg;
        cfg.epsilon_abs = 100;
        auto out = run_session(buyer.ep, seller.ep, cfg, services, 7);
        CHECK(out.status == SessionStatus::Agreed);
        CHECK(out.settle_price == 10000);
        CHECK(out.rounds_used == 6);
        CHECK(out.rounds_used <= 10);
        REQUIRE(out.settle_price.has_value());
        CHECK(*out.settle_price >= 8000);
        CHECK(*out.settle_price <= 12000);
        // midpoint of ZOPA [8000, 12000] -> fairness 1.0
        CHECK(out.fairness == doctest::Approx(1.0));
    }
}

TEST_CASE("disjoint ranges with the pre-check disabled time out at 10 rounds") {
    ModeledCryptoEngine engine;
    auto services = make_services(&engine);
    auto buyer = make_party(1, Role::buyer, 5000, 7900, "linear:1000", 41);
    auto seller = make_party(2, Role::seller, 8000, 15000, "linear:1000", 42);
    SessionConfig cfg;
    cfg.epsilon_abs = 100;
    cfg.feasibility_enabled = false;
    auto out = run_session(buyer.ep, seller.ep, cfg, services, 5);
    CHECK(out.status == SessionStatus::Timeout);
    CHECK(out.rounds_used == 10);
    CHECK_FALSE(out.settle_price.has_value());
}

TEST_CASE("disjoint ranges with the pre-check end Infeasible immediately") {
    ModeledCryptoEngine engine;
    auto services = make_services(&engine);
    auto buyer = make_party(1, Role::buyer, 5000, 7900, "linear:1000", 41);
    auto seller = make_party(2, Role::seller, 8000, 15000, "linear:1000", 42);
    SessionConfig cfg;
    cfg.epsilon_abs = 100;
    auto out = run_session(buyer.ep, seller.ep, cfg, services, 5);
    CHECK(out.status == SessionStatus::Infeasible);
    CHECK(out.rounds_used == 0);
    // feasibility bit + abort decision bit
    CHECK(out.leakage_bits == doctest::Approx(2.0));
}

TEST_CASE("uncertified counterparty aborts before any bargaining") {
    ModeledCryptoEngine engine;
    SessionServices services;
    services.crypto = &engine;
    services.registry = {code_hash_of("buyer-agent-v1")};  // seller missing
    auto buyer = make_party(1, Role::buyer, 5000, 12000, "linear:1000", 51);
    auto seller = make_party(2, Role::seller, 8000, 15000, "linear:1000", 52);
    SessionConfig cfg;
    auto out = run_session(buyer.ep, seller.ep, cfg, services, 1);
    CHECK(out.status == SessionStatus::AttestFailed);
    CHECK(out.rounds_used == 0);
    for (const auto& m : out.transcript)
        CHECK((m.kind == MsgKind::Attest || m.kind == MsgKind::Abort));
}

TEST_CASE("corrupted proofs are rejected and the session never agrees") {
    for (bool real : {false, true}) {
        ModeledCryptoEngine modeled;
        RealCryptoEngine real_engine(512);
        CorruptingEngine corrupting(real ? static_cast<ICryptoEngine*>(&real_engine)
                                         : &modeled);
        auto services = make_services(&corrupting);
        auto buyer = make_party(1, Role::buyer, 5000, 12000, "linear:1000", 61);
        auto seller = make_party(2, Role::seller, 8000, 15000, "linear:1000", 62);
        SessionConfig cfg;
        cfg.epsilon_abs = 100;
        auto out = run_session(buyer.ep, seller.ep, cfg, services, 3);
        CHECK(out.status == SessionStatus::ProofRejected);
        CHECK(out.status != SessionStatus::Agreed);
    }
}

TEST_CASE("transport loss beyond the retry budget times out") {
    ModeledCryptoEngine engine;
    auto services = make_services(&engine);
    auto buyer = make_party(1, Role::buyer, 5000, 12000, "linear:1000", 71);
    auto seller = make_party(2, Role::seller, 8000, 15000, "linear:1000", 72);
    SessionConfig cfg;
    cfg.epsilon_abs = 100;
    cfg.transport_loss_prob = 0.9;
    cfg.transport_retries = 1;
    auto out = run_session(buyer.ep, seller.ep, cfg, services, 13);
    CHECK(out.status == SessionStatus::Timeout);
}

TEST_CASE("transcripts are byte-identical across reruns") {
    auto run_once = [](uint64_t seed) {
        ModeledCryptoEngine engine;
        auto services = make_services(&engine);
        auto buyer = make_party(1, Role::buyer, 5000, 12000, "gap:0.25", 81);
        auto seller = make_party(2, Role::seller, 8000, 15000, "boulware:3", 82);
        SessionConfig cfg;
        auto out = run_session(buyer.ep, seller.ep, cfg, services, seed);
        Bytes all;
        for (const auto& m : out.transcript) {
            Bytes e = encode_message(m);
            all.insert(all.end(), e.begin(), e.end());
        }
        return std::pair{all, out.transcript_root};
    };
    auto [bytes_a, root_a] = run_once(12345);
    auto [bytes_b, root_b] = run_once(12345);
    CHECK(bytes_a == bytes_b);
    CHECK(root_a == root_b);
    auto [bytes_c, root_c] = run_once(54321);
    CHECK(root_a != root_c);
}

TEST_CASE("sequence numbers increase strictly per sender") {
    ModeledCryptoEngine engine;
    auto services = make_services(&engine);
    auto buyer = make_party(1, Role::buyer, 5000, 12000, "linear:800", 91);
    auto seller = make_party(2, Role::seller, 8000, 15000, "linear:800", 92);
    SessionConfig cfg;
    auto out = run_session(buyer.ep, seller.ep, cfg, services, 2);
    uint64_t last_buyer = 0, last_seller = 0;
    for (const auto& m : out.transcript) {
        uint64_t& last = (m.sender == buyer.ep.id) ? last_buyer : last_seller;
        CHECK(m.sequence > last);
        last = m.sequence;
    }
}

TEST_CASE("settlement containment over a strategy grid") {
    // Whenever a session agrees, the settle price lies inside the
    // constraint intersection, for every pairing of shipped strategies.
    const char* specs[] = {"linear:250", "linear:1000", "gap:0.25", "gap:0.5",
                           "boulware:3"};
    ModeledCryptoEngine engine;
    Rng rng(505);
    int agreed = 0;
    for (const char* bspec : specs)
        for (const char* sspec : specs)
            for (int trial = 0; trial < 6; ++trial) {
                Money b_lo = Money(1000 + rng.below(20000));
                Money b_hi = b_lo + 1000 + Money(rng.below(20000));
                Money s_lo = Money(1000 + rng.below(20000));
                Money s_hi = s_lo + 1000 + Money(rng.below(20000));
                auto buyer = make_party(1, Role::buyer, b_lo, b_hi, bspec, rng.next_u64());
                auto seller = make_party(2, Role::seller, s_lo, s_hi, sspec, rng.next_u64());
                auto services = make_services(&engine);
                SessionConfig cfg;
                auto out = run_session(buyer.ep, seller.ep, cfg, services, rng.next_u64());
                CHECK(out.rounds_used <= 10);
                if (out.status == SessionStatus::Agreed) {
                    ++agreed;
                    REQUIRE(out.settle_price.has_value());
                    CHECK(*out.settle_price >= std::max(b_lo, s_lo));
                    CHECK(*out.settle_price <= std::min(b_hi, s_hi));
                }
            }
    CHECK(agreed > 20);  // the grid must actually exercise agreements
}

TEST_CASE("leakage accounting rules") {
    // A crypto session: feasibility bit + accept bit.
    ModeledCryptoEngine engine;
    auto services = make_services(&engine);
    auto buyer = make_party(1, Role::buyer, 9000, 12000, "linear:1000", 1);
    auto seller = make_party(2, Role::seller, 8000, 11000, "linear:1000", 2);
    SessionConfig cfg;
    auto out = run_session(buyer.ep, seller.ep, cfg, services, 6);
    REQUIRE(out.status == SessionStatus::Agreed);
    CHECK(out.leakage_bits == doctest::Approx(2.0));

    // Cloud-only style accounting: both parties' two 64-bit bounds.
    std::vector<Placement> cloud = {{"constraint_upload", true, 128.0},
                                    {"constraint_upload", true, 128.0}};
    CHECK(leakage_account({}, cloud) == doctest::Approx(256.0));

    // Device-only: plain bargaining (no crypto messages, unproven offers),
    // timeout, nothing off-device: zero bits.
    SessionConfig plain = cfg;
    plain.feasibility_enabled = false;
    plain.proofs_enabled = false;
    auto b2 = make_party(1, Role::buyer, 1000, 2000, "linear:10", 3);
    auto s2 = make_party(2, Role::seller, 9000, 9500, "linear:10", 4);
    auto out2 = run_session(b2.ep, s2.ep, plain, services, 8);
    CHECK(out2.status == SessionStatus::Timeout);
    CHECK(out2.leakage_bits == doctest::Approx(0.0));

    // Placements never decrease leakage (monotonicity).
    std::vector<Placement> more = {{"lookup", true, 0.0}, {"plan", true, 44.0}};
    CHECK(leakage_account(out.transcript, more) >= out.leakage_bits);
}

TEST_CASE("audit logs chain and carry the session lifecycle") {
    ModeledCryptoEngine engine;
    auto services = make_services(&engine);
    auto buyer = make_party(1, Role::buyer, 5000, 12000, "linear:1000", 31);
    auto seller = make_party(2, Role::seller, 8000, 15000, "linear:1000", 32);
    SessionConfig cfg;
    cfg.epsilon_abs = 100;
    auto out = run_session(buyer.ep, seller.ep, cfg, services, 7);
    REQUIRE(out.status == SessionStatus::Agreed);
    for (AgentEndpoint* ep : {&buyer.ep, &seller.ep}) {
        CHECK(ep->log.verify_chain().ok);
        CHECK(ep->log.size() >= 4);
        CHECK(ep->log.at(0).content.kind == audit::DecisionKind::goal);
        CHECK(ep->log.at(ep->log.size() - 1).content.kind ==
              audit::DecisionKind::outcome);
    }
}

TEST_SUITE_END();
