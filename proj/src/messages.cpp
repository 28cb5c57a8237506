#include "devneg/messages.hpp"

#include <cstring>

namespace devneg::proto {

const char* to_string(MsgKind k) {
    switch (k) {
        case MsgKind::Attest: return "attest";
        case MsgKind::FeasCommit: return "feas_commit";
        case MsgKind::FeasBlind: return "feas_blind";
        case MsgKind::FeasResult: return "feas_result";
        case MsgKind::Offer: return "offer";
        case MsgKind::Accept: return "accept";
        case MsgKind::Abort: return "abort";
    }
    return "?";
}

Bytes encode_message(const NegotiationMessage& m) {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(m.kind));
    w.raw(m.sender.data(), m.sender.size());
    w.u64be(m.sequence);
    w.lp(m.payload);
    return w.take();
}

std::optional<NegotiationMessage> decode_message(ByteView data) {
    try {
        ByteReader r(data);
        uint8_t kind = r.u8();
        if (kind < 1 || kind > 7) return std::nullopt;
        NegotiationMessage m;
        m.kind = static_cast<MsgKind>(kind);
        ByteView sender = r.raw(16);
        std::memcpy(m.sender.data(), sender.data(), 16);
        m.sequence = r.u64be();
        m.payload = r.lp();
        r.expect_done();
        return m;
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

Bytes encode_attest(const AttestPayload& p) {
    ByteWriter w;
    w.raw(p.code_hash);
    w.raw(p.commit_min.data(), 32);
    w.raw(p.commit_max.data(), 32);
    return w.take();
}

std::optional<AttestPayload> decode_attest(ByteView payload) {
    // A well-formed attest payload is exactly hash + two commitments.
    if (payload.size() != 96) return std::nullopt;
    AttestPayload p;
    p.code_hash.assign(payload.begin(), payload.begin() + 32);
    std::memcpy(p.commit_min.data(), payload.data() + 32, 32);
    std::memcpy(p.commit_max.data(), payload.data() + 64, 32);
    return p;
}

Bytes encode_offer(const OfferPayload& p) {
    ByteWriter w;
    w.u64be(uint64_t(p.price));
    w.u32be(p.round);
    w.lp(p.proof);
    return w.take();
}

std::optional<OfferPayload> decode_offer(ByteView payload) {
    try {
        ByteReader r(payload);
        OfferPayload p;
        p.price = Money(r.u64be());
        p.round = r.u32be();
        p.proof = r.lp();
        r.expect_done();
        if (p.price < 0 || p.round == 0) return std::nullopt;
        return p;
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

Bytes encode_accept(Money settle) {
    ByteWriter w;
    w.u64be(uint64_t(settle));
    return w.take();
}

std::optional<Money> decode_accept(ByteView payload) {
    if (payload.size() != 8) return std::nullopt;
    ByteReader r(payload);
    return Money(r.u64be());
}

Bytes encode_abort(AbortReason reason) { return {static_cast<uint8_t>(reason)}; }

std::optional<AbortReason> decode_abort(ByteView payload) {
    if (payload.size() != 1 || payload[0] < 1 || payload[0] > 5) return std::nullopt;
    return static_cast<AbortReason>(payload[0]);
}

}  // namespace devneg::proto
