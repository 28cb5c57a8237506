#pragma once

// Wire-level protocol unit. Canonical encoding (hashed into audit logs, so
// byte-exact across implementations):
//   kind tag (1 byte) | sender id (16 bytes) | sequence (8 bytes BE) |
//   payload length (4 bytes BE) | payload
// Sequence numbers increase strictly per sender; encoding is injective.

#include <array>
#include <cstdint>
#include <optional>

#include "devneg/bytes.hpp"
#include "devneg/money.hpp"

namespace devneg::proto {

using AgentId = std::array<uint8_t, 16>;

enum class MsgKind : uint8_t {
    Attest = 1,
    FeasCommit = 2,
    FeasBlind = 3,
    FeasResult = 4,
    Offer = 5,
    Accept = 6,
    Abort = 7,
};

const char* to_string(MsgKind k);

enum class AbortReason : uint8_t {
    AttestFailed = 1,
    Infeasible = 2,
    ProofRejected = 3,
    SafetyRejected = 4,
    ProtocolError = 5,
};

struct NegotiationMessage {
    MsgKind kind = MsgKind::Attest;
    AgentId sender{};
    uint64_t sequence = 0;
    Bytes payload;

    bool operator==(const NegotiationMessage&) const = default;
};

Bytes encode_message(const NegotiationMessage& m);
std::optional<NegotiationMessage> decode_message(ByteView data);

// Kind-specific payloads.

// Attest carries the claimed code hash plus the sender's published bound
// commitments (32 + 32 + 32 bytes when well formed).
struct AttestPayload {
    Bytes code_hash;  // kept as raw bytes so malformed lengths are expressible
    std::array<uint8_t, 32> commit_min{};
    std::array<uint8_t, 32> commit_max{};
};
Bytes encode_attest(const AttestPayload& p);
std::optional<AttestPayload> decode_attest(ByteView payload);

struct OfferPayload {
    Money price = 0;
    uint32_t round = 0;
    Bytes proof;  // empty when proofs are disabled
};
Bytes encode_offer(const OfferPayload& p);
std::optional<OfferPayload> decode_offer(ByteView payload);

Bytes encode_accept(Money settle);
std::optional<Money> decode_accept(ByteView payload);

Bytes encode_abort(AbortReason r);
std::optional<AbortReason> decode_abort(ByteView payload);

}  // namespace devneg::proto
