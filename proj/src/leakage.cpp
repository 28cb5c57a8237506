#include "devneg/leakage.hpp"

#include <stdexcept>

namespace devneg::proto {

double leakage_account(const std::vector<NegotiationMessage>& transcript,
                       const std::vector<Placement>& placements) {
    bool crypto_session = false;
    for (const auto& m : transcript) {
        switch (m.kind) {
            case MsgKind::FeasCommit:
            case MsgKind::FeasBlind:
            case MsgKind::FeasResult:
                crypto_session = true;
                break;
            case MsgKind::Offer: {
                auto offer = decode_offer(m.payload);
                if (offer && !offer->proof.empty()) crypto_session = true;
                break;
            }
            case MsgKind::Attest:
            case MsgKind::Accept:
            case MsgKind::Abort:
                break;
            default:
                throw std::invalid_argument("unclassified message kind in transcript");
        }
    }

    double bits = 0.0;
    for (const auto& m : transcript) {
        switch (m.kind) {
            case MsgKind::FeasResult:
                bits += 1.0;
                break;
            case MsgKind::Accept:
            case MsgKind::Abort:
                if (crypto_session) bits += 1.0;
                break;
            case MsgKind::Attest:
            case MsgKind::FeasCommit:
            case MsgKind::FeasBlind:
            case MsgKind::Offer:
                break;  // hiding payloads: 0 bits
            default:
                throw std::invalid_argument("unclassified message kind in transcript");
        }
    }
    for (const auto& p : placements) {
        if (p.cloud) bits += p.private_entropy_bits;
    }
    return bits;
}

}  // namespace devneg::proto
