#pragma once

// Cryptographic-leakage accountant. Counts information about otherwise
// secret constraints exposed by a protocol run:
//   - 1 bit per feasibility result exchanged,
//   - 1 bit per accept/abort decision, charged when the session ran the
//     cryptographic layer (commitments/proofs present) — the decision then
//     reveals one bit relative to the committed secrets; a plain-bargaining
//     accept is behavioral, not cryptographic, and is out of scope here
//     (timing/behavioral inference is tracked as a known limitation),
//   - the declared entropy of every private payload placed on a cloud
//     resource.
// Commitments and range proofs are hiding and count zero.

#include <string>
#include <vector>

#include "devneg/messages.hpp"

namespace devneg::proto {

struct Placement {
    std::string task;
    bool cloud = false;
    // entropy of user-private fields in the payload, in bits; 0 for public
    double private_entropy_bits = 0.0;
};

double leakage_account(const std::vector<NegotiationMessage>& transcript,
                       const std::vector<Placement>& placements);

}  // namespace devneg::proto
