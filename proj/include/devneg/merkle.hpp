#pragma once

// Binary hash tree over opaque leaf payloads with domain-separated hashing
// (0x00 leaf, 0x01 interior). A level with an odd node count pairs the last
// node with a copy of itself, so every level halves exactly and every
// inclusion proof carries exactly ceil(log2 n) siblings regardless of index.

#include <cstdint>
#include <optional>
#include <vector>

#include "devneg/hash.hpp"

namespace devneg {

struct MerkleProof {
    uint64_t leaf_index = 0;
    // sibling hash + side flag; true = sibling is the right-hand operand
    std::vector<std::pair<Hash256, bool>> siblings;
    Hash256 root;
};

Hash256 merkle_leaf_hash(ByteView payload);

class MerkleTree {
public:
    void append(ByteView leaf_payload);
    void append_leaf_hash(const Hash256& leaf);

    size_t size() const { return leaves_.size(); }
    // Root of the empty tree is defined as H(0x01) so it is distinct from
    // any leaf hash.
    Hash256 root() const;
    MerkleProof prove(uint64_t index) const;

    static bool verify(const Hash256& leaf, const MerkleProof& proof);
    static uint64_t expected_proof_len(uint64_t n_leaves);

private:
    std::vector<Hash256> leaves_;
    mutable std::vector<std::vector<Hash256>> levels_;  // [0] = leaves
    mutable bool dirty_ = true;
    void build() const;
};

}  // namespace devneg
