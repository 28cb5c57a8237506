#include "devneg/merkle.hpp"

#include <stdexcept>

namespace devneg {

namespace {
Hash256 node_hash(const Hash256& left, const Hash256& right) {
    Sha256 h;
    uint8_t tag = 0x01;
    h.update(ByteView{&tag, 1});
    h.update(left);
    h.update(right);
    return h.finish();
}
}  // namespace

Hash256 merkle_leaf_hash(ByteView payload) {
    Sha256 h;
    uint8_t tag = 0x00;
    h.update(ByteView{&tag, 1});
    h.update(payload);
    return h.finish();
}

void MerkleTree::append(ByteView leaf_payload) {
    append_leaf_hash(merkle_leaf_hash(leaf_payload));
}

void MerkleTree::append_leaf_hash(const Hash256& leaf) {
    leaves_.push_back(leaf);
    dirty_ = true;
}

void MerkleTree::build() const {
    if (!dirty_) return;
    levels_.clear();
    levels_.push_back(leaves_);
    while (levels_.back().size() > 1) {
        const auto& cur = levels_.back();
        std::vector<Hash256> next;
        next.reserve((cur.size() + 1) / 2);
        for (size_t i = 0; i < cur.size(); i += 2) {
            const Hash256& l = cur[i];
            const Hash256& r = (i + 1 < cur.size()) ? cur[i + 1] : cur[i];
            next.push_back(node_hash(l, r));
        }
        levels_.push_back(std::move(next));
    }
    dirty_ = false;
}

Hash256 MerkleTree::root() const {
    if (leaves_.empty()) {
        uint8_t tag = 0x01;
        return sha256(ByteView{&tag, 1});
    }
    build();
    return levels_.back()[0];
}

MerkleProof MerkleTree::prove(uint64_t index) const {
    if (index >= leaves_.size()) throw std::out_of_range("merkle index");
    build();
    MerkleProof proof;
    proof.leaf_index = index;
    size_t idx = index;
    for (size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
        const auto& cur = levels_[lvl];
        size_t sib = (idx % 2 == 0) ? idx + 1 : idx - 1;
        if (sib >= cur.size()) sib = idx;  // odd tail: paired with itself
        proof.siblings.emplace_back(cur[sib], idx % 2 == 0);
        idx /= 2;
    }
    proof.root = root();
    return proof;
}

bool MerkleTree::verify(const Hash256& leaf, const MerkleProof& proof) {
    Hash256 acc = leaf;
    for (const auto& [sib, sib_is_right] : proof.siblings)
        acc = sib_is_right ? node_hash(acc, sib) : node_hash(sib, acc);
    return acc == proof.root;
}

uint64_t MerkleTree::expected_proof_len(uint64_t n) {
    uint64_t len = 0, width = n;
    while (width > 1) {
        width = (width + 1) / 2;
        ++len;
    }
    return len;
}

}  // namespace devneg
