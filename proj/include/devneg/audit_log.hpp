#pragma once

// Tamper-evident decision log. Every record is chained through
// h_i = SHA256(canonical(record) || h_{i-1}) starting from the fixed genesis
// hash SHA256("genesis-v1"), and a Merkle tree over the chain hashes serves
// logarithmic inclusion proofs. An inclusion proof for index i attests
// "record i exists in a log whose chain is intact up to i", so verification
// first replays the chain prefix; this is what makes any single-bit edit at
// index m invalidate the chain check and every proof with index >= m while
// leaving proofs for earlier indices valid.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "devneg/hash.hpp"
#include "devneg/merkle.hpp"

namespace devneg::audit {

enum class DecisionKind : uint8_t {
    goal = 0,
    guardrail = 1,
    plan = 2,
    offer_sent = 3,
    offer_recv = 4,
    accept = 5,
    abort_ = 6,
    outcome = 7,
};

const char* to_string(DecisionKind k);

constexpr size_t kMaxReasoningBytes = 4096;

struct RecordContent {
    uint64_t timestamp_ms = 0;
    DecisionKind kind = DecisionKind::goal;
    Hash256 inputs_digest;
    std::string reasoning;
    std::string outcome;
};

struct DecisionRecord {
    uint64_t index = 0;
    RecordContent content;
    Hash256 chain_hash;

    // Fixed field order, big-endian integers, length-prefixed text; the
    // chain hash is computed over exactly these bytes.
    Bytes canonical_bytes() const;
    // Bytes stored beyond the caller-provided text payloads.
    size_t overhead_bytes() const;
};

struct ChainCheck {
    bool ok = true;
    uint64_t first_bad_index = 0;  // valid only when !ok
};

struct AnchorReceipt {
    Hash256 root;
    uint64_t anchored_at_ms = 0;
    std::string sink;  // "local-file" or "null"
};

class AnchorSink {
public:
    virtual ~AnchorSink() = default;
    virtual AnchorReceipt anchor(const Hash256& root, uint64_t at_ms) = 0;
};

class NullAnchorSink final : public AnchorSink {
public:
    AnchorReceipt anchor(const Hash256& root, uint64_t at_ms) override;
};

// Append-only text file of "root_hex timestamp_ms" lines.
class LocalFileAnchorSink final : public AnchorSink {
public:
    explicit LocalFileAnchorSink(std::string path) : path_(std::move(path)) {}
    AnchorReceipt anchor(const Hash256& root, uint64_t at_ms) override;

private:
    std::string path_;
};

Hash256 genesis_hash();

class AuditLog {
public:
    const DecisionRecord& append(const RecordContent& content);

    size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const std::vector<DecisionRecord>& records() const { return records_; }
    const DecisionRecord& at(uint64_t index) const;

    ChainCheck verify_chain() const;

    std::optional<DecisionRecord> query_point_index(uint64_t index) const;
    // Earliest record with exactly this timestamp (ties resolve to lowest
    // index).
    std::optional<DecisionRecord> query_point_timestamp(uint64_t ts_ms) const;
    // Inclusive window [t0, t1] in index order; throws on t0 > t1.
    std::vector<DecisionRecord> query_range(uint64_t t0_ms, uint64_t t1_ms) const;

    Hash256 merkle_root() const;
    MerkleProof prove_inclusion(uint64_t index) const;
    // Chain-prefix check up to proof.leaf_index, then the Merkle path.
    bool verify_inclusion(const MerkleProof& proof) const;

    AnchorReceipt anchor(AnchorSink& sink, uint64_t at_ms) const;

    void save(const std::string& path) const;
    static AuditLog load(const std::string& path);
    Bytes serialize() const;
    static AuditLog deserialize(ByteView data);

private:
    std::vector<DecisionRecord> records_;
    MerkleTree tree_;
    void rebuild_tree();
};

}  // namespace devneg::audit
