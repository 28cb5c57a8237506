#include "devneg/audit_log.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace devneg::audit {

namespace {
constexpr char kMagic[4] = {'D', 'N', 'A', 'L'};
constexpr uint16_t kVersion = 1;
constexpr uint8_t kHashAlgSha256 = 1;

Hash256 chain_step(ByteView canonical, const Hash256& prev) {
    Sha256 h;
    h.update(canonical);
    h.update(prev);
    return h.finish();
}
}  // namespace

const char* to_string(DecisionKind k) {
    switch (k) {
        case DecisionKind::goal: return "goal";
        case DecisionKind::guardrail: return "guardrail";
        case DecisionKind::plan: return "plan";
        case DecisionKind::offer_sent: return "offer_sent";
        case DecisionKind::offer_recv: return "offer_recv";
        case DecisionKind::accept: return "accept";
        case DecisionKind::abort_: return "abort";
        case DecisionKind::outcome: return "outcome";
    }
    return "?";
}

Hash256 genesis_hash() { return sha256(std::string_view{"genesis-v1"}); }

Bytes DecisionRecord::canonical_bytes() const {
    ByteWriter w;
    w.u64be(index);
    w.u64be(content.timestamp_ms);
    w.u8(static_cast<uint8_t>(content.kind));
    w.raw(content.inputs_digest.view());
    w.lp_str(content.reasoning);
    w.lp_str(content.outcome);
    return w.take();
}

size_t DecisionRecord::overhead_bytes() const {
    return canonical_bytes().size() - content.reasoning.size() -
           content.outcome.size() + 32;  // + stored chain hash
}

const DecisionRecord& AuditLog::append(const RecordContent& content) {
    if (content.reasoning.size() > kMaxReasoningBytes)
        throw std::invalid_argument("reasoning text exceeds 4 KiB bound");
    DecisionRecord rec;
    rec.index = records_.size();
    rec.content = content;
    const Hash256 prev = records_.empty() ? genesis_hash() : records_.back().chain_hash;
    rec.chain_hash = chain_step(rec.canonical_bytes(), prev);
    tree_.append_leaf_hash(merkle_leaf_hash(rec.chain_hash.view()));
    records_.push_back(std::move(rec));
    return records_.back();
}

const DecisionRecord& AuditLog::at(uint64_t index) const {
    if (index >= records_.size()) throw std::out_of_range("record index");
    return records_[index];
}

ChainCheck AuditLog::verify_chain() const {
    Hash256 prev = genesis_hash();
    for (const auto& rec : records_) {
        Hash256 expect = chain_step(rec.canonical_bytes(), prev);
        if (expect != rec.chain_hash) return {false, rec.index};
        prev = rec.chain_hash;
    }
    return {true, 0};
}

std::optional<DecisionRecord> AuditLog::query_point_index(uint64_t index) const {
    if (index >= records_.size()) return std::nullopt;
    return records_[index];
}

std::optional<DecisionRecord> AuditLog::query_point_timestamp(uint64_t ts_ms) const {
    for (const auto& rec : records_)
        if (rec.content.timestamp_ms == ts_ms) return rec;
    return std::nullopt;
}

std::vector<DecisionRecord> AuditLog::query_range(uint64_t t0_ms, uint64_t t1_ms) const {
    if (t0_ms > t1_ms) throw std::invalid_argument("query_range: t0 > t1");
    std::vector<DecisionRecord> out;
    for (const auto& rec : records_)
        if (rec.content.timestamp_ms >= t0_ms && rec.content.timestamp_ms <= t1_ms)
            out.push_back(rec);
    return out;
}

Hash256 AuditLog::merkle_root() const { return tree_.root(); }

MerkleProof AuditLog::prove_inclusion(uint64_t index) const {
    return tree_.prove(index);
}

bool AuditLog::verify_inclusion(const MerkleProof& proof) const {
    if (proof.leaf_index >= records_.size()) return false;
    // Replay the chain up to and including the proved index.
    Hash256 prev = genesis_hash();
    for (uint64_t i = 0; i <= proof.leaf_index; ++i) {
        Hash256 expect = chain_step(records_[i].canonical_bytes(), prev);
        if (expect != records_[i].chain_hash) return false;
        prev = records_[i].chain_hash;
    }
    Hash256 leaf = merkle_leaf_hash(records_[proof.leaf_index].chain_hash.view());
    return MerkleTree::verify(leaf, proof);
}

AnchorReceipt AuditLog::anchor(AnchorSink& sink, uint64_t at_ms) const {
    return sink.anchor(merkle_root(), at_ms);
}

Bytes AuditLog::serialize() const {
    ByteWriter w;
    w.raw(kMagic, 4);
    w.u16be(kVersion);
    w.u8(kHashAlgSha256);
    w.u64be(records_.size());
    for (const auto& rec : records_) {
        w.lp(rec.canonical_bytes());
        w.raw(rec.chain_hash.view());
    }
    return w.take();
}

AuditLog AuditLog::deserialize(ByteView data) {
    ByteReader r(data);
    ByteView magic = r.raw(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw DecodeError("bad magic");
    if (r.u16be() != kVersion) throw DecodeError("unsupported version");
    if (r.u8() != kHashAlgSha256) throw DecodeError("unsupported hash alg");
    uint64_t count = r.u64be();
    AuditLog log;
    for (uint64_t i = 0; i < count; ++i) {
        Bytes canon = r.lp();
        ByteReader cr(canon);
        DecisionRecord rec;
        rec.index = cr.u64be();
        rec.content.timestamp_ms = cr.u64be();
        uint8_t kind = cr.u8();
        if (kind > 7) throw DecodeError("bad decision kind");
        rec.content.kind = static_cast<DecisionKind>(kind);
        ByteView digest = cr.raw(32);
        std::memcpy(rec.content.inputs_digest.v.data(), digest.data(), 32);
        rec.content.reasoning = cr.lp_str();
        rec.content.outcome = cr.lp_str();
        cr.expect_done();
        ByteView chain = r.raw(32);
        std::memcpy(rec.chain_hash.v.data(), chain.data(), 32);
        log.tree_.append_leaf_hash(merkle_leaf_hash(rec.chain_hash.view()));
        log.records_.push_back(std::move(rec));
    }
    r.expect_done();
    return log;
}

void AuditLog::save(const std::string& path) const {
    Bytes data = serialize();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
}

AuditLog AuditLog::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return deserialize(data);
}

AnchorReceipt NullAnchorSink::anchor(const Hash256& root, uint64_t at_ms) {
    return {root, at_ms, "null"};
}

AnchorReceipt LocalFileAnchorSink::anchor(const Hash256& root, uint64_t at_ms) {
    std::ofstream f(path_, std::ios::app);
    if (!f) throw std::runtime_error("cannot open anchor file: " + path_);
    f << root.hex() << ' ' << at_ms << '\n';
    return {root, at_ms, "local-file"};
}

}  // namespace devneg::audit
