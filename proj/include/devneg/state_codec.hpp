#pragma once

// Selective state transfer for cross-device session migration. Items score
// I = w_rec * 2^(-age/half_life) + w_rel * max(0, cosine(item, goal)); the
// active offer class is always critical. Items above tau transfer verbatim
// (bit-exact on restore); the rest are represented exactly once, either in
// a per-class summary or, for embedding items, as centroids: the 50 most
// recent non-critical embeddings survive as singletons, older ones are
// k-means clustered (k = ceil(n/10), fixed seed, 20 iterations). A delta
// encoding against a known checkpoint carries only (id, version) references
// for unchanged critical items.

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "devneg/bytes.hpp"
#include "devneg/hash.hpp"
#include "devneg/rng.hpp"

namespace devneg::codec {

inline constexpr int kEmbedDim = 64;
inline constexpr size_t kRecentEmbeddingsKept = 50;
using Embedding = Eigen::Matrix<float, kEmbedDim, 1>;

enum class ItemClass : uint8_t {
    message = 0,
    active_offer = 1,
    embedding = 2,
    plan = 3,
    counterparty_stat = 4,
};

struct StateItem {
    uint64_t id = 0;
    ItemClass klass = ItemClass::message;
    uint32_t created_at = 0;  // round index
    uint32_t version = 1;
    Bytes payload;
    std::optional<Embedding> embedding;

    bool operator==(const StateItem& o) const;
    Bytes canonical_bytes() const;
};

struct ImportanceParams {
    double tau = 0.5;                 // in [0,1]
    double recency_half_life = 8.0;   // rounds
    double recency_weight = 0.5;      // weights are >= 0 and sum to 1
    double relevance_weight = 0.5;
};

void validate(const ImportanceParams& p);

double importance(const StateItem& item, const Embedding& goal,
                  const ImportanceParams& params, uint32_t now_round);

struct SummaryItem {
    ItemClass klass = ItemClass::message;
    uint64_t count = 0;
    uint32_t min_round = 0;
    uint32_t max_round = 0;
    Hash256 rolling_digest;
    bool has_mean_embedding = false;
    Embedding mean_embedding = Embedding::Zero();
};

struct Centroid {
    Embedding vec = Embedding::Zero();
    uint32_t member_count = 0;
};

struct CompressedState {
    std::vector<StateItem> critical;
    std::vector<SummaryItem> summaries;
    std::vector<Centroid> pruned_embedding_centroids;
    uint64_t delta_base = 0;  // checkpoint id, 0 = full encoding
    std::vector<std::pair<uint64_t, uint32_t>> carried;  // (id, version) in base
    std::vector<uint64_t> continuity_ids;  // active offers + last 3 messages
    bool dangling_base_warning = false;
};

// Checkpoints a restore side can resolve delta references against.
struct BaseStore {
    std::map<uint64_t, std::vector<StateItem>> checkpoints;
};

CompressedState compress(const std::vector<StateItem>& state,
                         const ImportanceParams& params, const Embedding& goal,
                         uint32_t now_round,
                         std::optional<uint64_t> delta_base = std::nullopt,
                         const BaseStore* store = nullptr);

struct Restored {
    std::vector<StateItem> stm;       // critical items, bit-exact
    std::vector<SummaryItem> ltm;     // summarized history
    std::vector<Centroid> centroids;  // pruned embedding space
    bool continuity = false;
};

// Throws std::runtime_error when a referenced delta base cannot be resolved.
Restored restore(const CompressedState& c, const BaseStore* store = nullptr);

// Container bytes: "DNSC" | u8 version | u8 flags | u64 delta_base |
// length-prefixed sections (criticals, summaries, centroids, carried,
// continuity ids).
Bytes encode(const CompressedState& c);
CompressedState decode(ByteView data);

size_t raw_size(const std::vector<StateItem>& state);

// Synthetic session state whose importance distribution is shaped so that
// the tier presets (tau = 0.35 / 0.5 / 0.65) land on the expected
// compression levels; used by the harness, the benchmarks and the tests.
struct SyntheticState {
    std::vector<StateItem> items;
    Embedding goal;
    uint32_t now_round = 0;
};
SyntheticState make_synthetic_state(size_t target_bytes, uint64_t seed);

}  // namespace devneg::codec
