#include "devneg/state_codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace devneg::codec {

bool StateItem::operator==(const StateItem& o) const {
    if (id != o.id || klass != o.klass || created_at != o.created_at ||
        version != o.version || payload != o.payload)
        return false;
    if (embedding.has_value() != o.embedding.has_value()) return false;
    if (embedding && embedding->cwiseEqual(*o.embedding).count() != kEmbedDim)
        return false;
    return true;
}

Bytes StateItem::canonical_bytes() const {
    ByteWriter w;
    w.u64be(id);
    w.u8(uint8_t(klass));
    w.u32be(created_at);
    w.u32be(version);
    w.lp(payload);
    w.u8(embedding ? 1 : 0);
    if (embedding) {
        for (int i = 0; i < kEmbedDim; ++i) {
            uint32_t bits;
            float f = (*embedding)(i);
            std::memcpy(&bits, &f, 4);
            w.u32be(bits);
        }
    }
    return w.take();
}

void validate(const ImportanceParams& p) {
    if (p.tau < 0.0 || p.tau > 1.0) throw std::invalid_argument("tau outside [0,1]");
    if (p.recency_weight < 0 || p.relevance_weight < 0)
        throw std::invalid_argument("importance weights must be non-negative");
    if (std::abs(p.recency_weight + p.relevance_weight - 1.0) > 1e-9)
        throw std::invalid_argument("importance weights must sum to 1");
    if (!(p.recency_half_life > 0))
        throw std::invalid_argument("half life must be positive");
}

double importance(const StateItem& item, const Embedding& goal,
                  const ImportanceParams& params, uint32_t now_round) {
    validate(params);
    if (item.klass == ItemClass::active_offer) return 1.0;
    const double age =
        now_round >= item.created_at ? double(now_round - item.created_at) : 0.0;
    const double recency = std::exp2(-age / params.recency_half_life);
    double relevance = 0.0;
    if (item.embedding) {
        const double ni = item.embedding->norm();
        const double ng = goal.norm();
        if (ni > 0 && ng > 0)
            relevance = std::max(0.0, double(item.embedding->dot(goal)) / (ni * ng));
    }
    return params.recency_weight * recency + params.relevance_weight * relevance;
}

namespace {

std::vector<Centroid> cluster_embeddings(const std::vector<Embedding>& members) {
    std::vector<Centroid> out;
    if (members.empty()) return out;
    const size_t k = (members.size() + 9) / 10;  // ceil(n/10)
    std::vector<Embedding> centers(k);
    for (size_t c = 0; c < k; ++c) centers[c] = members[c * members.size() / k];

    std::vector<size_t> assign(members.size(), 0);
    for (int iter = 0; iter < 20; ++iter) {
        for (size_t i = 0; i < members.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (size_t c = 0; c < k; ++c) {
                double d = (members[i] - centers[c]).squaredNorm();
                if (d < best) {
                    best = d;
                    assign[i] = c;
                }
            }
        }
        std::vector<Embedding> sums(k, Embedding::Zero());
        std::vector<uint32_t> counts(k, 0);
        for (size_t i = 0; i < members.size(); ++i) {
            sums[assign[i]] += members[i];
            ++counts[assign[i]];
        }
        for (size_t c = 0; c < k; ++c)
            if (counts[c] > 0) centers[c] = sums[c] / float(counts[c]);
        // empty clusters keep their previous center
    }
    std::vector<uint32_t> counts(k, 0);
    for (size_t a : assign) ++counts[a];
    for (size_t c = 0; c < k; ++c)
        if (counts[c] > 0) out.push_back({centers[c], counts[c]});
    return out;
}

Hash256 chain_digest(const Hash256& prev, const StateItem& item) {
    Sha256 h;
    h.update(prev);
    h.update(item.canonical_bytes());
    return h.finish();
}

}  // namespace

CompressedState compress(const std::vector<StateItem>& state,
                         const ImportanceParams& params, const Embedding& goal,
                         uint32_t now_round, std::optional<uint64_t> delta_base,
                         const BaseStore* store) {
    validate(params);
    CompressedState out;

    // Continuity set: every active offer plus the three most recent messages.
    {
        std::vector<const StateItem*> msgs;
        for (const auto& it : state) {
            if (it.klass == ItemClass::active_offer) out.continuity_ids.push_back(it.id);
            if (it.klass == ItemClass::message) msgs.push_back(&it);
        }
        std::sort(msgs.begin(), msgs.end(), [](const StateItem* a, const StateItem* b) {
            return a->created_at != b->created_at ? a->created_at > b->created_at
                                                  : a->id > b->id;
        });
        for (size_t i = 0; i < msgs.size() && i < 3; ++i)
            out.continuity_ids.push_back(msgs[i]->id);
    }

    std::vector<const StateItem*> pruned_embeddings;
    std::map<ItemClass, SummaryItem> summaries;
    std::map<ItemClass, std::pair<Embedding, uint64_t>> summary_embeds;

    for (const auto& item : state) {
        const double score = importance(item, goal, params, now_round);
        if (score > params.tau) {
            out.critical.push_back(item);
            continue;
        }
        if (item.klass == ItemClass::embedding && item.embedding) {
            pruned_embeddings.push_back(&item);
            continue;
        }
        SummaryItem& s = summaries
                             .try_emplace(item.klass, SummaryItem{item.klass, 0,
                                                                  item.created_at,
                                                                  item.created_at,
                                                                  Hash256{}, false,
                                                                  Embedding::Zero()})
                             .first->second;
        ++s.count;
        s.min_round = std::min(s.min_round, item.created_at);
        s.max_round = std::max(s.max_round, item.created_at);
        s.rolling_digest = chain_digest(s.rolling_digest, item);
        if (item.embedding) {
            auto& [sum, cnt] = summary_embeds[item.klass];
            sum += *item.embedding;
            ++cnt;
        }
    }
    for (auto& [klass, s] : summaries) {
        auto it = summary_embeds.find(klass);
        if (it != summary_embeds.end() && it->second.second > 0) {
            s.has_mean_embedding = true;
            s.mean_embedding = it->second.first / float(it->second.second);
        }
        out.summaries.push_back(s);
    }

    // Newest 50 pruned embeddings survive as exact singletons, older ones
    // are clustered.
    std::sort(pruned_embeddings.begin(), pruned_embeddings.end(),
              [](const StateItem* a, const StateItem* b) {
                  return a->created_at != b->created_at ? a->created_at > b->created_at
                                                        : a->id > b->id;
              });
    std::vector<Embedding> older;
    for (size_t i = 0; i < pruned_embeddings.size(); ++i) {
        if (i < kRecentEmbeddingsKept)
            out.pruned_embedding_centroids.push_back({*pruned_embeddings[i]->embedding, 1});
        else
            older.push_back(*pruned_embeddings[i]->embedding);
    }
    for (auto& c : cluster_embeddings(older)) out.pruned_embedding_centroids.push_back(c);

    // Delta pass: replace critical items unchanged since the base with
    // (id, version) references.
    if (delta_base) {
        const std::vector<StateItem>* base = nullptr;
        if (store) {
            auto it = store->checkpoints.find(*delta_base);
            if (it != store->checkpoints.end()) base = &it->second;
        }
        if (!base) {
            out.dangling_base_warning = true;  // fall back to full encoding
        } else {
            out.delta_base = *delta_base;
            std::map<uint64_t, const StateItem*> by_id;
            for (const auto& it : *base) by_id[it.id] = &it;
            std::vector<StateItem> kept;
            for (auto& item : out.critical) {
                auto it = by_id.find(item.id);
                if (it != by_id.end() && *it->second == item)
                    out.carried.emplace_back(item.id, item.version);
                else
                    kept.push_back(std::move(item));
            }
            out.critical = std::move(kept);
        }
    }
    return out;
}

Restored restore(const CompressedState& c, const BaseStore* store) {
    Restored r;
    r.stm = c.critical;
    if (c.delta_base != 0) {
        if (!store) throw std::runtime_error("delta restore requires a base store");
        auto it = store->checkpoints.find(c.delta_base);
        if (it == store->checkpoints.end())
            throw std::runtime_error("missing delta base checkpoint " +
                                     std::to_string(c.delta_base));
        std::map<uint64_t, const StateItem*> by_id;
        for (const auto& item : it->second) by_id[item.id] = &item;
        for (const auto& [id, version] : c.carried) {
            auto f = by_id.find(id);
            if (f == by_id.end() || f->second->version != version)
                throw std::runtime_error("carried item not present in base: " +
                                         std::to_string(id));
            r.stm.push_back(*f->second);
        }
    }
    std::sort(r.stm.begin(), r.stm.end(),
              [](const StateItem& a, const StateItem& b) { return a.id < b.id; });
    r.ltm = c.summaries;
    r.centroids = c.pruned_embedding_centroids;

    r.continuity = true;
    for (uint64_t id : c.continuity_ids) {
        bool found = false;
        for (const auto& item : r.stm)
            if (item.id == id) {
                found = true;
                break;
            }
        if (!found) {
            r.continuity = false;
            break;
        }
    }
    return r;
}

namespace {
constexpr char kMagic[4] = {'D', 'N', 'S', 'C'};

void write_embedding(ByteWriter& w, const Embedding& e) {
    for (int i = 0; i < kEmbedDim; ++i) {
        uint32_t bits;
        float f = e(i);
        std::memcpy(&bits, &f, 4);
        w.u32be(bits);
    }
}

Embedding read_embedding(ByteReader& r) {
    Embedding e;
    for (int i = 0; i < kEmbedDim; ++i) {
        uint32_t bits = r.u32be();
        float f;
        std::memcpy(&f, &bits, 4);
        e(i) = f;
    }
    return e;
}
}  // namespace

Bytes encode(const CompressedState& c) {
    ByteWriter w;
    w.raw(kMagic, 4);
    w.u8(1);  // version
    w.u8(uint8_t((c.delta_base != 0 ? 1 : 0) | (c.dangling_base_warning ? 2 : 0)));
    w.u64be(c.delta_base);

    w.u32be(uint32_t(c.critical.size()));
    for (const auto& item : c.critical) w.lp(item.canonical_bytes());

    w.u32be(uint32_t(c.summaries.size()));
    for (const auto& s : c.summaries) {
        w.u8(uint8_t(s.klass));
        w.u64be(s.count);
        w.u32be(s.min_round);
        w.u32be(s.max_round);
        w.raw(s.rolling_digest.view());
        w.u8(s.has_mean_embedding ? 1 : 0);
        if (s.has_mean_embedding) write_embedding(w, s.mean_embedding);
    }

    w.u32be(uint32_t(c.pruned_embedding_centroids.size()));
    for (const auto& cen : c.pruned_embedding_centroids) {
        write_embedding(w, cen.vec);
        w.u32be(cen.member_count);
    }

    w.u32be(uint32_t(c.carried.size()));
    for (const auto& [id, version] : c.carried) {
        w.u64be(id);
        w.u32be(version);
    }

    w.u32be(uint32_t(c.continuity_ids.size()));
    for (uint64_t id : c.continuity_ids) w.u64be(id);
    return w.take();
}

namespace {
StateItem parse_item(ByteView canonical) {
    ByteReader r(canonical);
    StateItem item;
    item.id = r.u64be();
    uint8_t klass = r.u8();
    if (klass > 4) throw DecodeError("bad item class");
    item.klass = ItemClass(klass);
    item.created_at = r.u32be();
    item.version = r.u32be();
    item.payload = r.lp();
    if (r.u8() == 1) item.embedding = read_embedding(r);
    r.expect_done();
    return item;
}
}  // namespace

CompressedState decode(ByteView data) {
    ByteReader r(data);
    ByteView magic = r.raw(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw DecodeError("bad codec magic");
    if (r.u8() != 1) throw DecodeError("unsupported codec version");
    uint8_t flags = r.u8();
    CompressedState c;
    c.dangling_base_warning = (flags & 2) != 0;
    c.delta_base = r.u64be();

    uint32_t n_crit = r.u32be();
    for (uint32_t i = 0; i < n_crit; ++i) c.critical.push_back(parse_item(r.lp()));

    uint32_t n_sum = r.u32be();
    for (uint32_t i = 0; i < n_sum; ++i) {
        SummaryItem s;
        uint8_t klass = r.u8();
        if (klass > 4) throw DecodeError("bad summary class");
        s.klass = ItemClass(klass);
        s.count = r.u64be();
        s.min_round = r.u32be();
        s.max_round = r.u32be();
        std::memcpy(s.rolling_digest.v.data(), r.raw(32).data(), 32);
        s.has_mean_embedding = r.u8() == 1;
        if (s.has_mean_embedding) s.mean_embedding = read_embedding(r);
        c.summaries.push_back(s);
    }

    uint32_t n_cen = r.u32be();
    for (uint32_t i = 0; i < n_cen; ++i) {
        Centroid cen;
        cen.vec = read_embedding(r);
        cen.member_count = r.u32be();
        c.pruned_embedding_centroids.push_back(cen);
    }

    uint32_t n_car = r.u32be();
    for (uint32_t i = 0; i < n_car; ++i) {
        uint64_t id = r.u64be();
        uint32_t version = r.u32be();
        c.carried.emplace_back(id, version);
    }

    uint32_t n_cont = r.u32be();
    for (uint32_t i = 0; i < n_cont; ++i) c.continuity_ids.push_back(r.u64be());
    r.expect_done();
    return c;
}

size_t raw_size(const std::vector<StateItem>& state) {
    size_t total = 0;
    for (const auto& item : state) total += item.canonical_bytes().size();
    return total;
}

SyntheticState make_synthetic_state(size_t target_bytes, uint64_t seed) {
    Rng rng(seed);
    SyntheticState st;
    st.now_round = 40;
    st.goal = Embedding::Zero();
    st.goal(0) = 1.0f;

    // Inverse of the piecewise-linear importance CDF through
    // (0,0) (0.35,0.70) (0.5,0.78) (0.65,0.85) (1,1): tau presets 0.35 /
    // 0.5 / 0.65 prune 70 / 78 / 85 percent of the mass.
    auto sample_importance = [&rng]() {
        double u = rng.uniform01();
        if (u < 0.70) return 0.35 * u / 0.70;
        if (u < 0.78) return 0.35 + 0.15 * (u - 0.70) / 0.08;
        if (u < 0.85) return 0.50 + 0.15 * (u - 0.78) / 0.07;
        return 0.65 + 0.35 * (u - 0.85) / 0.15;
    };

    const ImportanceParams ref;  // weights 0.5/0.5, half life 8
    uint64_t next_id = 1;
    size_t bytes = 0;

    // Two active offers; always critical, negligible bytes.
    for (int i = 0; i < 2; ++i) {
        StateItem it;
        it.id = next_id++;
        it.klass = ItemClass::active_offer;
        it.created_at = st.now_round - uint32_t(i);
        it.payload.resize(64);
        rng.fill(it.payload.data(), it.payload.size());
        bytes += it.canonical_bytes().size();
        st.items.push_back(std::move(it));
    }

    while (bytes < target_bytes) {
        StateItem it;
        it.id = next_id++;
        const double pick = rng.uniform01();
        if (pick < 0.06) {
            it.klass = ItemClass::embedding;
            it.payload.resize(32);
        } else if (pick < 0.10) {
            it.klass = ItemClass::counterparty_stat;
            it.payload.resize(256 + rng.below(256));
        } else if (pick < 0.45) {
            it.klass = ItemClass::plan;
            it.payload.resize(2048 + rng.below(4096));
        } else {
            it.klass = ItemClass::message;
            it.payload.resize(2048 + rng.below(4096));
        }
        rng.fill(it.payload.data(), it.payload.size());

        // Construct (age, cosine) to land exactly on the target importance.
        const double target = sample_importance();
        const double lo = std::max(1e-6, target - ref.relevance_weight);
        const double hi = std::min(ref.recency_weight, target);
        const double rec_term = lo + (hi - lo) * rng.uniform01();
        double age = -ref.recency_half_life * std::log2(rec_term / ref.recency_weight);
        age = std::clamp(age, 0.0, double(st.now_round));
        it.created_at = st.now_round - uint32_t(std::lround(age));
        const double cosine =
            std::clamp((target - ref.recency_weight *
                                     std::exp2(-age / ref.recency_half_life)) /
                           ref.relevance_weight,
                       0.0, 1.0);
        Embedding e = Embedding::Zero();
        // Unit vector at the chosen angle to the goal, orthogonal part
        // spread deterministically across the remaining axes.
        int axis = 1 + int(rng.below(kEmbedDim - 1));
        e(0) = float(cosine);
        e(axis) = float(std::sqrt(std::max(0.0, 1.0 - cosine * cosine)));
        it.embedding = e;

        bytes += it.canonical_bytes().size();
        st.items.push_back(std::move(it));
    }
    return st;
}

}  // namespace devneg::codec
