#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "infs/dataset.hpp"
#include "infs/errors.hpp"
#include "infs/json_io.hpp"
#include "infs/micc.hpp"

namespace infs {

constexpr int kBatchStateSchemaVersion = 1;
constexpr double kDefaultAlpha = 0.8;

// The scoring knobs a ranked list was produced under. Lists scored under
// different bins or rank semantics are not comparable and must not merge.
struct ConfigSnapshot {
    int bins = kDefaultBins;
    double rho = kDefaultRho;
    double alpha = kDefaultAlpha;
    RankSemantics rank_semantics = RankSemantics::order;
    AvgCorrDivisor avg_corr_divisor = AvgCorrDivisor::full_dimension;

    bool operator==(const ConfigSnapshot&) const = default;
};

// Per-batch ranking persisted so a later merge never re-scans old data.
struct BatchState {
    std::string batch_id;
    std::uint64_t arrival_ordinal = 0;
    RankedList ranked;  // the batch's F'
    std::map<std::string, ColumnStats> preprocessing_stats;
    ConfigSnapshot config;

    bool operator==(const BatchState&) const = default;
};

inline bool operator==(const ColumnStats& a, const ColumnStats& b) {
    return a.min == b.min && a.max == b.max && a.mean == b.mean;
}

enum class Provenance { common, old_high_rank, new_high_rank };

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::common: return "common";
        case Provenance::old_high_rank: return "old-high-rank";
        case Provenance::new_high_rank: return "new-high-rank";
    }
    return "";
}

struct MergeResult {
    std::set<std::string> f_common;
    std::set<std::string> f_old;
    std::set<std::string> f_new;
    std::vector<std::string> f_d;  // ordered union
    std::map<std::string, Provenance> provenance;
};

namespace detail {

inline void check_mergeable(const ConfigSnapshot& a, const ConfigSnapshot& b) {
    if (a.bins != b.bins) {
        throw ConfigMismatch("merge: batch states scored with different bins (" +
                             std::to_string(a.bins) + " vs " + std::to_string(b.bins) + ")");
    }
    if (a.rank_semantics != b.rank_semantics) {
        throw ConfigMismatch("merge: batch states use different rank semantics (" +
                             to_string(a.rank_semantics) + " vs " + to_string(b.rank_semantics) + ")");
    }
}

inline std::set<std::string> high_rank_set(const RankedList& list, double alpha,
                                           RankSemantics semantics) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        if (threshold_statistic(list, i, semantics) >= alpha) out.insert(list.entries[i].name);
    }
    return out;
}

}  // namespace detail

// Combines two batches' F' subsets: the intersection always survives, and
// batch-unique features survive when their rank statistic clears alpha.
// Ordering of the union: common features by the better of their two
// normalized ranks, then batch-unique features by their own normalized
// rank, ties by name.
inline MergeResult merge(const BatchState& old_state, const BatchState& new_state, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("merge: alpha must be in (0,1)");
    detail::check_mergeable(old_state.config, new_state.config);

    const RankedList& old_ranked = old_state.ranked;
    const RankedList& new_ranked = new_state.ranked;
    RankSemantics semantics = old_state.config.rank_semantics;

    MergeResult result;
    for (const auto& e : old_ranked.entries) {
        if (new_ranked.find(e.name)) result.f_common.insert(e.name);
    }
    result.f_old = detail::high_rank_set(old_ranked, alpha, semantics);
    result.f_new = detail::high_rank_set(new_ranked, alpha, semantics);

    struct OrderKey {
        double rank;
        std::string name;
    };
    std::vector<OrderKey> common_keys, unique_keys;
    for (const auto& name : result.f_common) {
        double r_old = old_ranked.find(name)->normalized_rank;
        double r_new = new_ranked.find(name)->normalized_rank;
        common_keys.push_back({std::max(r_old, r_new), name});
        result.provenance[name] = Provenance::common;
    }
    for (const auto& name : result.f_old) {
        if (result.f_common.count(name)) continue;
        unique_keys.push_back({old_ranked.find(name)->normalized_rank, name});
        result.provenance[name] = Provenance::old_high_rank;
    }
    for (const auto& name : result.f_new) {
        if (result.f_common.count(name)) continue;
        unique_keys.push_back({new_ranked.find(name)->normalized_rank, name});
        result.provenance[name] = Provenance::new_high_rank;
    }
    auto by_rank_then_name = [](const OrderKey& a, const OrderKey& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        return a.name < b.name;
    };
    std::sort(common_keys.begin(), common_keys.end(), by_rank_then_name);
    std::sort(unique_keys.begin(), unique_keys.end(), by_rank_then_name);
    for (const auto& k : common_keys) result.f_d.push_back(k.name);
    for (const auto& k : unique_keys) result.f_d.push_back(k.name);
    return result;
}

namespace detail {

// Rebuilds a pseudo-batch from a merge result so the fold can continue.
// Each feature carries its score entry from whichever input ranked it
// higher; normalized ranks are recomputed over the merged order.
inline BatchState merged_as_state(const MergeResult& result, const BatchState& old_state,
                                  const BatchState& new_state) {
    BatchState state;
    state.batch_id = old_state.batch_id + "+" + new_state.batch_id;
    state.arrival_ordinal = new_state.arrival_ordinal;
    state.config = new_state.config;
    state.preprocessing_stats = old_state.preprocessing_stats;
    for (const auto& [name, stats] : new_state.preprocessing_stats) {
        state.preprocessing_stats[name] = stats;  // newer batch wins
    }
    for (const auto& name : result.f_d) {
        const FeatureScore* from_old = old_state.ranked.find(name);
        const FeatureScore* from_new = new_state.ranked.find(name);
        const FeatureScore* best = from_old;
        if (!best || (from_new && from_new->normalized_rank > best->normalized_rank)) {
            best = from_new;
        }
        state.ranked.entries.push_back(*best);
    }
    assign_normalized_ranks(state.ranked);
    return state;
}

}  // namespace detail

// Left-fold of merge over a batch sequence: the merged list of batches
// 1..k plays the "old" role against batch k+1, so old data is never
// rescanned. Arrival ordinals must strictly increase.
inline MergeResult fold_in(const std::vector<BatchState>& states, double alpha) {
    if (states.empty()) throw ValidationError("fold_in: empty state sequence");
    for (std::size_t i = 1; i < states.size(); ++i) {
        if (states[i].arrival_ordinal <= states[i - 1].arrival_ordinal) {
            throw ValidationError("fold_in: arrival ordinals must strictly increase");
        }
    }
    if (states.size() == 1) return merge(states[0], states[0], alpha);

    MergeResult result = merge(states[0], states[1], alpha);
    BatchState accumulated = detail::merged_as_state(result, states[0], states[1]);
    for (std::size_t i = 2; i < states.size(); ++i) {
        result = merge(accumulated, states[i], alpha);
        accumulated = detail::merged_as_state(result, accumulated, states[i]);
    }
    return result;
}

// --- persistence ------------------------------------------------------

inline nlohmann::json to_json(const ConfigSnapshot& c) {
    return {{"bins", c.bins},
            {"rho", c.rho},
            {"alpha", c.alpha},
            {"rank_semantics", to_string(c.rank_semantics)},
            {"avg_corr_divisor", to_string(c.avg_corr_divisor)}};
}

inline nlohmann::json to_json(const FeatureScore& e) {
    return {{"name", e.name},
            {"index", e.index},
            {"relevance", e.relevance},
            {"avg_corr", e.avg_corr},
            {"denominator", e.denominator},
            {"micc_ud", e.micc_ud},
            {"normalized_rank", e.normalized_rank},
            {"clamped", e.clamped}};
}

inline nlohmann::json to_json(const BatchState& s) {
    nlohmann::json ranked = nlohmann::json::array();
    for (const auto& e : s.ranked.entries) ranked.push_back(to_json(e));
    nlohmann::json stats = nlohmann::json::object();
    for (const auto& [name, cs] : s.preprocessing_stats) {
        stats[name] = {{"min", cs.min}, {"max", cs.max}, {"mean", cs.mean}};
    }
    return {{"schema_version", kBatchStateSchemaVersion},
            {"batch_id", s.batch_id},
            {"arrival_ordinal", s.arrival_ordinal},
            {"normalization", "per-batch"},
            {"config_snapshot", to_json(s.config)},
            {"ranked", ranked},
            {"preprocessing_stats", stats}};
}

inline nlohmann::json to_json(const MergeResult& r) {
    nlohmann::json prov = nlohmann::json::object();
    for (const auto& [name, p] : r.provenance) prov[name] = to_string(p);
    return {{"f_common", r.f_common},
            {"f_old", r.f_old},
            {"f_new", r.f_new},
            {"f_d", r.f_d},
            {"provenance", prov}};
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaViolation(std::string("batch state: missing field \"") + key + "\"");
    return *it;
}

inline double require_number(const nlohmann::json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number()) throw SchemaViolation(std::string("batch state: field \"") + key + "\" is not a number");
    return v.get<double>();
}

}  // namespace detail

inline BatchState batch_state_from_json(const nlohmann::json& j) {
    using detail::require;
    using detail::require_number;
    if (!j.is_object()) throw SchemaViolation("batch state: not a JSON object");
    int version = static_cast<int>(require_number(j, "schema_version"));
    if (version != kBatchStateSchemaVersion) {
        throw SchemaViolation("batch state: unsupported schema_version " + std::to_string(version));
    }
    BatchState s;
    const auto& id = require(j, "batch_id");
    if (!id.is_string()) throw SchemaViolation("batch state: batch_id is not a string");
    s.batch_id = id.get<std::string>();
    s.arrival_ordinal = static_cast<std::uint64_t>(require_number(j, "arrival_ordinal"));

    const auto& cfg = require(j, "config_snapshot");
    if (!cfg.is_object()) throw SchemaViolation("batch state: config_snapshot is not an object");
    s.config.bins = static_cast<int>(require_number(cfg, "bins"));
    s.config.rho = require_number(cfg, "rho");
    s.config.alpha = require_number(cfg, "alpha");
    s.config.rank_semantics =
        rank_semantics_from_string(require(cfg, "rank_semantics").get<std::string>());
    s.config.avg_corr_divisor =
        avg_corr_divisor_from_string(require(cfg, "avg_corr_divisor").get<std::string>());

    const auto& ranked = require(j, "ranked");
    if (!ranked.is_array() || ranked.empty()) {
        throw SchemaViolation("batch state: \"ranked\" must be a non-empty array");
    }
    for (const auto& ej : ranked) {
        FeatureScore e;
        const auto& name = require(ej, "name");
        if (!name.is_string()) throw SchemaViolation("batch state: entry name is not a string");
        e.name = name.get<std::string>();
        e.index = static_cast<std::size_t>(require_number(ej, "index"));
        e.relevance = require_number(ej, "relevance");
        e.avg_corr = require_number(ej, "avg_corr");
        e.denominator = require_number(ej, "denominator");
        e.micc_ud = require_number(ej, "micc_ud");
        e.normalized_rank = require_number(ej, "normalized_rank");
        e.clamped = require(ej, "clamped").get<bool>();
        s.ranked.entries.push_back(std::move(e));
    }
    // Ranked-list invariants must survive the round trip.
    double n = static_cast<double>(s.ranked.entries.size());
    for (std::size_t i = 0; i < s.ranked.entries.size(); ++i) {
        const auto& e = s.ranked.entries[i];
        if (i > 0 && e.micc_ud > s.ranked.entries[i - 1].micc_ud) {
            throw SchemaViolation("batch state: ranked scores are not non-increasing");
        }
        double expected = 1.0 - static_cast<double>(i) / n;
        if (std::abs(e.normalized_rank - expected) > 1e-12) {
            throw SchemaViolation("batch state: normalized_rank inconsistent at position " +
                                  std::to_string(i + 1));
        }
    }

    const auto& stats = require(j, "preprocessing_stats");
    if (!stats.is_object()) throw SchemaViolation("batch state: preprocessing_stats is not an object");
    for (const auto& [name, v] : stats.items()) {
        ColumnStats cs;
        cs.min = require_number(v, "min");
        cs.max = require_number(v, "max");
        cs.mean = require_number(v, "mean");
        s.preprocessing_stats[name] = cs;
    }
    return s;
}

inline void save_state(const BatchState& state, const std::string& path) {
    save_json_file(path, to_json(state));
}

inline BatchState load_state(const std::string& path) {
    return batch_state_from_json(load_json_file(path));
}

}  // namespace infs
