#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <string>
#include <vector>

#include "infs/dataset.hpp"
#include "infs/errors.hpp"
#include "infs/estimators.hpp"
#include "infs/parallel.hpp"

namespace infs {

constexpr double kDenomEpsilon = 1e-9;
constexpr double kDefaultRho = 0.5;

// How the alpha threshold of the merge step reads a ranked list: "order"
// thresholds the normalized rank statistic, "score" thresholds the
// min-max-normalized score.
enum class RankSemantics { order, score };

inline std::string to_string(RankSemantics s) {
    return s == RankSemantics::order ? "order" : "score";
}

inline RankSemantics rank_semantics_from_string(const std::string& s) {
    if (s == "order") return RankSemantics::order;
    if (s == "score") return RankSemantics::score;
    throw ValidationError("rank_semantics must be \"order\" or \"score\", got \"" + s + "\"");
}

struct FeatureScore {
    std::string name;
    std::size_t index = 0;         // original column index
    double relevance = 0.0;        // MI(f, C) in bits
    double avg_corr = 0.0;
    double denominator = 0.0;      // max gap after clamping
    double micc_ud = 0.0;
    double normalized_rank = 0.0;  // filled by rank_features
    bool clamped = false;          // denominator hit the epsilon floor

    bool operator==(const FeatureScore&) const = default;
};

// Features ordered by score descending, ties broken by ascending original
// column index. normalized_rank of the feature at 1-based position p over n
// entries is 1 - (p-1)/n: the top feature gets 1.0, ranks strictly decrease
// and stay positive.
struct RankedList {
    std::vector<FeatureScore> entries;

    bool operator==(const RankedList&) const = default;

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(entries.size());
        for (const auto& e : entries) out.push_back(e.name);
        return out;
    }

    const FeatureScore* find(const std::string& name) const {
        for (const auto& e : entries) {
            if (e.name == name) return &e;
        }
        return nullptr;
    }
};

inline void assign_normalized_ranks(RankedList& list) {
    double n = static_cast<double>(list.entries.size());
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        list.entries[i].normalized_rank = 1.0 - static_cast<double>(i) / n;
    }
}

// The statistic compared against alpha for one entry, under the configured
// semantics. Under score semantics a constant score column normalizes to 1
// so every feature qualifies.
inline double threshold_statistic(const RankedList& list, std::size_t i, RankSemantics semantics) {
    if (semantics == RankSemantics::order) return list.entries[i].normalized_rank;
    double lo = list.entries.front().micc_ud;
    double hi = lo;
    for (const auto& e : list.entries) {
        lo = std::min(lo, e.micc_ud);
        hi = std::max(hi, e.micc_ud);
    }
    if (hi == lo) return 1.0;
    return (list.entries[i].micc_ud - lo) / (hi - lo);
}

// Per-feature mutual information with the class labels.
inline std::vector<double> relevance_vector(const Dataset& d, int bins = kDefaultBins) {
    std::vector<double> relevance(d.n_cols());
    parallel_for(d.n_cols(), [&](std::size_t i) {
        relevance[i] = mutual_information(discretize(d.columns[i].values, bins), d.labels);
    });
    return relevance;
}

// Score(f_i) = relevance(f_i) / max_{j != i}(avg_corr(f_i) - |corr(f_i,f_j)|).
// The max gap equals avg_corr minus the smallest pairwise correlation. With
// the full-dimension divisor the gap can reach zero or go negative (all
// pairwise correlations equal); such denominators are clamped to
// denom_epsilon and flagged.
inline std::vector<FeatureScore> micc_ud_scores(
    const std::vector<double>& relevance, const CorrelationMatrix& corr,
    AvgCorrDivisor divisor = AvgCorrDivisor::full_dimension,
    double denom_epsilon = kDenomEpsilon) {
    if (corr.dim < 2) throw ValidationError("micc_ud_scores: need at least 2 features");
    if (relevance.size() != corr.dim) {
        throw ValidationError("micc_ud_scores: relevance/correlation dimension mismatch");
    }
    std::vector<FeatureScore> scores(corr.dim);
    for (std::size_t i = 0; i < corr.dim; ++i) {
        FeatureScore& s = scores[i];
        s.name = corr.feature_names[i];
        s.index = i;
        s.relevance = relevance[i];
        s.avg_corr = avg_abs_corr(corr, i, divisor);
        double min_corr = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < corr.dim; ++j) {
            if (j != i) min_corr = std::min(min_corr, corr.at(i, j));
        }
        double gap = s.avg_corr - min_corr;
        if (gap < denom_epsilon) {
            s.denominator = denom_epsilon;
            s.clamped = true;
            std::cerr << "warning: degenerate score denominator for feature \"" << s.name
                      << "\" (gap " << gap << "), clamped to " << denom_epsilon << "\n";
        } else {
            s.denominator = gap;
        }
        s.micc_ud = s.relevance / s.denominator;
    }
    return scores;
}

inline RankedList rank_features(std::vector<FeatureScore> scores) {
    if (scores.empty()) throw ValidationError("rank_features: empty score sequence");
    std::stable_sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
        if (a.micc_ud != b.micc_ud) return a.micc_ud > b.micc_ud;
        return a.index < b.index;
    });
    RankedList list{std::move(scores)};
    assign_normalized_ranks(list);
    return list;
}

// Top ceil(rho * n) entries, ranks recomputed over the retained set.
inline RankedList select_batch_subset(const RankedList& ranked, double rho = kDefaultRho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw ValidationError("select_batch_subset: rho must be in (0,1]");
    std::size_t keep = static_cast<std::size_t>(
        std::ceil(rho * static_cast<double>(ranked.entries.size())));
    keep = std::min(keep, ranked.entries.size());
    RankedList out;
    out.entries.assign(ranked.entries.begin(), ranked.entries.begin() + keep);
    assign_normalized_ranks(out);
    return out;
}

// Full per-batch pipeline: relevance + correlations -> scores -> ranking ->
// rho cut. Produces the batch's F'.
inline RankedList score_batch(const Dataset& d, int bins = kDefaultBins, double rho = kDefaultRho,
                              AvgCorrDivisor divisor = AvgCorrDivisor::full_dimension) {
    auto relevance = relevance_vector(d, bins);
    auto corr = CorrelationMatrix::build(d);
    return select_batch_subset(rank_features(micc_ud_scores(relevance, corr, divisor)), rho);
}

}  // namespace infs
