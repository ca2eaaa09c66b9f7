#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "infs/dataset.hpp"
#include "infs/errors.hpp"
#include "infs/estimators.hpp"
#include "infs/evaluate.hpp"
#include "infs/micc.hpp"

namespace infs {

constexpr double kDefaultMifsBeta = 0.5;

enum class SelectionMethod { micc, mifs, mrmr, anova_f, gini };

inline std::string to_string(SelectionMethod m) {
    switch (m) {
        case SelectionMethod::micc: return "micc";
        case SelectionMethod::mifs: return "mifs";
        case SelectionMethod::mrmr: return "mrmr";
        case SelectionMethod::anova_f: return "anova_f";
        default: return "gini";
    }
}

inline SelectionMethod selection_method_from_string(const std::string& s) {
    if (s == "micc") return SelectionMethod::micc;
    if (s == "mifs") return SelectionMethod::mifs;
    if (s == "mrmr") return SelectionMethod::mrmr;
    if (s == "anova_f") return SelectionMethod::anova_f;
    if (s == "gini") return SelectionMethod::gini;
    throw ValidationError("unknown selection method \"" + s +
                          "\" (expected micc, mifs, mrmr, anova_f or gini)");
}

namespace detail {

// Builds a ranking from per-feature statistics that are computed
// independently (no greedy interaction). Sort is descending, ties by
// ascending column index.
inline RankedList rank_by_statistic(const Dataset& d, const std::vector<double>& stat) {
    std::vector<FeatureScore> scores(d.n_cols());
    for (std::size_t i = 0; i < d.n_cols(); ++i) {
        scores[i].name = d.columns[i].name;
        scores[i].index = i;
        scores[i].micc_ud = stat[i];
    }
    return rank_features(std::move(scores));
}

}  // namespace detail

// Greedy MIFS: at each step pick argmax of I(f;C) - beta * sum_{s in S} I(f;s).
// The winning criterion value never rises from one step to the next (the new
// penalty term is nonnegative and the previous winner's old value bounded the
// step), so the stored scores are already non-increasing.
inline RankedList mifs_rank(const Dataset& d, int bins = kDefaultBins,
                            double beta = kDefaultMifsBeta) {
    if (d.n_cols() == 0) throw ValidationError("mifs_rank: no features");
    if (beta < 0.0) throw ValidationError("mifs_rank: beta must be >= 0");
    std::vector<std::vector<int>> disc(d.n_cols());
    std::vector<double> rel(d.n_cols());
    for (std::size_t i = 0; i < d.n_cols(); ++i) {
        disc[i] = discretize(d.columns[i].values, bins);
        rel[i] = mutual_information(disc[i], d.labels);
    }

    std::vector<FeatureScore> order;
    std::vector<bool> taken(d.n_cols(), false);
    std::vector<double> redundancy(d.n_cols(), 0.0);
    for (std::size_t step = 0; step < d.n_cols(); ++step) {
        std::size_t best = d.n_cols();
        double best_j = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < d.n_cols(); ++i) {
            if (taken[i]) continue;
            double j = rel[i] - beta * redundancy[i];
            if (best == d.n_cols() || j > best_j) {
                best = i;
                best_j = j;
            }
        }
        taken[best] = true;
        FeatureScore s;
        s.name = d.columns[best].name;
        s.index = best;
        s.relevance = rel[best];
        s.micc_ud = best_j;
        order.push_back(std::move(s));
        for (std::size_t i = 0; i < d.n_cols(); ++i) {
            if (!taken[i]) redundancy[i] += mutual_information(disc[i], disc[best]);
        }
    }
    RankedList list{std::move(order)};
    assign_normalized_ranks(list);
    return list;
}

// Greedy mRMR: argmax of I(f;C) - mean_{s in S} I(f;s). Unlike MIFS the
// winning value can rise between steps (the penalty is averaged), so the
// stored score is the running minimum of the criterion along the selection
// order. The selection order itself is untouched.
inline RankedList mrmr_rank(const Dataset& d, int bins = kDefaultBins) {
    if (d.n_cols() == 0) throw ValidationError("mrmr_rank: no features");
    std::vector<std::vector<int>> disc(d.n_cols());
    std::vector<double> rel(d.n_cols());
    for (std::size_t i = 0; i < d.n_cols(); ++i) {
        disc[i] = discretize(d.columns[i].values, bins);
        rel[i] = mutual_information(disc[i], d.labels);
    }

    std::vector<FeatureScore> order;
    std::vector<bool> taken(d.n_cols(), false);
    std::vector<double> redundancy(d.n_cols(), 0.0);
    double envelope = std::numeric_limits<double>::infinity();
    for (std::size_t step = 0; step < d.n_cols(); ++step) {
        std::size_t best = d.n_cols();
        double best_j = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < d.n_cols(); ++i) {
            if (taken[i]) continue;
            double penalty = step == 0 ? 0.0 : redundancy[i] / static_cast<double>(step);
            double j = rel[i] - penalty;
            if (best == d.n_cols() || j > best_j) {
                best = i;
                best_j = j;
            }
        }
        taken[best] = true;
        envelope = std::min(envelope, best_j);
        FeatureScore s;
        s.name = d.columns[best].name;
        s.index = best;
        s.relevance = rel[best];
        s.micc_ud = envelope;
        order.push_back(std::move(s));
        for (std::size_t i = 0; i < d.n_cols(); ++i) {
            if (!taken[i]) redundancy[i] += mutual_information(disc[i], disc[best]);
        }
    }
    RankedList list{std::move(order)};
    assign_normalized_ranks(list);
    return list;
}

// One-way F statistic for the two label groups. Zero within-group variance
// with distinct group means gives +infinity, which sorts first.
inline double anova_f_statistic(const std::vector<double>& column, const std::vector<int>& labels) {
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < column.size(); ++i) {
        sum[labels[i]] += column[i];
        ++count[labels[i]];
    }
    if (count[0] == 0 || count[1] == 0) {
        throw ValidationError("anova_f_statistic: both classes must be present");
    }
    double mean[2] = {sum[0] / count[0], sum[1] / count[1]};
    double grand = (sum[0] + sum[1]) / static_cast<double>(column.size());
    double between = count[0] * (mean[0] - grand) * (mean[0] - grand) +
                     count[1] * (mean[1] - grand) * (mean[1] - grand);
    double within = 0.0;
    for (std::size_t i = 0; i < column.size(); ++i) {
        double dev = column[i] - mean[labels[i]];
        within += dev * dev;
    }
    double df2 = static_cast<double>(column.size() - 2);
    if (within == 0.0) {
        return between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return between / (within / df2);
}

inline RankedList anova_f_rank(const Dataset& d) {
    if (d.n_cols() == 0) throw ValidationError("anova_f_rank: no features");
    std::vector<double> stat(d.n_cols());
    for (std::size_t i = 0; i < d.n_cols(); ++i) {
        stat[i] = anova_f_statistic(d.columns[i].values, d.labels);
    }
    return detail::rank_by_statistic(d, stat);
}

// Gini impurity reduction of the best single-threshold split on one column,
// the same split criterion a depth-1 tree would use.
inline double gini_gain(const std::vector<double>& column, const std::vector<int>& labels) {
    std::size_t n = column.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

    std::size_t total_pos = 0;
    for (int y : labels) total_pos += y;
    auto gini = [](double pos, double count) {
        if (count == 0.0) return 0.0;
        double p = pos / count;
        return 2.0 * p * (1.0 - p);
    };
    double parent = gini(static_cast<double>(total_pos), static_cast<double>(n));

    double best_children = parent;
    std::size_t left_pos = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        left_pos += labels[order[i]];
        if (column[order[i]] == column[order[i + 1]]) continue;  // no threshold between equals
        double left_n = static_cast<double>(i + 1);
        double right_n = static_cast<double>(n - i - 1);
        double children = (left_n / n) * gini(static_cast<double>(left_pos), left_n) +
                          (right_n / n) * gini(static_cast<double>(total_pos - left_pos), right_n);
        best_children = std::min(best_children, children);
    }
    return parent - best_children;
}

inline RankedList gini_rank(const Dataset& d) {
    if (d.n_cols() == 0) throw ValidationError("gini_rank: no features");
    std::vector<double> stat(d.n_cols());
    for (std::size_t i = 0; i < d.n_cols(); ++i) {
        stat[i] = gini_gain(d.columns[i].values, d.labels);
    }
    return detail::rank_by_statistic(d, stat);
}

// Full ranking over every feature (no batch cut), used for the comparison.
inline RankedList micc_full_rank(const Dataset& d, int bins = kDefaultBins,
                                 AvgCorrDivisor divisor = AvgCorrDivisor::full_dimension) {
    auto relevance = relevance_vector(d, bins);
    auto corr = CorrelationMatrix::build(d);
    return rank_features(micc_ud_scores(relevance, corr, divisor));
}

inline RankedList rank_with_method(const Dataset& d, SelectionMethod method,
                                   int bins = kDefaultBins, double beta = kDefaultMifsBeta,
                                   AvgCorrDivisor divisor = AvgCorrDivisor::full_dimension) {
    switch (method) {
        case SelectionMethod::micc: return micc_full_rank(d, bins, divisor);
        case SelectionMethod::mifs: return mifs_rank(d, bins, beta);
        case SelectionMethod::mrmr: return mrmr_rank(d, bins);
        case SelectionMethod::anova_f: return anova_f_rank(d);
        default: return gini_rank(d);
    }
}

struct MethodReport {
    std::string method;
    std::vector<std::string> features;  // the evaluated top-k subset
    std::size_t subset_size = 0;
    double f1 = 0.0;
    EvalMetrics metrics;
};

struct CompareOptions {
    int bins = kDefaultBins;
    double beta = kDefaultMifsBeta;
    AvgCorrDivisor divisor = AvgCorrDivisor::full_dimension;
    int folds = kDefaultFolds;
    std::uint64_t seed = 42;
};

// Evaluates each method's top subset_size features with the same classifier
// and CV split. The main scoring method is always included, first.
inline std::vector<MethodReport> compare_methods(const Dataset& d,
                                                 std::vector<SelectionMethod> methods,
                                                 std::size_t subset_size,
                                                 const ClassifierSpec& spec,
                                                 const CompareOptions& options = {}) {
    if (subset_size == 0 || subset_size > d.n_cols()) {
        throw ValidationError("compare_methods: subset size must be in [1, feature count]");
    }
    std::vector<SelectionMethod> unique{SelectionMethod::micc};
    for (auto m : methods) {
        if (std::find(unique.begin(), unique.end(), m) == unique.end()) unique.push_back(m);
    }

    std::vector<MethodReport> reports;
    for (auto m : unique) {
        RankedList ranked = rank_with_method(d, m, options.bins, options.beta, options.divisor);
        MethodReport report;
        report.method = to_string(m);
        auto names = ranked.names();
        report.features.assign(names.begin(), names.begin() + subset_size);
        report.subset_size = subset_size;
        report.metrics = evaluate_cv(d, report.features, spec, options.folds, options.seed);
        report.f1 = report.metrics.f1;
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace infs
