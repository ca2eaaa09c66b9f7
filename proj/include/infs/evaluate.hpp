#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "infs/dataset.hpp"
#include "infs/errors.hpp"
#include "infs/learners.hpp"
#include "infs/rng.hpp"

namespace infs {

constexpr int kDefaultFolds = 5;

// Disjoint index folds with per-fold class proportions within one sample of
// the global proportions: indices of each class are shuffled once, then
// dealt round-robin.
inline std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels,
                                                              int k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("stratified_kfold: k must be >= 2");
    std::vector<std::vector<std::size_t>> by_class(2);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw ValidationError("stratified_kfold: labels must be 0/1");
        }
        by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (!by_class[c].empty() && by_class[c].size() < static_cast<std::size_t>(k)) {
            throw ValidationError("stratified_kfold: class " + std::to_string(c) +
                                  " has fewer than k members");
        }
    }
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> folds(k);
    for (auto& members : by_class) {
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            folds[i % static_cast<std::size_t>(k)].push_back(members[i]);
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

inline double accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw ValidationError("accuracy: length mismatch");
    if (y_true.empty()) throw ValidationError("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
    return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

// F1 on the positive class (label 1); 0 when precision + recall is 0.
inline double f1_score(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw ValidationError("f1_score: length mismatch");
    if (y_true.empty()) throw ValidationError("f1_score: empty input");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_pred[i] == 1 && y_true[i] == 1) ++tp;
        if (y_pred[i] == 1 && y_true[i] == 0) ++fp;
        if (y_pred[i] == 0 && y_true[i] == 1) ++fn;
    }
    if (tp == 0) return 0.0;
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

struct EvalMetrics {
    double accuracy = 0.0;  // mean of folds
    double f1 = 0.0;        // mean of folds
    std::vector<double> fold_accuracy;
    std::vector<double> fold_f1;
    int folds = 0;

    bool operator==(const EvalMetrics&) const = default;
};

namespace detail {

struct FoldMatrices {
    Matrix train_x, test_x;
    std::vector<int> train_y, test_y;
};

// Rescales every feature with min/max taken from the training rows only, so
// nothing about the test fold leaks into the transform. Test values outside
// the training range map outside [0,1] and stay there.
inline FoldMatrices fold_normalized_matrices(const Dataset& d,
                                             const std::vector<std::size_t>& train_idx,
                                             const std::vector<std::size_t>& test_idx) {
    FoldMatrices out;
    out.train_x.assign(train_idx.size(), std::vector<double>(d.n_cols()));
    out.test_x.assign(test_idx.size(), std::vector<double>(d.n_cols()));
    for (std::size_t c = 0; c < d.n_cols(); ++c) {
        const auto& col = d.columns[c].values;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t r : train_idx) {
            lo = std::min(lo, col[r]);
            hi = std::max(hi, col[r]);
        }
        double range = hi - lo;
        auto transform = [&](double v) { return range > 0.0 ? (v - lo) / range : 0.0; };
        for (std::size_t i = 0; i < train_idx.size(); ++i) {
            out.train_x[i][c] = transform(col[train_idx[i]]);
        }
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            out.test_x[i][c] = transform(col[test_idx[i]]);
        }
    }
    out.train_y.reserve(train_idx.size());
    for (std::size_t r : train_idx) out.train_y.push_back(d.labels[r]);
    out.test_y.reserve(test_idx.size());
    for (std::size_t r : test_idx) out.test_y.push_back(d.labels[r]);
    return out;
}

}  // namespace detail

// Stratified k-fold cross-validation of one classifier on a feature subset.
// Per-fold feature scaling is fit on the training rows only.
inline EvalMetrics evaluate_cv(const Dataset& data, const std::vector<std::string>& features,
                               const ClassifierSpec& spec, int k = kDefaultFolds,
                               std::uint64_t seed = 42) {
    Dataset subset = restrict_features(data, features);
    auto folds = stratified_kfold(subset.labels, k, seed);

    EvalMetrics metrics;
    metrics.folds = k;
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train_idx;
        train_idx.reserve(subset.n_rows() - folds[f].size());
        for (int g = 0; g < k; ++g) {
            if (g == f) continue;
            train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(train_idx.begin(), train_idx.end());

        auto fold_data = detail::fold_normalized_matrices(subset, train_idx, folds[f]);
        Model model = Model::fit(spec, fold_data.train_x, fold_data.train_y);
        auto predictions = model.predict(fold_data.test_x);
        metrics.fold_accuracy.push_back(accuracy(fold_data.test_y, predictions));
        metrics.fold_f1.push_back(f1_score(fold_data.test_y, predictions));
    }
    for (double a : metrics.fold_accuracy) metrics.accuracy += a;
    for (double v : metrics.fold_f1) metrics.f1 += v;
    metrics.accuracy /= static_cast<double>(k);
    metrics.f1 /= static_cast<double>(k);
    return metrics;
}

}  // namespace infs
