#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "infs/dataset.hpp"
#include "infs/errors.hpp"
#include "infs/external.hpp"
#include "infs/parallel.hpp"
#include "infs/rng.hpp"

namespace infs {

enum class ClassifierKind { decision_tree, random_forest, external };

inline std::string to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::decision_tree: return "decision_tree";
        case ClassifierKind::random_forest: return "random_forest";
        case ClassifierKind::external: return "external";
    }
    return "";
}

inline ClassifierKind classifier_kind_from_string(const std::string& s) {
    if (s == "decision_tree") return ClassifierKind::decision_tree;
    if (s == "random_forest") return ClassifierKind::random_forest;
    if (s == "external") return ClassifierKind::external;
    throw ValidationError("unknown classifier kind: \"" + s + "\"");
}

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::random_forest;
    int max_depth = 0;  // 0 = unbounded
    int n_trees = 100;
    int min_leaf = 1;
    std::optional<std::uint64_t> seed;
    std::string command;      // external only: shell command to spawn
    int timeout_ms = 30000;   // external only

    void validate() const {
        if (max_depth < 0) throw ValidationError("classifier: max_depth must be >= 0");
        if (min_leaf < 1) throw ValidationError("classifier: min_leaf must be >= 1");
        if (kind == ClassifierKind::random_forest) {
            if (n_trees < 1) throw ValidationError("classifier: n_trees must be >= 1");
            if (!seed) throw ValidationError("classifier: seed is mandatory for random_forest");
        }
        if (kind == ClassifierKind::external) {
            if (command.empty()) throw ValidationError("classifier: external kind needs a command");
            if (timeout_ms < 1) throw ValidationError("classifier: timeout_ms must be >= 1");
        }
    }

    std::string name() const { return to_string(kind); }
};

// --- CART decision tree with Gini splits -------------------------------

namespace detail {

struct TreeNode {
    bool leaf = true;
    int label = 0;
    std::size_t feature = 0;
    double threshold = 0.0;
    int left = -1;   // x[feature] < threshold
    int right = -1;  // x[feature] >= threshold
};

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

inline double gini_of(std::size_t pos, std::size_t n) {
    if (n == 0) return 0.0;
    double p = static_cast<double>(pos) / static_cast<double>(n);
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<int>& y, int max_depth, int min_leaf)
        : x_(x), y_(y), max_depth_(max_depth), min_leaf_(static_cast<std::size_t>(min_leaf)) {}

    // feature_picker chooses the candidate features for one split; identity
    // for a plain tree, a random subset for forest members.
    template <typename FeaturePicker>
    std::vector<TreeNode> build(std::vector<std::size_t> rows, FeaturePicker&& pick_features) {
        nodes_.clear();
        grow(std::move(rows), 0, pick_features);
        return std::move(nodes_);
    }

private:
    template <typename FeaturePicker>
    int grow(std::vector<std::size_t> rows, int depth, FeaturePicker& pick_features) {
        std::size_t pos = 0;
        for (std::size_t r : rows) pos += static_cast<std::size_t>(y_[r]);
        int node_index = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[node_index].label = majority(pos, rows.size());

        bool pure = pos == 0 || pos == rows.size();
        bool depth_capped = max_depth_ > 0 && depth >= max_depth_;
        if (pure || depth_capped || rows.size() < 2 * min_leaf_) return node_index;

        SplitChoice split = best_split(rows, pick_features(depth));
        if (!split.found) return node_index;

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            (x_[r][split.feature] < split.threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        nodes_[node_index].leaf = false;
        nodes_[node_index].feature = split.feature;
        nodes_[node_index].threshold = split.threshold;
        int left = grow(std::move(left_rows), depth + 1, pick_features);
        nodes_[node_index].left = left;
        int right = grow(std::move(right_rows), depth + 1, pick_features);
        nodes_[node_index].right = right;
        return node_index;
    }

    static int majority(std::size_t pos, std::size_t n) { return pos > n - pos ? 1 : 0; }

    SplitChoice best_split(const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& features) const {
        SplitChoice best;
        std::size_t n = rows.size();
        std::vector<std::pair<double, int>> sorted(n);
        for (std::size_t f : features) {
            for (std::size_t i = 0; i < n; ++i) {
                sorted[i] = {x_[rows[i]][f], y_[rows[i]]};
            }
            std::sort(sorted.begin(), sorted.end());
            std::size_t left_pos = 0;
            std::size_t total_pos = 0;
            for (const auto& [v, label] : sorted) total_pos += static_cast<std::size_t>(label);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_pos += static_cast<std::size_t>(sorted[i].second);
                if (sorted[i].first == sorted[i + 1].first) continue;
                std::size_t left_n = i + 1;
                std::size_t right_n = n - left_n;
                if (left_n < min_leaf_ || right_n < min_leaf_) continue;
                double impurity =
                    (static_cast<double>(left_n) * gini_of(left_pos, left_n) +
                     static_cast<double>(right_n) * gini_of(total_pos - left_pos, right_n)) /
                    static_cast<double>(n);
                if (impurity < best.impurity) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2.0;
                    best.impurity = impurity;
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    int max_depth_;
    std::size_t min_leaf_;
    std::vector<TreeNode> nodes_;
};

inline int predict_tree(const std::vector<TreeNode>& nodes, const std::vector<double>& row) {
    int i = 0;
    while (!nodes[i].leaf) {
        i = row[nodes[i].feature] < nodes[i].threshold ? nodes[i].left : nodes[i].right;
    }
    return nodes[i].label;
}

}  // namespace detail

// A fitted classifier. Built-in kinds hold their trees by value; the
// external kind holds the live child process.
class Model {
public:
    static Model fit(const ClassifierSpec& spec, const Matrix& x, const std::vector<int>& y) {
        spec.validate();
        if (x.empty() || y.empty() || x.size() != y.size()) {
            throw ValidationError("fit: feature matrix and labels disagree");
        }
        if (x.front().empty()) throw ValidationError("fit: empty feature subset");
        bool has0 = false, has1 = false;
        for (int label : y) (label ? has1 : has0) = true;
        if (!has0 || !has1) throw ValidationError("fit: single-class training data");

        Model m;
        m.kind_ = spec.kind;
        std::size_t n_features = x.front().size();
        std::vector<std::size_t> all_features(n_features);
        for (std::size_t f = 0; f < n_features; ++f) all_features[f] = f;

        switch (spec.kind) {
            case ClassifierKind::decision_tree: {
                std::vector<std::size_t> rows(x.size());
                for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
                detail::TreeBuilder builder(x, y, spec.max_depth, spec.min_leaf);
                m.trees_.push_back(builder.build(std::move(rows), [&](int) { return all_features; }));
                break;
            }
            case ClassifierKind::random_forest: {
                // ceil(sqrt(d)) features per split, one substream per tree so
                // parallel and serial training build identical forests.
                std::size_t mtry = static_cast<std::size_t>(
                    std::ceil(std::sqrt(static_cast<double>(n_features))));
                m.trees_.resize(spec.n_trees);
                Rng root(*spec.seed);
                parallel_for(static_cast<std::size_t>(spec.n_trees), [&](std::size_t t) {
                    Rng rng = root.substream(t);
                    std::vector<std::size_t> rows(x.size());
                    for (auto& r : rows) r = static_cast<std::size_t>(rng.bounded(x.size()));
                    detail::TreeBuilder builder(x, y, spec.max_depth, spec.min_leaf);
                    auto pick = [&](int) {
                        std::vector<std::size_t> pool = all_features;
                        rng.shuffle(pool);
                        pool.resize(std::min(mtry, pool.size()));
                        std::sort(pool.begin(), pool.end());
                        return pool;
                    };
                    m.trees_[t] = builder.build(std::move(rows), pick);
                });
                break;
            }
            case ClassifierKind::external: {
                m.external_ = std::make_shared<ExternalClassifier>(spec.command, spec.timeout_ms);
                m.external_->fit(x, y);
                break;
            }
        }
        return m;
    }

    std::vector<int> predict(const Matrix& x) const {
        if (kind_ == ClassifierKind::external) return external_->predict(x);
        std::vector<int> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::size_t votes = 0;
            for (const auto& tree : trees_) {
                votes += static_cast<std::size_t>(detail::predict_tree(tree, x[i]));
            }
            out[i] = votes > trees_.size() - votes ? 1 : 0;
        }
        return out;
    }

private:
    ClassifierKind kind_ = ClassifierKind::decision_tree;
    std::vector<std::vector<detail::TreeNode>> trees_;
    std::shared_ptr<ExternalClassifier> external_;
};

inline Model fit(const ClassifierSpec& spec, const Matrix& x, const std::vector<int>& y) {
    return Model::fit(spec, x, y);
}

inline Matrix to_matrix(const Dataset& d) {
    Matrix x(d.n_rows(), std::vector<double>(d.n_cols()));
    for (std::size_t c = 0; c < d.n_cols(); ++c) {
        for (std::size_t r = 0; r < d.n_rows(); ++r) x[r][c] = d.columns[c].values[r];
    }
    return x;
}

inline Model fit(const ClassifierSpec& spec, const Dataset& d) {
    return Model::fit(spec, to_matrix(d), d.labels);
}

}  // namespace infs
