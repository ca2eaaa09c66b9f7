#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "infs/csv.hpp"
#include "infs/errors.hpp"

namespace infs {

constexpr double kVarianceEpsilon = 1e-12;

inline const std::set<std::string>& default_missing_markers() {
    static const std::set<std::string> markers{"", "NA", "NaN", "Infinity"};
    return markers;
}

struct DroppedFeature {
    std::string name;
    std::string reason;

    bool operator==(const DroppedFeature&) const = default;
};

// Missing cells are quiet NaN.
struct Column {
    std::string name;
    std::vector<double> values;
};

struct RawDataset {
    std::vector<Column> columns;
    std::vector<int> labels;                  // {0,1}, first-seen order
    std::vector<std::string> label_names;     // verbatim label strings
    std::vector<DroppedFeature> dropped;

    std::size_t n_rows() const { return labels.size(); }
    std::size_t n_cols() const { return columns.size(); }
};

// Raw-domain statistics retained for reproducible transformation of later rows.
struct ColumnStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;  // column mean after imputation
};

// Fully preprocessed: no missing values, every value in [0,1], no
// zero-variance columns.
struct Dataset {
    std::vector<Column> columns;
    std::vector<int> labels;
    std::vector<std::string> label_names;
    std::vector<DroppedFeature> dropped_features;
    std::vector<ColumnStats> stats;
    bool degenerate_labels = false;  // fewer than two distinct label values

    std::size_t n_rows() const { return labels.size(); }
    std::size_t n_cols() const { return columns.size(); }

    std::vector<std::string> feature_names() const {
        std::vector<std::string> names;
        names.reserve(columns.size());
        for (const auto& c : columns) names.push_back(c.name);
        return names;
    }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i].name == name) return i;
        }
        throw ValidationError("dataset: unknown feature: " + name);
    }
};

inline RawDataset load_csv(const std::string& path, const std::string& label_column,
                           const std::set<std::string>& missing_markers = default_missing_markers()) {
    auto records = csv::read_records_file(path);
    if (records.empty()) throw ValidationError("load_csv: no header row in " + path);

    const auto& header = records.front();
    std::unordered_set<std::string> seen;
    for (const auto& name : header) {
        if (name.empty()) throw ValidationError("load_csv: empty column name in header");
        if (!seen.insert(name).second) {
            throw ValidationError("load_csv: duplicate header name: " + name);
        }
    }

    // Label column is matched by name first, then as a 0-based index.
    std::size_t label_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == label_column) label_idx = i;
    }
    if (label_idx == header.size()) {
        std::size_t idx = 0;
        auto [ptr, ec] = std::from_chars(label_column.data(),
                                         label_column.data() + label_column.size(), idx);
        if (ec == std::errc() && ptr == label_column.data() + label_column.size() &&
            idx < header.size()) {
            label_idx = idx;
        }
    }
    if (label_idx == header.size()) {
        throw ValidationError("load_csv: LabelColumnNotFound: " + label_column);
    }
    if (records.size() < 2) throw ValidationError("load_csv: zero data rows in " + path);

    RawDataset d;
    d.columns.reserve(header.size() - 1);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != label_idx) d.columns.push_back({header[i], {}});
    }

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& row = records[r];
        if (row.size() != header.size()) {
            throw ValidationError("load_csv: row " + std::to_string(r) + " has " +
                                  std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(header.size()));
        }
        std::size_t c = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i == label_idx) continue;
            double v = missing_markers.count(csv::trim(row[i]))
                           ? std::numeric_limits<double>::quiet_NaN()
                           : csv::parse_cell(row[i]);
            d.columns[c++].values.push_back(v);
        }
        std::string label = csv::trim(row[label_idx]);
        auto it = std::find(d.label_names.begin(), d.label_names.end(), label);
        if (it == d.label_names.end()) {
            if (d.label_names.size() == 2) {
                throw ValidationError("load_csv: more than two distinct labels (got \"" +
                                      label + "\")");
            }
            d.label_names.push_back(label);
            it = d.label_names.end() - 1;
        }
        d.labels.push_back(static_cast<int>(it - d.label_names.begin()));
    }
    return d;
}

// Remaps labels so the given raw label string is class 1, the positive class
// of the F1 metric. Default mapping is first-seen order.
inline void set_positive_label(RawDataset& d, const std::string& positive) {
    if (positive.empty()) return;
    auto it = std::find(d.label_names.begin(), d.label_names.end(), positive);
    if (it == d.label_names.end()) {
        throw ValidationError("positive label \"" + positive + "\" not present in data");
    }
    if (d.label_names.size() == 2 && it == d.label_names.begin()) {
        std::swap(d.label_names[0], d.label_names[1]);
        for (int& y : d.labels) y = 1 - y;
    }
}

// Replaces each missing cell with the mean of the non-missing cells in its
// column. Columns with every cell missing are dropped and logged.
inline RawDataset impute_missing(const RawDataset& d) {
    RawDataset out;
    out.labels = d.labels;
    out.label_names = d.label_names;
    out.dropped = d.dropped;
    for (const auto& col : d.columns) {
        double sum = 0.0;
        std::size_t n = 0;
        for (double v : col.values) {
            if (!std::isnan(v)) {
                sum += v;
                ++n;
            }
        }
        if (n == 0) {
            std::cerr << "warning: column \"" << col.name << "\" is entirely missing; dropped\n";
            out.dropped.push_back({col.name, "all-missing"});
            continue;
        }
        Column c{col.name, col.values};
        double mean = sum / static_cast<double>(n);
        for (double& v : c.values) {
            if (std::isnan(v)) v = mean;
        }
        out.columns.push_back(std::move(c));
    }
    return out;
}

inline double population_variance(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return var / static_cast<double>(values.size());
}

inline RawDataset drop_zero_variance(const RawDataset& d, double variance_epsilon = kVarianceEpsilon) {
    RawDataset out;
    out.labels = d.labels;
    out.label_names = d.label_names;
    out.dropped = d.dropped;
    for (const auto& col : d.columns) {
        for (double v : col.values) {
            if (std::isnan(v)) {
                throw ValidationError("drop_zero_variance: column \"" + col.name +
                                      "\" still has missing values");
            }
        }
        if (population_variance(col.values) < variance_epsilon) {
            out.dropped.push_back({col.name, "zero-variance"});
        } else {
            out.columns.push_back(col);
        }
    }
    if (out.columns.empty()) {
        throw ValidationError("drop_zero_variance: EmptyFeatureSet: every column dropped");
    }
    return out;
}

inline Dataset min_max_normalize(const RawDataset& d) {
    Dataset out;
    out.labels = d.labels;
    out.label_names = d.label_names;
    out.dropped_features = d.dropped;
    out.degenerate_labels = d.label_names.size() < 2;
    out.columns.reserve(d.columns.size());
    out.stats.reserve(d.columns.size());
    for (const auto& col : d.columns) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (double v : col.values) {
            if (std::isnan(v)) {
                throw ValidationError("min_max_normalize: column \"" + col.name +
                                      "\" still has missing values");
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        if (!(hi > lo)) {
            throw ValidationError("min_max_normalize: column \"" + col.name +
                                  "\" has max == min; drop zero-variance columns first");
        }
        Column c{col.name, col.values};
        double range = hi - lo;
        for (double& v : c.values) v = (v - lo) / range;
        out.columns.push_back(std::move(c));
        out.stats.push_back({lo, hi, sum / static_cast<double>(col.values.size())});
    }
    return out;
}

// The paper's three preprocessing steps in order: mean imputation,
// zero-variance elimination, min-max normalization.
inline Dataset preprocess(const RawDataset& raw, double variance_epsilon = kVarianceEpsilon) {
    return min_max_normalize(drop_zero_variance(impute_missing(raw), variance_epsilon));
}

// Restricts a dataset to the named features, in the given order.
inline Dataset restrict_features(const Dataset& d, const std::vector<std::string>& names) {
    if (names.empty()) throw ValidationError("restrict_features: empty feature subset");
    Dataset out;
    out.labels = d.labels;
    out.label_names = d.label_names;
    out.dropped_features = d.dropped_features;
    out.degenerate_labels = d.degenerate_labels;
    for (const auto& name : names) {
        std::size_t idx = d.column_index(name);
        out.columns.push_back(d.columns[idx]);
        out.stats.push_back(d.stats[idx]);
    }
    return out;
}

}  // namespace infs
