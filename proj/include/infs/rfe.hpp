#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "infs/dataset.hpp"
#include "infs/errors.hpp"
#include "infs/evaluate.hpp"
#include "infs/micc.hpp"
#include "infs/parallel.hpp"

namespace infs {

constexpr double kDefaultTolerance = 0.001;

struct RfeCurvePoint {
    std::size_t subset_size = 0;
    std::vector<std::string> features;  // the top-s prefix of the ranked list
    EvalMetrics metrics;
};

struct RfeCurve {
    std::vector<RfeCurvePoint> points;  // sizes 1..max_size
};

// Evaluates ranked-list prefixes of size 1..max_size. Elimination order is
// the reverse of the ranking: the lowest-ranked feature leaves first, so
// only the d prefix subsets are ever candidates.
inline RfeCurve rfe_curve(const Dataset& data, const std::vector<std::string>& ranked_names,
                          const ClassifierSpec& spec, int k, std::uint64_t seed,
                          std::size_t max_size) {
    if (ranked_names.empty()) throw ValidationError("rfe_curve: empty ranked list");
    if (max_size == 0 || max_size > ranked_names.size()) {
        throw ValidationError("rfe_curve: max_size must be in [1, ranked list size]");
    }
    RfeCurve curve;
    curve.points.resize(max_size);
    parallel_for(max_size, [&](std::size_t i) {
        std::size_t size = i + 1;
        RfeCurvePoint point;
        point.subset_size = size;
        point.features.assign(ranked_names.begin(), ranked_names.begin() + size);
        point.metrics = evaluate_cv(data, point.features, spec, k, seed);
        curve.points[i] = std::move(point);
    });
    return curve;
}

inline RfeCurve rfe_curve(const Dataset& data, const RankedList& ranked,
                          const ClassifierSpec& spec, int k, std::uint64_t seed,
                          std::size_t max_size) {
    return rfe_curve(data, ranked.names(), spec, k, seed, max_size);
}

enum class OptimumSelector { accuracy, f1 };

struct OptimalSubset {
    std::size_t size = 0;
    std::vector<std::string> features;
    EvalMetrics metrics;
};

// Smallest prefix whose metric is within tolerance of the curve maximum.
inline OptimalSubset optimal_subset(const RfeCurve& curve, double tolerance = kDefaultTolerance,
                                    OptimumSelector selector = OptimumSelector::accuracy) {
    if (curve.points.empty()) throw ValidationError("optimal_subset: empty curve");
    auto value = [&](const RfeCurvePoint& p) {
        return selector == OptimumSelector::accuracy ? p.metrics.accuracy : p.metrics.f1;
    };
    double best = value(curve.points.front());
    for (const auto& p : curve.points) best = std::max(best, value(p));
    for (const auto& p : curve.points) {
        if (value(p) >= best - tolerance) {
            return {p.subset_size, p.features, p.metrics};
        }
    }
    const auto& last = curve.points.back();
    return {last.subset_size, last.features, last.metrics};
}

inline nlohmann::json to_json(const EvalMetrics& m) {
    return {{"accuracy", m.accuracy},
            {"f1", m.f1},
            {"fold_accuracy", m.fold_accuracy},
            {"fold_f1", m.fold_f1},
            {"folds", m.folds}};
}

inline nlohmann::json to_json(const RfeCurve& curve) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : curve.points) {
        points.push_back({{"subset_size", p.subset_size},
                          {"features", p.features},
                          {"metrics", to_json(p.metrics)}});
    }
    return {{"points", points}};
}

// Two-column CSV (size, accuracy or f1) matching the usual curve plots.
inline std::string curve_csv(const RfeCurve& curve, OptimumSelector metric) {
    std::ostringstream out;
    out << "size," << (metric == OptimumSelector::accuracy ? "accuracy" : "f1") << "\n";
    out.precision(17);
    for (const auto& p : curve.points) {
        out << p.subset_size << ','
            << (metric == OptimumSelector::accuracy ? p.metrics.accuracy : p.metrics.f1) << "\n";
    }
    return out.str();
}

}  // namespace infs
