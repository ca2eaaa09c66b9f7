#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "infs/dataset.hpp"
#include "infs/errors.hpp"
#include "infs/estimators.hpp"
#include "infs/evaluate.hpp"
#include "infs/learners.hpp"
#include "infs/merge.hpp"
#include "infs/micc.hpp"
#include "infs/rfe.hpp"

namespace infs {

constexpr double kDefaultSatisfactoryF1 = 0.95;

// Every tunable of the pipeline with its documented default. Flags override
// file values which override these defaults.
struct RunConfig {
    int bins = kDefaultBins;
    double alpha = kDefaultAlpha;
    double rho = kDefaultRho;
    RankSemantics rank_semantics = RankSemantics::order;
    AvgCorrDivisor avg_corr_divisor = AvgCorrDivisor::full_dimension;
    int cv_folds = kDefaultFolds;
    std::uint64_t seed = 42;
    double tolerance = kDefaultTolerance;
    double satisfactory_f1 = kDefaultSatisfactoryF1;
    std::vector<ClassifierSpec> classifiers = {ClassifierSpec{ClassifierKind::decision_tree}};
    std::set<std::string> missing_markers = default_missing_markers();
    std::string label_column = "label";
    std::string positive_label;  // empty = first-seen mapping

    bool operator==(const RunConfig&) const = default;

    void validate() const {
        if (bins < 2) throw ValidationError("config: bins must be >= 2");
        if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("config: alpha must be in (0,1)");
        if (!(rho > 0.0 && rho <= 1.0)) throw ValidationError("config: rho must be in (0,1]");
        if (cv_folds < 2) throw ValidationError("config: cv_folds must be >= 2");
        if (tolerance < 0.0) throw ValidationError("config: tolerance must be >= 0");
        if (!(satisfactory_f1 >= 0.0 && satisfactory_f1 <= 1.0)) {
            throw ValidationError("config: satisfactory_f1 must be in [0,1]");
        }
        if (classifiers.empty()) throw ValidationError("config: at least one classifier required");
        if (label_column.empty()) throw ValidationError("config: label_column must be non-empty");
        for (const auto& c : resolved_classifiers()) c.validate();
    }

    // Classifiers with the run seed filled in where the spec left it out.
    std::vector<ClassifierSpec> resolved_classifiers() const {
        std::vector<ClassifierSpec> out = classifiers;
        for (auto& c : out) {
            if (!c.seed) c.seed = seed;
        }
        return out;
    }

    ConfigSnapshot snapshot() const {
        return ConfigSnapshot{bins, rho, alpha, rank_semantics, avg_corr_divisor};
    }
};

inline nlohmann::json to_json(const ClassifierSpec& spec) {
    nlohmann::json j{{"kind", to_string(spec.kind)},
                     {"max_depth", spec.max_depth},
                     {"n_trees", spec.n_trees},
                     {"min_leaf", spec.min_leaf}};
    if (spec.seed) j["seed"] = *spec.seed;
    if (spec.kind == ClassifierKind::external) {
        j["command"] = spec.command;
        j["timeout_ms"] = spec.timeout_ms;
    }
    return j;
}

inline ClassifierSpec classifier_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw SchemaViolation("classifier spec must be an object with a \"kind\" field");
    }
    ClassifierSpec spec;
    spec.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("max_depth")) spec.max_depth = j.at("max_depth").get<int>();
    if (j.contains("n_trees")) spec.n_trees = j.at("n_trees").get<int>();
    if (j.contains("min_leaf")) spec.min_leaf = j.at("min_leaf").get<int>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("command")) spec.command = j.at("command").get<std::string>();
    if (j.contains("timeout_ms")) spec.timeout_ms = j.at("timeout_ms").get<int>();
    return spec;
}

// Flag syntax: "kind" or "kind:key=val,key=val". A command= pair consumes the
// rest of the string verbatim so shell commands may contain commas; it must
// come last.
inline ClassifierSpec classifier_spec_from_flag(const std::string& text) {
    ClassifierSpec spec;
    auto colon = text.find(':');
    spec.kind = classifier_kind_from_string(text.substr(0, colon));
    if (colon == std::string::npos) return spec;

    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto eq = rest.find('=', pos);
        if (eq == std::string::npos) {
            throw ValidationError("classifier flag: expected key=value in \"" + text + "\"");
        }
        std::string key = rest.substr(pos, eq - pos);
        if (key == "command") {
            spec.command = rest.substr(eq + 1);
            pos = rest.size();
            continue;
        }
        auto comma = rest.find(',', eq + 1);
        std::string value = rest.substr(eq + 1, comma == std::string::npos ? std::string::npos
                                                                           : comma - eq - 1);
        try {
            if (key == "max_depth") spec.max_depth = std::stoi(value);
            else if (key == "n_trees") spec.n_trees = std::stoi(value);
            else if (key == "min_leaf") spec.min_leaf = std::stoi(value);
            else if (key == "seed") spec.seed = std::stoull(value);
            else if (key == "timeout_ms") spec.timeout_ms = std::stoi(value);
            else throw ValidationError("classifier flag: unknown key \"" + key + "\"");
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw ValidationError("classifier flag: bad value for " + key + " in \"" + text + "\"");
        }
        pos = comma == std::string::npos ? rest.size() : comma + 1;
    }
    return spec;
}

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json classifiers = nlohmann::json::array();
    for (const auto& spec : c.classifiers) classifiers.push_back(to_json(spec));
    return {{"bins", c.bins},
            {"alpha", c.alpha},
            {"rho", c.rho},
            {"rank_semantics", to_string(c.rank_semantics)},
            {"avg_corr_divisor", to_string(c.avg_corr_divisor)},
            {"cv_folds", c.cv_folds},
            {"seed", c.seed},
            {"tolerance", c.tolerance},
            {"satisfactory_f1", c.satisfactory_f1},
            {"classifiers", classifiers},
            {"missing_markers", c.missing_markers},
            {"label_column", c.label_column},
            {"positive_label", c.positive_label}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaViolation("config file: top level must be an object");
    RunConfig c;
    try {
        if (j.contains("bins")) c.bins = j.at("bins").get<int>();
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("rho")) c.rho = j.at("rho").get<double>();
        if (j.contains("rank_semantics")) {
            c.rank_semantics = rank_semantics_from_string(j.at("rank_semantics").get<std::string>());
        }
        if (j.contains("avg_corr_divisor")) {
            c.avg_corr_divisor =
                avg_corr_divisor_from_string(j.at("avg_corr_divisor").get<std::string>());
        }
        if (j.contains("cv_folds")) c.cv_folds = j.at("cv_folds").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
        if (j.contains("satisfactory_f1")) c.satisfactory_f1 = j.at("satisfactory_f1").get<double>();
        if (j.contains("classifiers")) {
            c.classifiers.clear();
            for (const auto& spec : j.at("classifiers")) {
                c.classifiers.push_back(classifier_spec_from_json(spec));
            }
        }
        if (j.contains("missing_markers")) {
            c.missing_markers.clear();
            for (const auto& m : j.at("missing_markers")) {
                c.missing_markers.insert(m.get<std::string>());
            }
        }
        if (j.contains("label_column")) c.label_column = j.at("label_column").get<std::string>();
        if (j.contains("positive_label")) c.positive_label = j.at("positive_label").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaViolation(std::string("config file: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace infs
