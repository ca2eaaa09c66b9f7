// infs_micc: incremental feature selection for flow data.
// Commands: preprocess, score, merge, rfe, compare.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infs/infs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, p);
}

json load_schema(const std::string& name) {
    return infs::load_json_file(std::string(INFS_SCHEMA_DIR) + "/" + name);
}

void emit_report(const std::string& path, const json& payload, const std::string& schema_name) {
    infs::validate_against_schema(payload, load_schema(schema_name));
    infs::save_json_file(path, payload);
    std::cout << "wrote " << path << "\n";
}

infs::Dataset load_dataset(const std::string& path, const infs::RunConfig& cfg) {
    auto raw = infs::load_csv(path, cfg.label_column, cfg.missing_markers);
    infs::set_positive_label(raw, cfg.positive_label);
    return infs::preprocess(raw);
}

bool has_column(const infs::Dataset& d, const std::string& name) {
    for (const auto& c : d.columns) {
        if (c.name == name) return true;
    }
    return false;
}

void cmd_preprocess(const std::string& csv_path, const infs::RunConfig& cfg,
                    const std::string& out_dir) {
    auto data = load_dataset(csv_path, cfg);

    std::ostringstream out;
    std::vector<std::string> header = data.feature_names();
    header.push_back(cfg.label_column);
    infs::csv::write_record(out, header);
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        std::vector<std::string> row;
        row.reserve(header.size());
        for (const auto& col : data.columns) row.push_back(format_double(col.values[r]));
        row.push_back(data.label_names[data.labels[r]]);
        infs::csv::write_record(out, row);
    }
    std::string csv_out = out_dir + "/preprocessed.csv";
    infs::atomic_write_text(csv_out, out.str());
    std::cout << "wrote " << csv_out << " (" << data.n_rows() << " rows, " << data.n_cols()
              << " features)\n";

    json drops = json::array();
    for (const auto& d : data.dropped_features) {
        drops.push_back({{"name", d.name}, {"reason", d.reason}});
    }
    emit_report(out_dir + "/drop_log.json", drops, "drop_log.schema.json");
}

void cmd_score(const std::string& csv_path, const std::string& batch_id, std::uint64_t ordinal,
               const infs::RunConfig& cfg, const std::string& out_dir) {
    auto data = load_dataset(csv_path, cfg);
    auto relevance = infs::relevance_vector(data, cfg.bins);
    auto corr = infs::CorrelationMatrix::build(data);
    auto full = infs::rank_features(infs::micc_ud_scores(relevance, corr, cfg.avg_corr_divisor));
    auto subset = infs::select_batch_subset(full, cfg.rho);

    infs::BatchState state;
    state.batch_id = batch_id;
    state.arrival_ordinal = ordinal;
    state.ranked = subset;
    state.config = cfg.snapshot();
    for (std::size_t i = 0; i < data.n_cols(); ++i) {
        state.preprocessing_stats[data.columns[i].name] = data.stats[i];
    }
    json state_json = infs::to_json(state);
    infs::validate_against_schema(state_json, load_schema("batch_state.schema.json"));
    std::string state_path = out_dir + "/batch_state.json";
    infs::save_json_file(state_path, state_json);
    std::cout << "wrote " << state_path << "\n";

    std::size_t top_k = std::min<std::size_t>(10, full.entries.size());
    json ranked = json::array();
    for (std::size_t i = 0; i < top_k; ++i) {
        const auto& e = full.entries[i];
        ranked.push_back({{"name", e.name},
                          {"index", e.index},
                          {"relevance", e.relevance},
                          {"avg_corr", e.avg_corr},
                          {"micc_ud", e.micc_ud},
                          {"normalized_rank", e.normalized_rank}});
    }
    json results{{"batch_id", batch_id},
                 {"arrival_ordinal", ordinal},
                 {"rows", data.n_rows()},
                 {"features", data.n_cols()},
                 {"top_k", top_k},
                 {"ranked", ranked},
                 {"batch_subset", subset.names()}};
    emit_report(out_dir + "/ranked_report.json", infs::report_envelope("score", cfg, results),
                "ranked_report.schema.json");
}

void cmd_merge(const std::string& old_path, const std::string& new_path,
               const std::string& new_csv, const infs::RunConfig& cfg,
               const std::string& out_dir) {
    auto s_old = infs::load_state(old_path);
    auto s_new = infs::load_state(new_path);
    auto result = infs::merge(s_old, s_new, cfg.alpha);

    json satisfaction{{"threshold", cfg.satisfactory_f1}};
    if (new_csv.empty()) {
        satisfaction["evaluated"] = false;
        satisfaction["recommendation"] =
            "not evaluated; pass --new-csv to run the satisfaction check";
    } else {
        auto data = load_dataset(new_csv, cfg);
        std::vector<std::string> available;
        for (const auto& name : result.f_d) {
            if (has_column(data, name)) available.push_back(name);
        }
        if (available.empty()) {
            satisfaction["evaluated"] = false;
            satisfaction["recommendation"] =
                "none of the merged features exist in the new batch; rerun full selection";
        } else {
            auto spec = cfg.resolved_classifiers().front();
            auto metrics = infs::evaluate_cv(data, available, spec, cfg.cv_folds, cfg.seed);
            bool ok = metrics.f1 >= cfg.satisfactory_f1;
            satisfaction["evaluated"] = true;
            satisfaction["f1"] = metrics.f1;
            satisfaction["satisfactory"] = ok;
            satisfaction["evaluated_features"] = available;
            satisfaction["classifier"] = spec.name();
            satisfaction["recommendation"] =
                ok ? "performance satisfactory; keep the merged feature set"
                   : "performance below threshold; rerun full selection on the combined data";
        }
    }

    json results{{"merge", infs::to_json(result)}, {"satisfaction", satisfaction}};
    emit_report(out_dir + "/merge_result.json", infs::report_envelope("merge", cfg, results),
                "merge_report.schema.json");
    std::cout << "f_d:";
    for (const auto& name : result.f_d) std::cout << ' ' << name;
    std::cout << "\n";
}

std::vector<std::string> ranked_names_from_file(const std::string& path) {
    json j = infs::load_json_file(path);
    if (j.is_object() && j.contains("schema_version") && j.contains("ranked")) {
        return infs::batch_state_from_json(j).ranked.names();
    }
    const json* merged = nullptr;
    if (j.is_object() && j.contains("f_d")) {
        merged = &j;
    } else if (j.is_object() && j.contains("results") && j["results"].is_object() &&
               j["results"].contains("merge")) {
        merged = &j["results"]["merge"];
    }
    if (merged && merged->contains("f_d") && (*merged)["f_d"].is_array()) {
        std::vector<std::string> names;
        for (const auto& n : (*merged)["f_d"]) names.push_back(n.get<std::string>());
        return names;
    }
    throw infs::SchemaViolation("rfe input: " + path +
                                " is neither a batch state nor a merge result");
}

// Distinct file/report labels for repeated classifier kinds.
std::vector<std::string> classifier_labels(const std::vector<infs::ClassifierSpec>& specs) {
    std::map<std::string, int> seen;
    std::vector<std::string> labels;
    for (const auto& s : specs) {
        int n = ++seen[s.name()];
        labels.push_back(n == 1 ? s.name() : s.name() + "_" + std::to_string(n));
    }
    return labels;
}

void cmd_rfe(const std::string& csv_path, const std::string& list_path,
             const std::string& selector_name, std::size_t max_size, const infs::RunConfig& cfg,
             const std::string& out_dir) {
    auto data = load_dataset(csv_path, cfg);
    auto all_names = ranked_names_from_file(list_path);

    std::vector<std::string> names;
    for (const auto& n : all_names) {
        if (has_column(data, n)) {
            names.push_back(n);
        } else {
            std::cerr << "warning: ranked feature \"" << n << "\" not present in " << csv_path
                      << "; skipped\n";
        }
    }
    if (names.empty()) throw infs::ValidationError("rfe: no ranked features present in the data");
    if (max_size == 0) max_size = names.size();

    infs::OptimumSelector selector = selector_name == "f1" ? infs::OptimumSelector::f1
                                                           : infs::OptimumSelector::accuracy;
    auto specs = cfg.resolved_classifiers();
    auto labels = classifier_labels(specs);

    json classifier_reports = json::array();
    struct Outcome {
        std::string label;
        infs::OptimalSubset optimal;
    };
    std::vector<Outcome> outcomes;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto curve = infs::rfe_curve(data, names, specs[i], cfg.cv_folds, cfg.seed, max_size);
        auto optimal = infs::optimal_subset(curve, cfg.tolerance, selector);
        for (auto metric : {infs::OptimumSelector::accuracy, infs::OptimumSelector::f1}) {
            std::string path = out_dir + "/rfe_curve_" + labels[i] + "_" +
                               (metric == infs::OptimumSelector::accuracy ? "accuracy" : "f1") +
                               ".csv";
            infs::atomic_write_text(path, infs::curve_csv(curve, metric));
            std::cout << "wrote " << path << "\n";
        }
        classifier_reports.push_back({{"classifier", labels[i]},
                                      {"curve", infs::to_json(curve)},
                                      {"optimal",
                                       {{"size", optimal.size},
                                        {"features", optimal.features},
                                        {"metrics", infs::to_json(optimal.metrics)}}}});
        outcomes.push_back({labels[i], std::move(optimal)});
    }

    // Winner: among classifiers whose optimum is within tolerance of the best
    // optimum, the smallest subset; ties resolved by configuration order.
    auto value = [&](const infs::EvalMetrics& m) {
        return selector == infs::OptimumSelector::accuracy ? m.accuracy : m.f1;
    };
    double best_value = value(outcomes.front().optimal.metrics);
    for (const auto& o : outcomes) best_value = std::max(best_value, value(o.optimal.metrics));
    const Outcome* winner = nullptr;
    for (const auto& o : outcomes) {
        if (value(o.optimal.metrics) < best_value - cfg.tolerance) continue;
        if (!winner || o.optimal.size < winner->optimal.size) winner = &o;
    }

    json results{{"selector", selector == infs::OptimumSelector::accuracy ? "accuracy" : "f1"},
                 {"ranked_features", names},
                 {"classifiers", classifier_reports},
                 {"winner",
                  {{"classifier", winner->label},
                   {"size", winner->optimal.size},
                   {"features", winner->optimal.features},
                   {"metrics", infs::to_json(winner->optimal.metrics)}}}};
    emit_report(out_dir + "/rfe_report.json", infs::report_envelope("rfe", cfg, results),
                "rfe_report.schema.json");
    std::cout << "optimal subset (" << winner->label << ", size " << winner->optimal.size << "):";
    for (const auto& f : winner->optimal.features) std::cout << ' ' << f;
    std::cout << "\n";
}

void cmd_compare(const std::string& csv_path, std::size_t size,
                 const std::vector<std::string>& method_flags, const infs::RunConfig& cfg,
                 const std::string& out_dir) {
    auto data = load_dataset(csv_path, cfg);

    std::vector<infs::SelectionMethod> methods;
    if (method_flags.empty()) {
        methods = {infs::SelectionMethod::micc, infs::SelectionMethod::mifs,
                   infs::SelectionMethod::mrmr, infs::SelectionMethod::anova_f,
                   infs::SelectionMethod::gini};
    } else {
        for (const auto& flag : method_flags) {
            std::stringstream ss(flag);
            std::string token;
            while (std::getline(ss, token, ',')) {
                if (!token.empty()) methods.push_back(infs::selection_method_from_string(token));
            }
        }
    }

    infs::CompareOptions options;
    options.bins = cfg.bins;
    options.divisor = cfg.avg_corr_divisor;
    options.folds = cfg.cv_folds;
    options.seed = cfg.seed;
    auto reports =
        infs::compare_methods(data, methods, size, cfg.resolved_classifiers().front(), options);

    json method_json = json::array();
    std::ostringstream csv_out;
    csv_out << "method,f1,subset_size\n";
    for (const auto& r : reports) {
        method_json.push_back({{"method", r.method},
                               {"features", r.features},
                               {"subset_size", r.subset_size},
                               {"f1", r.f1},
                               {"metrics", infs::to_json(r.metrics)}});
        csv_out << r.method << ',' << format_double(r.f1) << ',' << r.subset_size << "\n";
        std::cout << r.method << ": f1 " << r.f1 << " at size " << r.subset_size << "\n";
    }

    json results{{"subset_size", size}, {"methods", method_json}};
    emit_report(out_dir + "/compare_report.json", infs::report_envelope("compare", cfg, results),
                "compare_report.schema.json");
    std::string csv_path_out = out_dir + "/compare_report.csv";
    infs::atomic_write_text(csv_path_out, csv_out.str());
    std::cout << "wrote " << csv_path_out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental feature selection with mutual-information/correlation scoring"};
    app.require_subcommand(1);

    std::string label_col, rank_semantics, avg_corr_divisor, out_dir = ".", config_path;
    int bins = 0, folds = 0;
    double alpha = 0.0, rho = 0.0, tolerance = 0.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::vector<std::string> classifier_flags;

    app.add_option("--label-col", label_col, "label column name or 0-based index");
    app.add_option("--bins", bins, "histogram bins for mutual information");
    app.add_option("--alpha", alpha, "rank threshold for merge admission, in (0,1)");
    app.add_option("--rho", rho, "fraction of ranked features kept per batch, in (0,1]");
    app.add_option("--folds", folds, "cross-validation folds");
    app.add_option("--seed", seed, "master random seed");
    app.add_option("--tolerance", tolerance, "accuracy tolerance for the optimal subset");
    app.add_option("--classifier", classifier_flags,
                   "classifier spec kind[:key=val,...]; repeatable");
    app.add_option("--rank-semantics", rank_semantics, "alpha threshold reading: order|score");
    app.add_option("--avg-corr-divisor", avg_corr_divisor, "average-correlation divisor: d|d-1");
    app.add_option("--threads", threads, "worker threads (0 = machine parallelism)");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--config", config_path, "JSON config file (or env INFS_MICC_CONFIG)");

    auto* sc_pre = app.add_subcommand("preprocess", "impute, drop zero-variance, normalize");
    std::string pre_csv;
    sc_pre->add_option("csv", pre_csv, "input CSV")->required();
    sc_pre->fallthrough();

    auto* sc_score = app.add_subcommand("score", "rank one batch and save its state");
    std::string score_csv, batch_id;
    std::uint64_t ordinal = 1;
    sc_score->add_option("csv", score_csv, "input CSV")->required();
    sc_score->add_option("--batch-id", batch_id, "batch identifier (default: CSV stem)");
    sc_score->add_option("--ordinal", ordinal, "arrival ordinal of this batch");
    sc_score->fallthrough();

    auto* sc_merge = app.add_subcommand("merge", "merge two saved batch states");
    std::string old_state_path, new_state_path, new_csv;
    sc_merge->add_option("old_state", old_state_path, "older batch state JSON")->required();
    sc_merge->add_option("new_state", new_state_path, "newer batch state JSON")->required();
    sc_merge->add_option("--new-csv", new_csv, "new batch CSV for the satisfaction check");
    sc_merge->fallthrough();

    auto* sc_rfe = app.add_subcommand("rfe", "evaluate ranked-list prefixes, pick optimal subset");
    std::string rfe_csv, rfe_list, selector = "accuracy";
    std::size_t max_size = 0;
    sc_rfe->add_option("csv", rfe_csv, "input CSV")->required();
    sc_rfe->add_option("ranking", rfe_list, "batch state or merge result JSON")->required();
    sc_rfe->add_option("--selector", selector, "optimum selector: accuracy|f1")
        ->check(CLI::IsMember({"accuracy", "f1"}));
    sc_rfe->add_option("--max-size", max_size, "largest prefix to evaluate (0 = all)");
    sc_rfe->fallthrough();

    auto* sc_cmp = app.add_subcommand("compare", "compare selection methods at one subset size");
    std::string cmp_csv;
    std::size_t cmp_size = 0;
    std::vector<std::string> method_flags;
    sc_cmp->add_option("csv", cmp_csv, "input CSV")->required();
    sc_cmp->add_option("--size", cmp_size, "subset size to evaluate")->required();
    sc_cmp->add_option("--methods", method_flags,
                       "methods to include (micc,mifs,mrmr,anova_f,gini); repeatable");
    sc_cmp->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        infs::set_thread_count(threads);

        std::string cfg_file = config_path;
        if (cfg_file.empty()) {
            if (const char* env = std::getenv("INFS_MICC_CONFIG")) cfg_file = env;
        }
        infs::RunConfig cfg;
        if (!cfg_file.empty()) {
            json j = infs::load_json_file(cfg_file);
            infs::validate_against_schema(j, load_schema("config.schema.json"));
            cfg = infs::run_config_from_json(j);
        }
        if (app.count("--label-col")) cfg.label_column = label_col;
        if (app.count("--bins")) cfg.bins = bins;
        if (app.count("--alpha")) cfg.alpha = alpha;
        if (app.count("--rho")) cfg.rho = rho;
        if (app.count("--folds")) cfg.cv_folds = folds;
        if (app.count("--seed")) cfg.seed = seed;
        if (app.count("--tolerance")) cfg.tolerance = tolerance;
        if (app.count("--rank-semantics")) {
            cfg.rank_semantics = infs::rank_semantics_from_string(rank_semantics);
        }
        if (app.count("--avg-corr-divisor")) {
            cfg.avg_corr_divisor = infs::avg_corr_divisor_from_string(avg_corr_divisor);
        }
        if (app.count("--classifier")) {
            cfg.classifiers.clear();
            for (const auto& flag : classifier_flags) {
                cfg.classifiers.push_back(infs::classifier_spec_from_flag(flag));
            }
        }
        cfg.validate();
        fs::create_directories(out_dir);

        if (*sc_pre) {
            cmd_preprocess(pre_csv, cfg, out_dir);
        } else if (*sc_score) {
            if (batch_id.empty()) batch_id = fs::path(score_csv).stem().string();
            cmd_score(score_csv, batch_id, ordinal, cfg, out_dir);
        } else if (*sc_merge) {
            cmd_merge(old_state_path, new_state_path, new_csv, cfg, out_dir);
        } else if (*sc_rfe) {
            cmd_rfe(rfe_csv, rfe_list, selector, max_size, cfg, out_dir);
        } else if (*sc_cmp) {
            cmd_compare(cmp_csv, cmp_size, method_flags, cfg, out_dir);
        }
        return 0;
    } catch (const infs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == infs::Error::Kind::validation ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
