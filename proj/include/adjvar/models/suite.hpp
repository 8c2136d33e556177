#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "adjvar/ingest.hpp"
#include "adjvar/models/linear.hpp"
#include "adjvar/models/metrics.hpp"
#include "adjvar/scoring.hpp"
#include "adjvar/stats.hpp"

namespace adjvar {

inline constexpr std::string_view kLeakageWarning =
    "leakage: gamma, phi and omega are computed from the decisions being predicted, so these metrics overstate "
    "what the scores could predict ahead of a decision";

// One decided proceeding with its scores; label is 1 for Grant.
struct ScoredRow {
    std::optional<double> gamma, phi, omega;
    double label = 0;
};

// Joins decided records with their proceeding scores (by id) and their judge's phi.
inline std::vector<ScoredRow> join_scores(std::span<const ProceedingRecord> records, const ScoreTable& table) {
    std::unordered_map<std::string_view, const ProceedingScore*> by_id;
    by_id.reserve(table.proceedings.size());
    for (const auto& p : table.proceedings) by_id.emplace(p.proceeding_id, &p);
    std::vector<ScoredRow> rows;
    rows.reserve(table.proceedings.size());
    for (const auto& r : records) {
        if (!r.decided()) continue;
        ScoredRow row;
        row.label = r.decision == Decision::Grant ? 1.0 : 0.0;
        if (const auto it = by_id.find(r.proceeding_id); it != by_id.end()) {
            row.gamma = it->second->gamma;
            row.omega = it->second->omega;
        }
        if (r.judge_id) {
            if (const auto* j = table.find_judge(*r.judge_id)) row.phi = j->phi;
        }
        rows.push_back(row);
    }
    return rows;
}

struct FeatureSetResult {
    std::string name;
    std::vector<std::string> features;
    std::size_t usable_rows = 0;
    std::size_t train_rows = 0, test_rows = 0;
    bool skipped = false;
    std::string warning;
    std::optional<LinearModel> logistic, svc;
    Metrics logistic_metrics, svc_metrics, baseline_metrics;
    std::optional<SpearmanResult> spearman_vs_decision;  // single-feature sets only
};

struct SuiteOptions {
    SplitSpec split;
    SvcOptions svc;
    LogisticOptions logistic;
    std::size_t min_rows = 100;
};

struct SuiteReport {
    std::string leakage_warning = std::string(kLeakageWarning);
    std::vector<FeatureSetResult> sets;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["warning"] = leakage_warning;
        j["feature_sets"] = nlohmann::json::array();
        const auto model_json = [](const LinearModel& m, const Metrics& met) {
            nlohmann::json w = nlohmann::json::object();
            for (std::size_t i = 0; i < m.feature_names.size(); ++i) w[m.feature_names[i]] = m.weights(static_cast<Eigen::Index>(i));
            return nlohmann::json{{"weights", w}, {"intercept", m.intercept}, {"iterations", m.iterations},
                                  {"converged", m.converged}, {"metrics", met.to_json()}};
        };
        for (const auto& s : sets) {
            nlohmann::json e{{"name", s.name}, {"features", s.features}, {"usable_rows", s.usable_rows},
                             {"skipped", s.skipped}};
            if (!s.warning.empty()) e["warning"] = s.warning;
            if (!s.skipped) {
                e["train_rows"] = s.train_rows;
                e["test_rows"] = s.test_rows;
                e["logistic"] = model_json(*s.logistic, s.logistic_metrics);
                e["linear_svc"] = model_json(*s.svc, s.svc_metrics);
                e["always_deny_baseline"] = s.baseline_metrics.to_json();
                if (s.spearman_vs_decision) {
                    e["spearman_vs_decision"] = {{"rho", s.spearman_vs_decision->rho},
                                                 {"p", s.spearman_vs_decision->p},
                                                 {"n", s.spearman_vs_decision->n}};
                }
            }
            j["feature_sets"].push_back(std::move(e));
        }
        return j;
    }
};

namespace detail {

inline std::optional<double> score_field(const ScoredRow& r, std::string_view name) {
    if (name == "gamma") return r.gamma;
    if (name == "phi") return r.phi;
    return r.omega;
}

}  // namespace detail

inline FeatureSetResult predict_feature_set(const std::vector<ScoredRow>& rows, std::string name,
                                            std::vector<std::string> features, const SuiteOptions& opt = {}) {
    FeatureSetResult res;
    res.name = std::move(name);
    res.features = std::move(features);
    std::vector<const ScoredRow*> usable;
    for (const auto& r : rows) {
        bool ok = true;
        for (const auto& f : res.features) ok = ok && detail::score_field(r, f).has_value();
        if (ok) usable.push_back(&r);
    }
    res.usable_rows = usable.size();
    if (usable.size() < opt.min_rows) {
        res.skipped = true;
        res.warning = "skipped: " + std::to_string(usable.size()) + " usable rows, need " + std::to_string(opt.min_rows);
        return res;
    }
    const auto n = static_cast<Eigen::Index>(usable.size());
    const auto p = static_cast<Eigen::Index>(res.features.size());
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index f = 0; f < p; ++f)
            x(i, f) = *detail::score_field(*usable[static_cast<std::size_t>(i)], res.features[static_cast<std::size_t>(f)]);
        y(i) = usable[static_cast<std::size_t>(i)]->label;
    }
    const auto split = train_test_split(usable.size(), opt.split);
    const auto xtr = take_rows(x, split.train), xte = take_rows(x, split.test);
    const auto ytr = take_rows(y, split.train), yte = take_rows(y, split.test);
    res.train_rows = split.train.size();
    res.test_rows = split.test.size();
    try {
        res.logistic = fit_logistic(xtr, ytr, opt.logistic);
        res.svc = fit_linear_svc(xtr, ytr, opt.svc);
    } catch (const ModelError& e) {
        res.skipped = true;
        res.warning = std::string("skipped: ") + e.what();
        return res;
    }
    res.logistic->feature_names = res.features;
    res.svc->feature_names = res.features;
    res.logistic_metrics = evaluate(*res.logistic, xte, yte);
    res.svc_metrics = evaluate(*res.svc, xte, yte);
    res.baseline_metrics = evaluate(ConstantClassifier{0}, xte, yte);
    if (p == 1) {
        try {
            res.spearman_vs_decision =
                spearman(std::vector<double>(x.data(), x.data() + n), std::vector<double>(y.data(), y.data() + n));
        } catch (const std::exception&) {
        }
    }
    return res;
}

// Logistic and linear SVC fits on the five score combinations.
inline SuiteReport predict_decision_suite(const ScoreTable& table, std::span<const ProceedingRecord> records,
                                          const SuiteOptions& opt = {}) {
    const auto rows = join_scores(records, table);
    SuiteReport rep;
    const std::pair<const char*, std::vector<std::string>> sets[] = {
        {"partisanship+cohort_consistency", {"gamma", "phi"}},
        {"partisanship+disaggregated_consistency", {"gamma", "omega"}},
        {"partisanship", {"gamma"}},
        {"cohort_consistency", {"phi"}},
        {"disaggregated_consistency", {"omega"}},
    };
    for (const auto& [name, features] : sets) rep.sets.push_back(predict_feature_set(rows, name, features, opt));
    return rep;
}

}  // namespace adjvar
