#pragma once

// Stage orchestration for the command-line tool: every artifact lands in the
// output directory and is listed with its SHA-256 in manifest.json.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "adjvar/common/csv.hpp"
#include "adjvar/common/parallel.hpp"
#include "adjvar/feature_matrix.hpp"
#include "adjvar/ingest.hpp"
#include "adjvar/models/suite.hpp"
#include "adjvar/scoring.hpp"
#include "adjvar/stats.hpp"
#include "adjvar/svg.hpp"
#include "adjvar/synth.hpp"
#include "adjvar/timeseries.hpp"

namespace adjvar {

inline constexpr std::string_view kToolVersion = "0.1.0";

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

// ---------------------------------------------------------------------------
// describe

struct YearRow {
    int year = 0;
    std::size_t cases = 0, grants = 0, represented = 0, representation_known = 0;
    double grant_rate() const { return cases ? static_cast<double>(grants) / static_cast<double>(cases) : 0.0; }
    double representation_rate() const {
        return representation_known ? static_cast<double>(represented) / static_cast<double>(representation_known) : 0.0;
    }
};

struct CustodyRow {
    std::string represented, custody;
    std::size_t count = 0;
    double share = 0;  // within the representation group
};

struct DurationRow {
    std::string represented;
    std::size_t count = 0;
    double mean_days = 0, median_days = 0, p25_days = 0, p75_days = 0;
};

struct DescribeReport {
    std::vector<YearRow> years;  // by decision year, decided records
    std::vector<CustodyRow> custody;
    std::vector<DurationRow> duration;  // decision_date - charge_date, decided records
    std::size_t records = 0, pending = 0;
};

inline std::int32_t duration_days(const ProceedingRecord& r) {
    if (!r.decision_date) throw std::invalid_argument("duration_days: record has no decision date");
    return *r.decision_date - r.charge_date;
}

inline DescribeReport describe(const Corpus& corpus) {
    if (corpus.records.empty()) throw std::invalid_argument("describe: empty corpus");
    DescribeReport rep;
    rep.records = corpus.records.size();
    std::map<int, YearRow> years;
    std::map<std::string, std::map<std::string, std::size_t>> custody;
    std::map<std::string, std::vector<double>> durations;
    const auto rep_label = [](const ProceedingRecord& r) -> std::string {
        return r.represented ? (*r.represented ? "true" : "false") : "unknown";
    };
    for (const auto& r : corpus.records) {
        custody[rep_label(r)][r.custody ? std::string(to_string(*r.custody)) : "unknown"]++;
        if (!r.decided()) {
            ++rep.pending;
            continue;
        }
        auto& y = years[r.decision_date->year()];
        y.year = r.decision_date->year();
        ++y.cases;
        y.grants += r.decision == Decision::Grant;
        if (r.represented) {
            ++y.representation_known;
            y.represented += *r.represented;
        }
        durations[rep_label(r)].push_back(static_cast<double>(duration_days(r)));
    }
    for (auto& [_, y] : years) rep.years.push_back(y);
    for (const auto& [repr, by] : custody) {
        std::size_t total = 0;
        for (const auto& [_, n] : by) total += n;
        for (const auto& [c, n] : by)
            rep.custody.push_back({repr, c, n, static_cast<double>(n) / static_cast<double>(total)});
    }
    for (auto& [repr, v] : durations) {
        std::sort(v.begin(), v.end());
        DurationRow d;
        d.represented = repr;
        d.count = v.size();
        double s = 0;
        for (double x : v) s += x;
        d.mean_days = s / static_cast<double>(v.size());
        d.median_days = detail::quantile(v, 0.5);
        d.p25_days = detail::quantile(v, 0.25);
        d.p75_days = detail::quantile(v, 0.75);
        rep.duration.push_back(d);
    }
    return rep;
}

inline std::string yearly_csv(const DescribeReport& r) {
    std::ostringstream out;
    csv::write_row(out, {"year", "cases", "grants", "grant_rate", "representation_rate"});
    for (const auto& y : r.years) {
        csv::write_row(out, {std::to_string(y.year), std::to_string(y.cases), std::to_string(y.grants),
                             csv::format_double(y.grant_rate()), csv::format_double(y.representation_rate())});
    }
    return out.str();
}

inline std::string custody_csv(const DescribeReport& r) {
    std::ostringstream out;
    csv::write_row(out, {"represented", "custody", "count", "share"});
    for (const auto& c : r.custody)
        csv::write_row(out, {c.represented, c.custody, std::to_string(c.count), csv::format_double(c.share)});
    return out.str();
}

inline std::string duration_csv(const DescribeReport& r) {
    std::ostringstream out;
    csv::write_row(out, {"represented", "count", "mean_days", "median_days", "p25_days", "p75_days"});
    for (const auto& d : r.duration) {
        csv::write_row(out, {d.represented, std::to_string(d.count), csv::format_double(d.mean_days),
                             csv::format_double(d.median_days), csv::format_double(d.p25_days),
                             csv::format_double(d.p75_days)});
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// correlate: feature matrix over decided records

struct CorrelationData {
    FeatureMatrix features;
    std::map<std::string, std::vector<double>> targets;  // gamma, phi, president_party (1 = PartyA)
};

inline CorrelationData build_correlation_data(const Corpus& corpus, const ScoreTable& scores) {
    std::vector<const ProceedingRecord*> rows;
    for (const auto& r : corpus.records)
        if (r.decided()) rows.push_back(&r);
    const std::size_t n = rows.size();
    CorrelationData d;
    d.features = FeatureMatrix(n);

    const auto categorical = [&](const std::string& name, auto get) {
        std::vector<std::optional<std::string>> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = get(*rows[i]);
        if (n) d.features.add_column(name, ColumnKind::FrequencyEncoded, frequency_encode(col));
    };
    const auto numeric = [&](const std::string& name, auto get) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = get(*rows[i]);
        d.features.add_column(name, ColumnKind::RawNumeric, std::move(col));
    };
    numeric("decision", [](const ProceedingRecord& r) { return r.decision == Decision::Grant ? 1.0 : 0.0; });
    numeric("represented", [](const ProceedingRecord& r) { return r.represented ? (*r.represented ? 1.0 : 0.0) : kNull; });
    numeric("decision_year", [](const ProceedingRecord& r) { return static_cast<double>(r.decision_date->year()); });
    numeric("duration_days", [](const ProceedingRecord& r) { return static_cast<double>(duration_days(r)); });
    numeric("state_leaning_party_a", [](const ProceedingRecord& r) {
        return r.climate ? (r.climate->state_leaning == Party::PartyA ? 1.0 : 0.0) : kNull;
    });
    categorical("custody", [](const ProceedingRecord& r) {
        return r.custody ? std::optional<std::string>(to_string(*r.custody)) : std::nullopt;
    });
    categorical("nationality", [](const ProceedingRecord& r) { return std::optional<std::string>(r.nationality); });
    categorical("court_id", [](const ProceedingRecord& r) { return std::optional<std::string>(r.court_id); });
    categorical("state", [](const ProceedingRecord& r) { return r.state; });
    categorical("judge_id", [](const ProceedingRecord& r) { return r.judge_id; });

    for (std::size_t k = 0; k < corpus.covariate_names.size(); ++k) {
        bool any_string = false;
        for (auto* r : rows) any_string = any_string || std::holds_alternative<std::string>(r->covariates[k]);
        if (any_string) {
            categorical(corpus.covariate_names[k], [k](const ProceedingRecord& r) -> std::optional<std::string> {
                const auto& v = r.covariates[k];
                if (const auto* s = std::get_if<std::string>(&v)) return *s;
                if (const auto* x = std::get_if<double>(&v)) return csv::format_double(*x);
                return std::nullopt;
            });
        } else {
            numeric(corpus.covariate_names[k], [k](const ProceedingRecord& r) {
                const auto* x = std::get_if<double>(&r.covariates[k]);
                return x ? *x : kNull;
            });
        }
    }

    Corpus decided;
    decided.covariate_names = corpus.covariate_names;
    for (auto* r : rows) decided.records.push_back(*r);
    d.features.append(add_null_indicators(decided));

    const auto joined = join_scores(corpus.records, scores);
    auto& gamma = d.targets["gamma"];
    auto& phi = d.targets["phi"];
    auto& pres = d.targets["president_party"];
    for (std::size_t i = 0; i < n; ++i) {
        gamma.push_back(joined[i].gamma.value_or(kNull));
        phi.push_back(joined[i].phi.value_or(kNull));
        pres.push_back(rows[i]->climate ? (rows[i]->climate->president_party == Party::PartyA ? 1.0 : 0.0) : kNull);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Run configuration, artifacts and manifest

struct RunConfig {
    std::string command;
    std::string input;
    std::string output_dir = "adjvar-out";
    std::string mapping;           // empty = canonical columns
    std::string administrations;   // empty = shipped table
    std::string state_votes;
    std::string scenario;          // simulate
    std::uint64_t seed = 0;
    unsigned threads = 0;
    double prune_threshold = 0.95;
    double alpha = 0.05;
    double changepoint_scale = 0.1;
    double seasonality_scale = 0.01;
    bool judge_weighted = false;
    bool count_weighted_weeks = false;
    std::vector<std::string> targets = {"gamma", "phi", "president_party"};
    std::size_t replicates = 1000;
    std::size_t sample_size = 5000;
    std::size_t trees = 100;
    std::size_t tree_sample_cap = 1000;
    bool grid = true;
    bool svg = false;

    nlohmann::json parameters() const {
        return {{"input", input},
                {"mapping", mapping},
                {"administrations", administrations},
                {"state_votes", state_votes},
                {"scenario", scenario},
                {"seed", seed},
                {"prune_threshold", prune_threshold},
                {"alpha", alpha},
                {"changepoint_scale", changepoint_scale},
                {"seasonality_scale", seasonality_scale},
                {"judge_weighted", judge_weighted},
                {"count_weighted_weeks", count_weighted_weeks},
                {"targets", targets},
                {"replicates", replicates},
                {"sample_size", sample_size},
                {"trees", trees},
                {"tree_sample_cap", tree_sample_cap},
                {"grid", grid},
                {"svg", svg}};
    }
};

class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

class RunContext {
public:
    explicit RunContext(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.output_dir) {
        std::filesystem::create_directories(dir_);
        std::filesystem::remove(dir_ / "FAILED");
        manifest_["tool"] = "adjvar";
        manifest_["version"] = kToolVersion;
        manifest_["command"] = cfg.command;
        manifest_["seed"] = cfg.seed;
        manifest_["parameters"] = cfg.parameters();
        manifest_["inputs"] = nlohmann::json::array();
        manifest_["stages"] = nlohmann::json::array();
    }

    const RunConfig& config() const noexcept { return cfg_; }
    const std::filesystem::path& dir() const noexcept { return dir_; }

    void record_input(const std::string& path) {
        if (path.empty()) return;
        manifest_["inputs"].push_back({{"path", path}, {"sha256", sha256_hex(read_file(path))}});
    }

    void begin(const std::string& stage) {
        manifest_["stages"].push_back({{"name", stage}, {"status", "running"}, {"outputs", nlohmann::json::array()},
                                       {"warnings", nlohmann::json::array()}});
    }

    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        out << content;
        out.close();
        current()["outputs"].push_back({{"file", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }

    void warn(const std::string& message) { current()["warnings"].push_back(message); }
    void set(const std::string& key, nlohmann::json value) { current()[key] = std::move(value); }
    void finish() { current()["status"] = "ok"; }

    void fail(const StageError& e) {
        if (!manifest_["stages"].empty()) current()["status"] = "failed";
        manifest_["error"] = e.what();
        std::ofstream(dir_ / "FAILED", std::ios::binary) << e.what() << '\n';
    }

    void save_manifest() const {
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << manifest_.dump(2) << '\n';
    }

    const nlohmann::json& manifest() const noexcept { return manifest_; }

private:
    nlohmann::json& current() { return manifest_["stages"].back(); }

    RunConfig cfg_;
    std::filesystem::path dir_;
    nlohmann::json manifest_;
};

// Runs fn as a named stage; any exception becomes a StageError tagged with the stage.
template <class Fn>
auto run_stage(RunContext& ctx, const std::string& stage, Fn&& fn) -> decltype(fn()) {
    ctx.begin(stage);
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            ctx.finish();
        } else {
            auto result = fn();
            ctx.finish();
            return result;
        }
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

inline ReferenceTables load_tables(const RunConfig& cfg) {
    if (cfg.administrations.empty() != cfg.state_votes.empty()) {
        throw ConfigError("--administrations and --state-votes must be given together");
    }
    if (cfg.administrations.empty()) return ReferenceTables::shipped();
    return ReferenceTables::load(cfg.administrations, cfg.state_votes);
}

// ---------------------------------------------------------------------------
// Stages

inline Corpus stage_ingest(RunContext& ctx) {
    return run_stage(ctx, "ingest", [&] {
        const auto& cfg = ctx.config();
        if (cfg.input.empty()) throw ConfigError("--input is required");
        const auto mapping = cfg.mapping.empty() ? ColumnMapping::canonical() : ColumnMapping::load(cfg.mapping);
        ctx.record_input(cfg.input);
        ctx.record_input(cfg.mapping);
        ctx.record_input(cfg.administrations);
        ctx.record_input(cfg.state_votes);
        auto parsed = parse_corpus(cfg.input, mapping);
        const auto tables = load_tables(cfg);
        std::size_t unresolved = 0;
        for (auto& r : parsed.corpus.records) {
            if (!r.climate) r.climate = resolve_climate(r, tables);
            unresolved += !r.climate;
        }
        parsed.report.climate_unresolved = unresolved;
        if (parsed.corpus.records.empty()) throw std::invalid_argument("no valid records in input");
        std::ostringstream corpus_csv;
        write_corpus(corpus_csv, parsed.corpus);
        ctx.write("corpus.csv", corpus_csv.str());
        ctx.write("ingest_report.json", parsed.report.to_json().dump(2) + "\n");
        if (!parsed.report.rejections.empty()) {
            ctx.warn(std::to_string(parsed.report.rejections.size()) + " rows rejected; see ingest_report.json");
        }
        ctx.set("records", parsed.corpus.records.size());
        return std::move(parsed.corpus);
    });
}

inline void stage_describe(RunContext& ctx, const Corpus& corpus) {
    run_stage(ctx, "describe", [&] {
        const auto rep = describe(corpus);
        ctx.write("describe_yearly.csv", yearly_csv(rep));
        ctx.write("describe_custody.csv", custody_csv(rep));
        ctx.write("describe_duration.csv", duration_csv(rep));
    });
}

inline ScoreTable stage_score(RunContext& ctx, const Corpus& corpus) {
    return run_stage(ctx, "score", [&] {
        ScoringOptions o;
        o.weighting = ctx.config().judge_weighted ? ConsistencyWeighting::PerJudge : ConsistencyWeighting::PerProceeding;
        const auto index = build_index(corpus.records);
        auto table = score_corpus(corpus.records, index, o);
        std::ostringstream p, j;
        write_proceeding_scores(p, table);
        write_judge_scores(j, table);
        ctx.write("proceeding_scores.csv", p.str());
        ctx.write("judge_scores.csv", j.str());

        const auto mean_of = [](auto begin, auto end, auto get) -> nlohmann::json {
            std::vector<double> v;
            for (auto it = begin; it != end; ++it)
                if (const auto x = get(*it)) v.push_back(*x);
            const auto m = order_free_mean(v);
            return m ? nlohmann::json(*m) : nlohmann::json(nullptr);
        };
        std::size_t with_omega = 0, with_gamma = 0, with_phi = 0;
        for (const auto& s : table.proceedings) with_omega += s.omega.has_value(), with_gamma += s.gamma.has_value();
        for (const auto& s : table.judges) with_phi += s.phi.has_value();
        nlohmann::json summary{
            {"weighting", ctx.config().judge_weighted ? "per_judge" : "per_proceeding"},
            {"cohorts", index.cohort_count()},
            {"decided_proceedings", table.proceedings.size()},
            {"proceedings_with_omega", with_omega},
            {"proceedings_with_gamma", with_gamma},
            {"judges", table.judges.size()},
            {"judges_with_phi", with_phi},
            {"mean_omega", mean_of(table.proceedings.begin(), table.proceedings.end(), [](const ProceedingScore& s) { return s.omega; })},
            {"mean_gamma", mean_of(table.proceedings.begin(), table.proceedings.end(), [](const ProceedingScore& s) { return s.gamma; })},
            {"mean_phi", mean_of(table.judges.begin(), table.judges.end(), [](const JudgeScore& s) { return s.phi; })}};
        ctx.write("score_summary.json", summary.dump(2) + "\n");
        return table;
    });
}

inline void stage_correlate(RunContext& ctx, const Corpus& corpus, const ScoreTable& scores) {
    run_stage(ctx, "correlate", [&] {
        const auto& cfg = ctx.config();
        const auto data = build_correlation_data(corpus, scores);
        nlohmann::json summary{{"alpha", cfg.alpha}, {"prune_threshold", cfg.prune_threshold}, {"targets", nlohmann::json::object()}};
        for (std::size_t t = 0; t < cfg.targets.size(); ++t) {
            const auto& name = cfg.targets[t];
            const auto it = data.targets.find(name);
            if (it == data.targets.end()) throw ConfigError("unknown correlate target '" + name + "'");
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < it->second.size(); ++i)
                if (!is_null(it->second[i])) keep.push_back(i);
            std::vector<double> y;
            for (auto i : keep) y.push_back(it->second[i]);
            if (keep.size() < 3 || !detail::has_variance(y)) {
                ctx.warn("target '" + name + "' skipped: fewer than 3 non-null values or constant");
                summary["targets"][name] = {{"skipped", true}};
                continue;
            }
            const auto pruned = prune_correlated_report(data.features.select_rows(keep), cfg.prune_threshold);
            if (pruned.matrix.cols() == 0) {
                ctx.warn("target '" + name + "' skipped: no features survive pruning");
                summary["targets"][name] = {{"skipped", true}};
                continue;
            }
            BagOptions o;
            o.replicates = cfg.replicates;
            o.sample_size = cfg.sample_size;
            o.alpha = cfg.alpha;
            o.seed = derive_seed(cfg.seed, 100 + t);
            o.forest.n_trees = cfg.trees;
            o.forest.max_samples = cfg.tree_sample_cap;
            const auto s = bag_importances(pruned.matrix, y, o, name);
            std::ostringstream out;
            write_importances(out, s);
            ctx.write("importances_" + name + ".csv", out.str());
            nlohmann::json dropped = nlohmann::json::array();
            for (const auto& [d, k] : pruned.dropped_correlated) dropped.push_back({{"dropped", d}, {"kept", k}});
            std::size_t significant = 0;
            for (const auto& f : s.features) significant += f.significant;
            summary["targets"][name] = {{"task", s.task == ForestTask::Classification ? "classification" : "regression"},
                                        {"rows", s.rows},
                                        {"features", pruned.matrix.cols()},
                                        {"bonferroni_m", s.tested},
                                        {"significant", significant},
                                        {"dropped_constant", pruned.dropped_constant},
                                        {"dropped_correlated", dropped}};
        }
        ctx.write("correlate_summary.json", summary.dump(2) + "\n");
    });
}

inline void stage_predict(RunContext& ctx, const Corpus& corpus, const ScoreTable& scores) {
    run_stage(ctx, "predict", [&] {
        SuiteOptions o;
        o.split.seed = derive_seed(ctx.config().seed, 200);
        o.svc.seed = derive_seed(ctx.config().seed, 201);
        const auto rep = predict_decision_suite(scores, corpus.records, o);
        ctx.warn(rep.leakage_warning);
        for (const auto& s : rep.sets) {
            if (s.skipped) {
                ctx.warn(s.name + ": " + s.warning);
                continue;
            }
            std::ostringstream lr, svc;
            s.logistic->save(lr);
            s.svc->save(svc);
            ctx.write("models/" + s.name + ".logistic.txt", lr.str());
            ctx.write("models/" + s.name + ".linear_svc.txt", svc.str());
        }
        ctx.write("predict.json", rep.to_json().dump(2) + "\n");
    });
}

inline void stage_trend(RunContext& ctx, const Corpus& corpus, const ScoreTable& scores) {
    run_stage(ctx, "trend", [&] {
        const auto& cfg = ctx.config();
        const auto series = aggregate_weekly(scores, corpus.records);
        std::ostringstream ws;
        write_weekly_series(ws, series);
        ctx.write("weekly_series.csv", ws.str());

        TrendOptions o;
        o.changepoint_scale = cfg.changepoint_scale;
        o.seasonality_scale = cfg.seasonality_scale;
        o.count_weighted = cfg.count_weighted_weeks;
        nlohmann::json summary;
        if (cfg.grid) {
            try {
                const auto g = grid_search(series, default_changepoint_grid(), default_seasonality_grid(), o);
                std::ostringstream gs;
                write_grid(gs, g);
                ctx.write("trend_grid.csv", gs.str());
                const auto& w = g.winner();
                summary["grid_winner"] = {{"changepoint_scale", w.changepoint_scale},
                                          {"seasonality_scale", w.seasonality_scale},
                                          {"rmse", w.score.rmse},
                                          {"mae", w.score.mae},
                                          {"r2", w.score.r2},
                                          {"folds", g.folds.size()}};
            } catch (const SeriesError& e) {
                ctx.warn(std::string("grid search skipped: ") + e.what());
            }
        }
        const auto m = fit_model(series, o);
        const auto rows = decompose(m, series.front().week_start, series.back().week_start, &series);
        std::ostringstream ds;
        write_decomposition(ds, rows);
        ctx.write("trend_decomposition.csv", ds.str());
        nlohmann::json cps = nlohmann::json::array();
        for (std::size_t j = 0; j < m.changepoints.size(); ++j) {
            const Date at = m.origin + static_cast<std::int32_t>(std::llround(m.changepoints[j] * m.span_days));
            cps.push_back({{"date", at.str()}, {"delta", m.deltas[j]}});
        }
        summary["model"] = {{"changepoint_scale", o.changepoint_scale},
                            {"seasonality_scale", o.seasonality_scale},
                            {"count_weighted", o.count_weighted},
                            {"weeks", series.size()},
                            {"origin", m.origin.str()},
                            {"span_days", m.span_days},
                            {"k", m.k},
                            {"m", m.m},
                            {"changepoints", cps},
                            {"nonzero_deltas", m.nonzero_deltas()},
                            {"fourier", m.fourier},
                            {"converged", m.converged},
                            {"sweeps", m.sweeps},
                            {"objective", m.objective_history.back()},
                            {"interval", {{"lower_residual_quantile", 0.1},
                                          {"upper_residual_quantile", 0.9},
                                          {"lower_offset", m.residual_q10},
                                          {"upper_offset", m.residual_q90},
                                          {"width", m.residual_q90 - m.residual_q10}}}};
        ctx.write("trend.json", summary.dump(2) + "\n");

        if (cfg.svg) {
            std::vector<double> x;
            std::vector<double> trend, season, fitted, actual;
            for (const auto& r : rows) {
                x.push_back(static_cast<double>(r.date.days()));
                trend.push_back(r.trend);
                season.push_back(r.seasonality);
                fitted.push_back(r.fitted);
                actual.push_back(r.actual.value_or(kNull));
            }
            const auto first = rows.front().date.str(), last = rows.back().date.str();
            std::ostringstream a, b, c;
            svg::line_chart(a, "Trend component", x, {{"trend", trend, "#1f77b4", false}}, first, last);
            svg::line_chart(b, "Yearly seasonality", x, {{"seasonality", season, "#2ca02c", false}}, first, last);
            svg::line_chart(c, "Fitted vs weekly mean partisanship", x,
                            {{"weekly mean", actual, "#999999", true}, {"fitted", fitted, "#d62728", false}}, first, last);
            ctx.write("trend_component.svg", a.str());
            ctx.write("trend_seasonality.svg", b.str());
            ctx.write("trend_fitted.svg", c.str());
        }
    });
}

inline void stage_simulate(RunContext& ctx) {
    run_stage(ctx, "simulate", [&] {
        const auto& cfg = ctx.config();
        ScenarioConfig sc;
        if (!cfg.scenario.empty()) {
            ctx.record_input(cfg.scenario);
            sc = ScenarioConfig::load(cfg.scenario);
        }
        sc.seed = cfg.seed;
        const auto corpus = generate(sc, load_tables(cfg));
        std::ostringstream out;
        write_corpus(out, corpus);
        ctx.write("corpus.csv", out.str());
        ctx.set("records", corpus.records.size());
    });
}

// Executes cfg.command; returns the process exit code.
inline int run_pipeline(const RunConfig& cfg, std::ostream& err) {
    set_max_threads(cfg.threads);
    RunContext ctx(cfg);
    try {
        const auto& c = cfg.command;
        if (c == "simulate") {
            stage_simulate(ctx);
        } else {
            const auto corpus = stage_ingest(ctx);
            if (c == "describe" || c == "report") stage_describe(ctx, corpus);
            if (c != "ingest" && c != "describe") {
                const auto scores = stage_score(ctx, corpus);
                if (c == "correlate" || c == "report") stage_correlate(ctx, corpus, scores);
                if (c == "predict" || c == "report") stage_predict(ctx, corpus, scores);
                if (c == "trend" || c == "report") stage_trend(ctx, corpus, scores);
            }
        }
    } catch (const StageError& e) {
        ctx.fail(e);
        ctx.save_manifest();
        err << "adjvar: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        const StageError wrapped("setup", e.what());
        ctx.fail(wrapped);
        ctx.save_manifest();
        err << "adjvar: " << wrapped.what() << '\n';
        return 1;
    }
    ctx.save_manifest();
    return 0;
}

}  // namespace adjvar
