#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "adjvar/common/csv.hpp"
#include "adjvar/common/date.hpp"
#include "adjvar/common/parallel.hpp"
#include "adjvar/common/random.hpp"
#include "adjvar/ingest.hpp"
#include "adjvar/scoring.hpp"

namespace adjvar {

class SeriesError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct WeeklyPoint {
    Date week_start;  // Monday
    double value = 0;
    std::size_t count = 0;
    friend bool operator==(const WeeklyPoint&, const WeeklyPoint&) = default;
};

using WeeklySeries = std::vector<WeeklyPoint>;

// Mean gamma per Monday-start week of decision_date; empty weeks omitted.
inline WeeklySeries aggregate_weekly(const ScoreTable& table, std::span<const ProceedingRecord> records) {
    std::unordered_map<std::string_view, double> gamma;
    for (const auto& p : table.proceedings)
        if (p.gamma) gamma.emplace(p.proceeding_id, *p.gamma);
    std::map<Date, std::pair<double, std::size_t>> weeks;
    for (const auto& r : records) {
        if (!r.decision_date) continue;
        const auto it = gamma.find(r.proceeding_id);
        if (it == gamma.end()) continue;
        auto& w = weeks[week_start(*r.decision_date)];
        w.first += it->second;
        ++w.second;
    }
    if (weeks.empty()) throw SeriesError("aggregate_weekly: no records with a partisanship score");
    WeeklySeries out;
    out.reserve(weeks.size());
    for (const auto& [d, sc] : weeks) out.push_back({d, sc.first / static_cast<double>(sc.second), sc.second});
    return out;
}

inline void write_weekly_series(std::ostream& out, const WeeklySeries& s) {
    csv::write_row(out, {"week_start", "value", "count"});
    for (const auto& p : s) csv::write_row(out, {p.week_start.str(), csv::format_double(p.value), std::to_string(p.count)});
}

inline constexpr double kYearDays = 365.25;

struct TrendOptions {
    double changepoint_scale = 0.1;
    double seasonality_scale = 0.01;
    std::size_t n_changepoints = 25;
    std::size_t fourier_order = 10;
    double changepoint_range = 0.8;
    bool count_weighted = false;
    std::optional<std::uint64_t> random_changepoints_seed;  // unset = uniform grid
    std::size_t max_sweeps = 20000;
    double tolerance = 1e-13;  // relative objective decrease per sweep
};

// trend(t) = k t + m + sum_j delta_j (t - s_j)_+ with t = (day - origin) / span;
// seasonality(day) = sum_n a_n cos(2 pi n day / 365.25) + b_n sin(...).
struct TrendModel {
    Date origin;
    double span_days = 1;
    double k = 0, m = 0;
    std::vector<double> changepoints;  // scaled time
    std::vector<double> deltas;
    std::vector<double> fourier;  // a_1, b_1, a_2, b_2, ...
    TrendOptions options;
    std::vector<double> objective_history;
    std::size_t sweeps = 0;
    bool converged = false;
    double residual_q10 = 0, residual_q90 = 0;

    double scaled_time(Date d) const { return static_cast<double>(d - origin) / span_days; }

    double trend_at(double t) const {
        double v = k * t + m;
        for (std::size_t j = 0; j < changepoints.size(); ++j)
            if (t > changepoints[j]) v += deltas[j] * (t - changepoints[j]);
        return v;
    }

    double trend(Date d) const { return trend_at(scaled_time(d)); }

    double seasonality(Date d) const {
        double v = 0;
        const double x = 2.0 * std::numbers::pi * static_cast<double>(d.days()) / kYearDays;
        for (std::size_t n = 0; n < fourier.size() / 2; ++n) {
            const double a = x * static_cast<double>(n + 1);
            v += fourier[2 * n] * std::cos(a) + fourier[2 * n + 1] * std::sin(a);
        }
        return v;
    }

    double predict(Date d) const { return trend(d) + seasonality(d); }

    std::size_t nonzero_deltas() const {
        return static_cast<std::size_t>(std::count_if(deltas.begin(), deltas.end(), [](double v) { return v != 0.0; }));
    }
};

namespace detail {

inline std::vector<std::size_t> changepoint_indices(std::size_t size, const TrendOptions& opt) {
    const auto hist = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(static_cast<double>(size) * opt.changepoint_range)));
    std::vector<std::size_t> idx;
    if (opt.n_changepoints == 0) return idx;
    if (opt.random_changepoints_seed) {
        std::vector<std::size_t> pool(hist - 1);
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i + 1;
        Rng rng(derive_seed(*opt.random_changepoints_seed, 0xC9));
        const auto take = std::min(opt.n_changepoints, pool.size());
        for (std::size_t i = 0; i < take; ++i) std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
        idx.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
        std::sort(idx.begin(), idx.end());
        return idx;
    }
    for (std::size_t j = 1; j <= opt.n_changepoints; ++j) {
        const auto i = static_cast<std::size_t>(std::llround(static_cast<double>(j) * static_cast<double>(hist - 1) /
                                                             static_cast<double>(opt.n_changepoints)));
        if (i > 0 && (idx.empty() || idx.back() != i)) idx.push_back(i);
    }
    return idx;
}

inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace detail

// Minimizes sum w (y - yhat)^2 + (1/changepoint_scale) sum |delta| + (1/seasonality_scale) |fourier|^2
// by cyclic coordinate descent on the Gram matrix.
inline TrendModel fit_model(const WeeklySeries& series, const TrendOptions& opt = {}) {
    const std::size_t n = series.size();
    if (n < 2 * opt.fourier_order + opt.n_changepoints + 2) {
        throw SeriesError("fit_model: " + std::to_string(n) + " points, need at least " +
                          std::to_string(2 * opt.fourier_order + opt.n_changepoints + 2));
    }
    if (!(opt.changepoint_scale > 0) || !(opt.seasonality_scale > 0)) throw SeriesError("fit_model: prior scales must be positive");
    if (series.back().week_start <= series.front().week_start) throw SeriesError("fit_model: constant time");
    for (std::size_t i = 1; i < n; ++i)
        if (series[i].week_start <= series[i - 1].week_start) throw SeriesError("fit_model: dates must be strictly increasing");

    TrendModel model;
    model.options = opt;
    model.origin = series.front().week_start;
    model.span_days = static_cast<double>(series.back().week_start - model.origin);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = model.scaled_time(series[i].week_start);
    for (auto i : detail::changepoint_indices(n, opt)) model.changepoints.push_back(t[i]);

    const std::size_t nc = model.changepoints.size();
    const std::size_t nf = 2 * opt.fourier_order;
    const std::size_t p = 2 + nc + nf;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n)), w(static_cast<Eigen::Index>(n));
    double mean_count = 0;
    for (const auto& pt : series) mean_count += static_cast<double>(pt.count);
    mean_count /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        a(r, 0) = t[i];
        a(r, 1) = 1.0;
        for (std::size_t j = 0; j < nc; ++j) a(r, static_cast<Eigen::Index>(2 + j)) = std::max(0.0, t[i] - model.changepoints[j]);
        const double x = 2.0 * std::numbers::pi * static_cast<double>(series[i].week_start.days()) / kYearDays;
        for (std::size_t f = 0; f < opt.fourier_order; ++f) {
            a(r, static_cast<Eigen::Index>(2 + nc + 2 * f)) = std::cos(x * static_cast<double>(f + 1));
            a(r, static_cast<Eigen::Index>(2 + nc + 2 * f + 1)) = std::sin(x * static_cast<double>(f + 1));
        }
        y(r) = series[i].value;
        w(r) = opt.count_weighted && mean_count > 0 ? static_cast<double>(series[i].count) / mean_count : 1.0;
    }
    const Eigen::MatrixXd g = a.transpose() * w.asDiagonal() * a;
    const Eigen::VectorXd c = a.transpose() * (w.array() * y.array()).matrix();
    const double l1 = 1.0 / opt.changepoint_scale;
    const double l2 = 1.0 / opt.seasonality_scale;

    const auto objective = [&](const Eigen::VectorXd& th) {
        const Eigen::VectorXd r = y - a * th;
        double f = (w.array() * r.array().square()).sum();
        for (std::size_t j = 0; j < nc; ++j) f += l1 * std::abs(th(static_cast<Eigen::Index>(2 + j)));
        for (std::size_t j = 0; j < nf; ++j) f += l2 * th(static_cast<Eigen::Index>(2 + nc + j)) * th(static_cast<Eigen::Index>(2 + nc + j));
        return f;
    };

    // Start from the weighted least-squares line.
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    {
        const Eigen::Matrix2d g2 = g.topLeftCorner(2, 2);
        if (std::abs(g2.determinant()) > 0) theta.head(2) = g2.ldlt().solve(c.head(2));
    }
    Eigen::VectorXd gt = g * theta;  // kept equal to G theta
    double f = objective(theta);
    model.objective_history.push_back(f);
    for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        const Eigen::VectorXd prev = theta;
        for (std::size_t j = 0; j < p; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double gjj = g(jj, jj);
            if (gjj <= 0) continue;
            const double rho = c(jj) - (gt(jj) - gjj * theta(jj));
            double next;
            if (j < 2) {
                next = rho / gjj;
            } else if (j < 2 + nc) {
                const double z = std::abs(rho) - l1 / 2.0;
                next = z > 0 ? std::copysign(z, rho) / gjj : 0.0;
            } else {
                next = rho / (gjj + l2);
            }
            const double d = next - theta(jj);
            if (d != 0.0) {
                theta(jj) = next;
                gt += d * g.col(jj);
            }
        }
        model.sweeps = sweep + 1;
        double nf_val = objective(theta);
        if (sweep % 10 == 9 && nf_val <= f) {
            // Exact minimizer over the current support with delta signs held fixed;
            // deltas whose sign would flip leave the support and the solve repeats.
            std::vector<bool> in(p, false);
            for (std::size_t j = 0; j < p; ++j) in[j] = j < 2 || j >= 2 + nc || theta(static_cast<Eigen::Index>(j)) != 0.0;
            for (std::size_t attempt = 0; attempt <= nc; ++attempt) {
                std::vector<Eigen::Index> active;
                for (std::size_t j = 0; j < p; ++j)
                    if (in[j]) active.push_back(static_cast<Eigen::Index>(j));
                const auto na = static_cast<Eigen::Index>(active.size());
                Eigen::MatrixXd h(na, na);
                Eigen::VectorXd rhs(na);
                for (Eigen::Index u = 0; u < na; ++u) {
                    const auto j = active[static_cast<std::size_t>(u)];
                    for (Eigen::Index v = 0; v < na; ++v) h(u, v) = g(j, active[static_cast<std::size_t>(v)]);
                    rhs(u) = c(j);
                    if (j >= 2 && j < static_cast<Eigen::Index>(2 + nc)) rhs(u) -= std::copysign(l1 / 2.0, theta(j));
                    if (j >= static_cast<Eigen::Index>(2 + nc)) h(u, u) += l2;
                }
                const Eigen::VectorXd sol = h.ldlt().solve(rhs);
                if (!sol.allFinite()) break;
                Eigen::VectorXd cand = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
                bool flipped = false;
                for (Eigen::Index u = 0; u < na; ++u) {
                    const auto j = active[static_cast<std::size_t>(u)];
                    if (j >= 2 && j < static_cast<Eigen::Index>(2 + nc) && sol(u) * theta(j) <= 0) {
                        in[static_cast<std::size_t>(j)] = false;
                        flipped = true;
                    }
                    cand(j) = sol(u);
                }
                if (flipped) continue;
                const double cf = objective(cand);
                if (cf < nf_val) {
                    theta = cand;
                    nf_val = cf;
                }
                break;
            }
        }
        const double drop = f - nf_val;
        f = nf_val;
        model.objective_history.push_back(f);
        if (drop <= opt.tolerance * std::max(1.0, f)) {
            model.converged = true;
            break;
        }
        gt = g * theta;
    }

    model.k = theta(0);
    model.m = theta(1);
    model.deltas.assign(theta.data() + 2, theta.data() + 2 + nc);
    model.fourier.assign(theta.data() + 2 + nc, theta.data() + p);
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = series[i].value - model.predict(series[i].week_start);
    model.residual_q10 = detail::quantile(resid, 0.1);
    model.residual_q90 = detail::quantile(resid, 0.9);
    return model;
}

struct DecompositionRow {
    Date date;
    double trend = 0, seasonality = 0, fitted = 0, lower = 0, upper = 0;
    std::optional<double> actual;
};

// Per-week components; lower/upper add the 10th/90th percentile training residuals to fitted.
inline std::vector<DecompositionRow> decompose(const TrendModel& model, Date from, Date to,
                                               const WeeklySeries* actual = nullptr) {
    std::map<Date, double> obs;
    if (actual)
        for (const auto& p : *actual) obs[p.week_start] = p.value;
    std::vector<DecompositionRow> rows;
    for (Date d = week_start(from); d <= to; d = d + 7) {
        DecompositionRow r;
        r.date = d;
        r.trend = model.trend(d);
        r.seasonality = model.seasonality(d);
        r.fitted = r.trend + r.seasonality;
        r.lower = r.fitted + model.residual_q10;
        r.upper = r.fitted + model.residual_q90;
        if (const auto it = obs.find(d); it != obs.end()) r.actual = it->second;
        rows.push_back(r);
    }
    return rows;
}

inline void write_decomposition(std::ostream& out, const std::vector<DecompositionRow>& rows) {
    csv::write_row(out, {"week_start", "trend", "seasonality", "fitted", "lower", "upper", "actual"});
    for (const auto& r : rows) {
        csv::write_row(out, {r.date.str(), csv::format_double(r.trend), csv::format_double(r.seasonality),
                             csv::format_double(r.fitted), csv::format_double(r.lower), csv::format_double(r.upper),
                             csv::format_optional(r.actual)});
    }
}

struct CvFold {
    Date cutoff;  // train on weeks < cutoff, hold out [cutoff, cutoff + 365)
    std::size_t train_points = 0, test_points = 0;
};

struct CvScore {
    double rmse = 0, mae = 0, r2 = 0;
    std::size_t points = 0;
};

struct GridCell {
    double changepoint_scale = 0, seasonality_scale = 0;
    CvScore score;
};

struct GridResult {
    std::vector<CvFold> folds;
    std::vector<GridCell> cells;  // changepoint-major order
    std::size_t best = 0;
    const GridCell& winner() const { return cells.at(best); }
};

inline constexpr std::int32_t kInitialWindowDays = 730;
inline constexpr std::int32_t kHorizonDays = 365;

// Rolling origin: first cutoff 730 days after the first week, then every 365
// days while a full hold-out year remains.
inline std::vector<CvFold> rolling_origin_folds(const WeeklySeries& s) {
    if (s.empty()) throw SeriesError("cross-validation: empty series");
    const Date first = s.front().week_start, last = s.back().week_start;
    if (last - first < kInitialWindowDays + kHorizonDays) {
        throw SeriesError("cross-validation: need at least 3 years of history, have " + std::to_string(last - first) + " days");
    }
    std::vector<CvFold> folds;
    for (Date cut = first + kInitialWindowDays; cut + kHorizonDays <= last + 1; cut = cut + kHorizonDays) {
        CvFold f{cut, 0, 0};
        for (const auto& p : s) {
            if (p.week_start < cut) ++f.train_points;
            else if (p.week_start < cut + kHorizonDays) ++f.test_points;
        }
        folds.push_back(f);
    }
    return folds;
}

inline std::vector<double> default_changepoint_grid() { return {0.001, 0.01, 0.1, 1.0, 10.0}; }
inline std::vector<double> default_seasonality_grid() { return {0.0001, 0.001, 0.01, 0.1, 1.0}; }

// Pooled hold-out RMSE/MAE/R^2 per grid cell; the winner minimizes RMSE (first cell on ties).
inline GridResult grid_search(const WeeklySeries& s, const std::vector<double>& changepoint_scales,
                              const std::vector<double>& seasonality_scales, const TrendOptions& base = {}) {
    if (changepoint_scales.empty() || seasonality_scales.empty()) throw SeriesError("grid_search: empty grid");
    GridResult res;
    res.folds = rolling_origin_folds(s);
    const std::size_t nf = res.folds.size();
    const std::size_t ncell = changepoint_scales.size() * seasonality_scales.size();
    res.cells.resize(ncell);

    std::vector<WeeklySeries> train(nf), test(nf);
    for (std::size_t k = 0; k < nf; ++k)
        for (const auto& p : s) {
            if (p.week_start < res.folds[k].cutoff) train[k].push_back(p);
            else if (p.week_start < res.folds[k].cutoff + kHorizonDays) test[k].push_back(p);
        }

    // predictions[cell][fold] aligned with test[fold]
    std::vector<std::vector<std::vector<double>>> pred(ncell, std::vector<std::vector<double>>(nf));
    std::vector<std::string> errors(ncell * nf);
    parallel_for(ncell * nf, [&](std::size_t task) {
        const std::size_t cell = task / nf, k = task % nf;
        TrendOptions o = base;
        o.changepoint_scale = changepoint_scales[cell / seasonality_scales.size()];
        o.seasonality_scale = seasonality_scales[cell % seasonality_scales.size()];
        try {
            const auto m = fit_model(train[k], o);
            for (const auto& p : test[k]) pred[cell][k].push_back(m.predict(p.week_start));
        } catch (const std::exception& e) {
            errors[task] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw SeriesError("grid_search: fold fit failed: " + e);

    for (std::size_t cell = 0; cell < ncell; ++cell) {
        auto& gc = res.cells[cell];
        gc.changepoint_scale = changepoint_scales[cell / seasonality_scales.size()];
        gc.seasonality_scale = seasonality_scales[cell % seasonality_scales.size()];
        double sse = 0, sae = 0, sum = 0;
        std::size_t cnt = 0;
        for (std::size_t k = 0; k < nf; ++k)
            for (std::size_t i = 0; i < test[k].size(); ++i) {
                const double e = test[k][i].value - pred[cell][k][i];
                sse += e * e;
                sae += std::abs(e);
                sum += test[k][i].value;
                ++cnt;
            }
        if (cnt == 0) throw SeriesError("grid_search: no hold-out points");
        const double mean = sum / static_cast<double>(cnt);
        double sst = 0;
        for (std::size_t k = 0; k < nf; ++k)
            for (const auto& p : test[k]) sst += (p.value - mean) * (p.value - mean);
        gc.score.points = cnt;
        gc.score.rmse = std::sqrt(sse / static_cast<double>(cnt));
        gc.score.mae = sae / static_cast<double>(cnt);
        gc.score.r2 = sst > 0 ? 1.0 - sse / sst : (sse == 0 ? 1.0 : 0.0);
        if (gc.score.rmse < res.cells[res.best].score.rmse) res.best = cell;
    }
    return res;
}

inline void write_grid(std::ostream& out, const GridResult& g) {
    csv::write_row(out, {"changepoint_scale", "seasonality_scale", "rmse", "mae", "r2", "points", "winner"});
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        const auto& c = g.cells[i];
        csv::write_row(out, {csv::format_double(c.changepoint_scale), csv::format_double(c.seasonality_scale),
                             csv::format_double(c.score.rmse), csv::format_double(c.score.mae),
                             csv::format_double(c.score.r2), std::to_string(c.score.points),
                             std::string(i == g.best ? "true" : "false")});
    }
}

}  // namespace adjvar
