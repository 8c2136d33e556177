#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "adjvar/common/csv.hpp"
#include "adjvar/common/parallel.hpp"
#include "adjvar/common/random.hpp"
#include "adjvar/feature_matrix.hpp"
#include "adjvar/models/forest.hpp"

namespace adjvar {

class UndefinedCorrelation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// count(category) / column length; nullopt entries stay null.
inline std::vector<double> frequency_encode(const std::vector<std::optional<std::string>>& column) {
    if (column.empty()) throw std::invalid_argument("frequency_encode: empty column");
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& v : column)
        if (v) ++counts[*v];
    const double n = static_cast<double>(column.size());
    std::vector<double> out;
    out.reserve(column.size());
    for (const auto& v : column) out.push_back(v ? static_cast<double>(counts[*v]) / n : kNull);
    return out;
}

namespace detail {

struct Moments {
    std::size_t n = 0;
    double sxx = 0, syy = 0, sxy = 0;
};

// Centered sums over rows where both inputs are non-null.
inline Moments pairwise_moments(const std::vector<double>& x, const std::vector<double>& y) {
    Moments m;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_null(x[i]) || is_null(y[i])) continue;
        ++m.n;
        mx += x[i];
        my += y[i];
    }
    if (m.n == 0) return m;
    mx /= static_cast<double>(m.n);
    my /= static_cast<double>(m.n);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_null(x[i]) || is_null(y[i])) continue;
        const double dx = x[i] - mx, dy = y[i] - my;
        m.sxx += dx * dx;
        m.syy += dy * dy;
        m.sxy += dx * dy;
    }
    return m;
}

inline bool has_variance(const std::vector<double>& v) {
    double first = kNull;
    for (double x : v) {
        if (is_null(x)) continue;
        if (is_null(first)) first = x;
        else if (x != first) return true;
    }
    return false;
}

// 1-based average ranks; ties share the mean of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace detail

// Pearson r with pairwise deletion; nullopt when fewer than 2 shared rows or either side is constant.
inline std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    const auto m = detail::pairwise_moments(x, y);
    if (m.n < 2 || m.sxx == 0 || m.syy == 0) return std::nullopt;
    return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

struct PruneResult {
    FeatureMatrix matrix;
    std::vector<std::string> dropped_constant;
    std::vector<std::pair<std::string, std::string>> dropped_correlated;  // (dropped, kept)
};

// Drops zero-variance columns, then scans in column order and drops any column
// whose |r| with an earlier survivor exceeds the threshold.
inline PruneResult prune_correlated_report(const FeatureMatrix& m, double threshold = 0.95) {
    PruneResult out;
    out.matrix = FeatureMatrix(m.rows());
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!detail::has_variance(m.column(c))) {
            out.dropped_constant.push_back(m.name(c));
            continue;
        }
        bool drop = false;
        for (auto k : kept) {
            const auto r = pearson(m.column(k), m.column(c));
            if (r && std::abs(*r) > threshold) {
                out.dropped_correlated.emplace_back(m.name(c), m.name(k));
                drop = true;
                break;
            }
        }
        if (drop) continue;
        kept.push_back(c);
        out.matrix.add_column(m.name(c), m.kind(c), m.column(c));
    }
    return out;
}

inline FeatureMatrix prune_correlated(const FeatureMatrix& m, double threshold = 0.95) {
    return prune_correlated_report(m, threshold).matrix;
}

struct SpearmanResult {
    double rho = 0;
    double p = 1;
    std::size_t n = 0;
};

// Rank correlation after pairwise null removal; p from the t approximation with n - 2 df.
inline SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    std::vector<double> a, b;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_null(x[i]) || is_null(y[i])) continue;
        a.push_back(x[i]);
        b.push_back(y[i]);
    }
    if (a.size() < 3) throw std::invalid_argument("spearman: need at least 3 paired values");
    if (!detail::has_variance(a) || !detail::has_variance(b)) {
        throw UndefinedCorrelation("spearman: constant input, rho undefined");
    }
    const auto r = pearson(detail::average_ranks(a), detail::average_ranks(b));
    SpearmanResult s;
    s.n = a.size();
    s.rho = *r;
    if (std::abs(s.rho) >= 1.0) {
        s.p = 0.0;
    } else {
        const double df = static_cast<double>(s.n - 2);
        const double t = s.rho * std::sqrt(df / (1.0 - s.rho * s.rho));
        const boost::math::students_t dist(df);
        s.p = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
    }
    return s;
}

// flag_i = p_i < alpha / m.
inline std::vector<bool> bonferroni(const std::vector<double>& p_values, double alpha) {
    if (p_values.empty()) throw std::invalid_argument("bonferroni: empty p-value list");
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("bonferroni: alpha must be in (0,1)");
    const double cut = alpha / static_cast<double>(p_values.size());
    std::vector<bool> flags;
    flags.reserve(p_values.size());
    for (double p : p_values) {
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("bonferroni: p-value outside [0,1]");
        flags.push_back(p < cut);
    }
    return flags;
}

struct BagOptions {
    std::size_t replicates = 1000;
    std::size_t sample_size = 5000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    ForestParams forest;  // task and seed are set per replicate
};

struct FeatureImportance {
    std::string feature;
    double mean = 0;
    double std = 0;
    std::optional<double> coefficient;  // Spearman rho vs target
    std::optional<double> p;
    bool significant = false;
};

struct ImportanceSummary {
    std::string target;
    ForestTask task = ForestTask::Regression;
    std::size_t rows = 0;  // rows with non-null target
    std::size_t replicates = 0;
    std::size_t tested = 0;  // Bonferroni m: features with a defined coefficient
    double alpha = 0.05;
    std::vector<FeatureImportance> features;
};

// Bootstrap-bagged forest importances plus Spearman significance per feature.
inline ImportanceSummary bag_importances(const FeatureMatrix& matrix, const std::vector<double>& target,
                                         const BagOptions& opt = {}, std::string target_name = "target") {
    if (target.size() != matrix.rows()) throw std::invalid_argument("bag_importances: target length mismatch");
    if (matrix.cols() == 0) throw std::invalid_argument("bag_importances: no features");
    if (opt.replicates == 0 || opt.sample_size == 0) throw std::invalid_argument("bag_importances: zero replicates or sample size");

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < target.size(); ++i)
        if (!is_null(target[i])) keep.push_back(i);
    if (!detail::has_variance(target)) throw std::invalid_argument("bag_importances: target is constant");

    const FeatureMatrix m = matrix.select_rows(keep);
    const Eigen::MatrixXd x = m.to_dense(-1.0);
    Eigen::VectorXd y(static_cast<Eigen::Index>(keep.size()));
    bool binary = true;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        y(static_cast<Eigen::Index>(i)) = target[keep[i]];
        binary = binary && (target[keep[i]] == 0.0 || target[keep[i]] == 1.0);
    }

    ImportanceSummary out;
    out.target = std::move(target_name);
    out.task = binary ? ForestTask::Classification : ForestTask::Regression;
    out.rows = keep.size();
    out.replicates = opt.replicates;
    out.alpha = opt.alpha;

    const std::size_t n = keep.size();
    const auto p = static_cast<Eigen::Index>(m.cols());
    std::vector<Eigen::VectorXd> imp(opt.replicates);
    parallel_for(opt.replicates, [&](std::size_t r) {
        Rng rng(derive_seed(opt.seed, r));
        std::vector<std::size_t> rows;
        if (opt.sample_size <= n) {
            std::vector<std::size_t> all(n);
            std::iota(all.begin(), all.end(), std::size_t{0});
            for (std::size_t k = 0; k < opt.sample_size; ++k) std::swap(all[k], all[k + uniform_index(rng, n - k)]);
            rows.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(opt.sample_size));
        } else {
            rows.resize(opt.sample_size);
            for (auto& v : rows) v = uniform_index(rng, n);
        }
        ForestParams fp = opt.forest;
        fp.task = out.task;
        fp.seed = derive_seed(opt.seed ^ 0xF0F0F0F0ULL, r);
        imp[r] = fit_forest(take_rows(x, rows), take_rows(y, rows), fp).importances;
    });

    const double reps = static_cast<double>(opt.replicates);
    std::vector<double> y_kept(y.data(), y.data() + y.size());
    for (Eigen::Index f = 0; f < p; ++f) {
        FeatureImportance fi;
        fi.feature = m.name(static_cast<std::size_t>(f));
        double s = 0;
        for (const auto& v : imp) s += v(f);
        fi.mean = s / reps;
        double ss = 0;
        for (const auto& v : imp) ss += (v(f) - fi.mean) * (v(f) - fi.mean);
        fi.std = std::sqrt(ss / reps);
        try {
            const auto sp = spearman(m.column(static_cast<std::size_t>(f)), y_kept);
            fi.coefficient = sp.rho;
            fi.p = sp.p;
        } catch (const std::exception&) {
        }
        out.features.push_back(std::move(fi));
    }
    std::vector<double> ps;
    for (const auto& f : out.features)
        if (f.p) ps.push_back(*f.p);
    out.tested = ps.size();
    if (!ps.empty()) {
        const auto flags = bonferroni(ps, opt.alpha);
        std::size_t k = 0;
        for (auto& f : out.features)
            if (f.p) f.significant = flags[k++];
    }
    return out;
}

// feature,mean,std,coefficient,p,significant; undefined coefficients are empty.
inline void write_importances(std::ostream& out, const ImportanceSummary& s) {
    csv::write_row(out, {"feature", "mean", "std", "coefficient", "p", "significant"});
    for (const auto& f : s.features) {
        csv::write_row(out, {f.feature, csv::format_double(f.mean), csv::format_double(f.std),
                             csv::format_optional(f.coefficient), csv::format_optional(f.p),
                             std::string(f.significant ? "true" : "false")});
    }
}

}  // namespace adjvar
