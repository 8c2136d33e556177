#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adjvar/common/csv.hpp"
#include "adjvar/common/random.hpp"

namespace adjvar {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

struct SplitIndices {
    std::vector<std::size_t> train, test;
};

// Shuffled partition of [0, rows); train size = round(rows * fraction), kept in [1, rows - 1].
inline SplitIndices train_test_split(std::size_t rows, const SplitSpec& spec) {
    if (rows < 2) throw ModelError("train_test_split: need at least 2 rows");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw ModelError("train_test_split: train_fraction must be in (0,1)");
    }
    std::vector<std::size_t> idx(rows);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(derive_seed(spec.seed, 0x5711));
    shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(rows) * spec.train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, rows - 1);
    SplitIndices s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    return s;
}

inline Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

inline Eigen::VectorXd take_rows(const Eigen::VectorXd& y, const std::vector<std::size_t>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(rows[i]));
    return out;
}

enum class LinearKind { Logistic, LinearSVC };

inline std::string_view to_string(LinearKind k) { return k == LinearKind::Logistic ? "logistic" : "linear_svc"; }

struct LinearModel {
    LinearKind kind = LinearKind::Logistic;
    std::vector<std::string> feature_names;
    Eigen::VectorXd weights;
    double intercept = 0.0;
    // Fit diagnostics, not persisted.
    int iterations = 0;
    bool converged = false;

    Eigen::VectorXd decision_function(const Eigen::MatrixXd& x) const {
        if (x.cols() != weights.size()) throw ModelError("predict: feature count mismatch");
        return (x * weights).array() + intercept;
    }

    // 1 iff the decision value is >= 0 (probability >= 0.5 for the logistic model).
    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const {
        return (decision_function(x).array() >= 0.0).cast<double>();
    }

    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const {
        return decision_function(x).unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
    }

    // Versioned text format: header, kind, one "weight<TAB>name<TAB>value" line per feature, intercept.
    void save(std::ostream& out) const {
        out << "adjvar-linear-model v1\n";
        out << "kind\t" << to_string(kind) << '\n';
        for (Eigen::Index i = 0; i < weights.size(); ++i) {
            const auto& name = static_cast<std::size_t>(i) < feature_names.size() ? feature_names[static_cast<std::size_t>(i)]
                                                                                  : "x" + std::to_string(i);
            out << "weight\t" << name << '\t' << csv::format_double(weights(i)) << '\n';
        }
        out << "intercept\t" << csv::format_double(intercept) << '\n';
    }

    static LinearModel load(std::istream& in) {
        std::string line;
        if (!std::getline(in, line) || line != "adjvar-linear-model v1") throw ModelError("model file: bad header");
        LinearModel m;
        std::vector<double> w;
        bool have_intercept = false;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> parts;
            std::stringstream ss(line);
            for (std::string p; std::getline(ss, p, '\t');) parts.push_back(p);
            if (parts[0] == "kind" && parts.size() == 2) {
                if (parts[1] == "logistic") m.kind = LinearKind::Logistic;
                else if (parts[1] == "linear_svc") m.kind = LinearKind::LinearSVC;
                else throw ModelError("model file: unknown kind '" + parts[1] + "'");
            } else if (parts[0] == "weight" && parts.size() == 3) {
                const auto v = csv::parse_double(parts[2]);
                if (!v) throw ModelError("model file: bad weight '" + parts[2] + "'");
                m.feature_names.push_back(parts[1]);
                w.push_back(*v);
            } else if (parts[0] == "intercept" && parts.size() == 2) {
                const auto v = csv::parse_double(parts[1]);
                if (!v) throw ModelError("model file: bad intercept");
                m.intercept = *v;
                have_intercept = true;
            } else {
                throw ModelError("model file: unrecognized line '" + line + "'");
            }
        }
        if (!have_intercept) throw ModelError("model file: missing intercept");
        m.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
        return m;
    }
};

namespace detail {

inline void check_binary_problem(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const char* who) {
    if (x.rows() != y.size()) throw ModelError(std::string(who) + ": X and y row counts differ");
    if (!x.allFinite()) throw ModelError(std::string(who) + ": non-finite feature value");
    std::size_t pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) == 1.0) ++pos;
        else if (y(i) == 0.0) ++neg;
        else throw ModelError(std::string(who) + ": labels must be 0 or 1");
    }
    if (pos == 0 || neg == 0) throw ModelError(std::string(who) + ": y has a single class");
    if (pos < 2 || neg < 2) throw ModelError(std::string(who) + ": need at least 2 rows per class");
}

inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline Eigen::MatrixXd with_bias(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd a(x.rows(), x.cols() + 1);
    a.leftCols(x.cols()) = x;
    a.col(x.cols()).setOnes();
    return a;
}

}  // namespace detail

// Mean log-loss over rows; theta = (weights..., intercept).
inline double logistic_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& theta) {
    const Eigen::VectorXd z = (x * theta.head(x.cols())).array() + theta(x.cols());
    double s = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) s += detail::softplus(z(i)) - y(i) * z(i);
    return s / static_cast<double>(z.size());
}

inline Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& theta) {
    const Eigen::VectorXd z = (x * theta.head(x.cols())).array() + theta(x.cols());
    const Eigen::VectorXd r = z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); }) - y;
    Eigen::VectorXd g(theta.size());
    g.head(x.cols()) = x.transpose() * r;
    g(x.cols()) = r.sum();
    return g / static_cast<double>(x.rows());
}

struct LogisticOptions {
    int max_iter = 100;
    double tolerance = 1e-8;  // on the max-abs gradient of the mean loss
};

// Unregularized maximum likelihood by damped Newton steps with backtracking.
inline LinearModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, LogisticOptions opt = {}) {
    detail::check_binary_problem(x, y, "fit_logistic");
    const Eigen::MatrixXd a = detail::with_bias(x);
    const auto p = a.cols();
    const double n = static_cast<double>(a.rows());
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);

    LinearModel m;
    m.kind = LinearKind::Logistic;
    double loss = logistic_loss(x, y, theta);
    for (int it = 0; it < opt.max_iter; ++it) {
        const Eigen::VectorXd g = logistic_gradient(x, y, theta);
        m.iterations = it;
        if (g.lpNorm<Eigen::Infinity>() < opt.tolerance) {
            m.converged = true;
            break;
        }
        const Eigen::VectorXd z = a * theta;
        Eigen::VectorXd w(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            const double s = 1.0 / (1.0 + std::exp(-z(i)));
            w(i) = s * (1.0 - s);
        }
        Eigen::MatrixXd h = a.transpose() * w.asDiagonal() * a / n;
        h.diagonal().array() += 1e-10;
        const Eigen::VectorXd step = h.ldlt().solve(g);
        const double slope = g.dot(step);
        double t = 1.0;
        Eigen::VectorXd next = theta - step;
        double next_loss = logistic_loss(x, y, next);
        while (next_loss > loss - 1e-4 * t * slope && t > 1e-12) {
            t *= 0.5;
            next = theta - t * step;
            next_loss = logistic_loss(x, y, next);
        }
        if (!(next_loss <= loss)) break;
        const bool stalled = loss - next_loss <= 1e-16 * std::max(1.0, loss);
        theta = next;
        loss = next_loss;
        if (stalled) {
            m.iterations = it + 1;
            break;
        }
        m.iterations = it + 1;
    }
    m.weights = theta.head(p - 1);
    m.intercept = theta(p - 1);
    return m;
}

struct SvcOptions {
    double c = 1.0;
    int max_iter = 1000;  // passes over the data
    double tolerance = 1e-3;
    std::uint64_t seed = 0;
};

// L2-regularized hinge loss by dual coordinate descent; the intercept is an
// extra constant feature and is regularized with the weights.
inline LinearModel fit_linear_svc(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, SvcOptions opt = {}) {
    detail::check_binary_problem(x, y, "fit_linear_svc");
    const Eigen::MatrixXd a = detail::with_bias(x);
    const auto n = static_cast<std::size_t>(a.rows());
    Eigen::VectorXd sign = (2.0 * y.array() - 1.0).matrix();
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(a.cols());
    Eigen::VectorXd q = a.rowwise().squaredNorm();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(opt.seed, 0x5C));

    LinearModel m;
    m.kind = LinearKind::LinearSVC;
    for (int it = 0; it < opt.max_iter; ++it) {
        shuffle(order.begin(), order.end(), rng);
        double pg_max = -HUGE_VAL, pg_min = HUGE_VAL;
        for (auto i : order) {
            const auto r = static_cast<Eigen::Index>(i);
            const double g = sign(r) * a.row(r).dot(w) - 1.0;
            double pg = g;
            if (alpha(r) == 0.0) pg = std::min(g, 0.0);
            else if (alpha(r) == opt.c) pg = std::max(g, 0.0);
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);
            if (std::abs(pg) > 1e-12 && q(r) > 0) {
                const double old = alpha(r);
                alpha(r) = std::clamp(old - g / q(r), 0.0, opt.c);
                w += (alpha(r) - old) * sign(r) * a.row(r).transpose();
            }
        }
        m.iterations = it + 1;
        if (pg_max - pg_min < opt.tolerance) {
            m.converged = true;
            break;
        }
    }
    m.weights = w.head(a.cols() - 1);
    m.intercept = w(a.cols() - 1);
    return m;
}

// Predicts one label for every row; the always-deny baseline is ConstantClassifier{0}.
struct ConstantClassifier {
    double label = 0.0;
    template <class X>
    Eigen::VectorXd predict(const X& x) const {
        return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(x.rows()), label);
    }
};

}  // namespace adjvar
