#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "adjvar/common/parallel.hpp"
#include "adjvar/common/random.hpp"
#include "adjvar/models/linear.hpp"

namespace adjvar {

enum class ForestTask { Classification, Regression };

struct ForestParams {
    ForestTask task = ForestTask::Classification;
    std::size_t n_trees = 100;
    std::size_t max_samples = 1000;  // bootstrap draw per tree, capped at the row count; 0 = row count
    std::size_t max_depth = 0;       // 0 = unlimited
    std::size_t min_samples_leaf = 1;
    std::size_t max_features = 0;    // 0 = sqrt(p) for classification, p for regression
    std::uint64_t seed = 0;
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left iff x[feature] <= threshold
    std::int32_t left = -1, right = -1;
    double value = 0.0;         // class-1 fraction or mean target
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    template <class Row>
    double predict_row(const Row& x) const {
        std::size_t i = 0;
        while (nodes[i].feature >= 0) {
            const auto& n = nodes[i];
            i = static_cast<std::size_t>(x(n.feature) <= n.threshold ? n.left : n.right);
        }
        return nodes[i].value;
    }
};

namespace detail {

// Impurity times node size: Gini for 0/1 targets, sum of squared deviations otherwise.
inline double weighted_impurity(ForestTask task, double n, double s, double ss) {
    if (n <= 0) return 0.0;
    if (task == ForestTask::Classification) {
        const double p = s / n;
        return n * 2.0 * p * (1.0 - p);
    }
    return std::max(0.0, ss - s * s / n);
}

class TreeBuilder {
public:
    TreeBuilder(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ForestParams& params, std::size_t mtry,
                Rng& rng, std::vector<double>& importance)
        : x_(x), y_(y), params_(params), mtry_(mtry), rng_(rng), importance_(importance) {
        features_.resize(static_cast<std::size_t>(x.cols()));
        std::iota(features_.begin(), features_.end(), 0);
    }

    DecisionTree build(std::vector<std::size_t> sample) {
        tree_.nodes.clear();
        grow(sample, 0);
        return std::move(tree_);
    }

private:
    std::int32_t grow(std::vector<std::size_t>& rows, std::size_t depth) {
        const auto id = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        double s = 0, ss = 0;
        for (auto r : rows) {
            const double v = y_(static_cast<Eigen::Index>(r));
            s += v;
            ss += v * v;
        }
        const double n = static_cast<double>(rows.size());
        tree_.nodes[static_cast<std::size_t>(id)].value = s / n;
        const double parent = weighted_impurity(params_.task, n, s, ss);
        if (parent <= 1e-12 || rows.size() < 2 * params_.min_samples_leaf ||
            (params_.max_depth != 0 && depth >= params_.max_depth)) {
            return id;
        }

        // Partial Fisher-Yates picks mtry candidate features.
        for (std::size_t k = 0; k < mtry_; ++k) {
            const auto j = k + uniform_index(rng_, features_.size() - k);
            std::swap(features_[k], features_[j]);
        }
        std::vector<std::size_t> candidates(features_.begin(), features_.begin() + static_cast<std::ptrdiff_t>(mtry_));

        double best_gain = 1e-12;
        std::int32_t best_feature = -1;
        double best_threshold = 0;
        std::vector<std::pair<double, double>> sorted(rows.size());
        for (auto f : candidates) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto r = static_cast<Eigen::Index>(rows[i]);
                sorted[i] = {x_(r, static_cast<Eigen::Index>(f)), y_(r)};
            }
            std::sort(sorted.begin(), sorted.end());
            double ls = 0, lss = 0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                ls += sorted[i].second;
                lss += sorted[i].second * sorted[i].second;
                if (sorted[i].first == sorted[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                if (i + 1 < params_.min_samples_leaf || rows.size() - i - 1 < params_.min_samples_leaf) continue;
                const double gain = parent - weighted_impurity(params_.task, nl, ls, lss) -
                                    weighted_impurity(params_.task, nr, s - ls, ss - lss);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<std::int32_t>(f);
                    best_threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2;
                    if (best_threshold >= sorted[i + 1].first) best_threshold = sorted[i].first;
                }
            }
        }
        if (best_feature < 0) return id;

        importance_[static_cast<std::size_t>(best_feature)] += best_gain;
        std::vector<std::size_t> left, right;
        for (auto r : rows) {
            (x_(static_cast<Eigen::Index>(r), best_feature) <= best_threshold ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        const auto l = grow(left, depth + 1);
        const auto rgt = grow(right, depth + 1);
        auto& node = tree_.nodes[static_cast<std::size_t>(id)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = l;
        node.right = rgt;
        return id;
    }

    const Eigen::MatrixXd& x_;
    const Eigen::VectorXd& y_;
    const ForestParams& params_;
    std::size_t mtry_;
    Rng& rng_;
    std::vector<double>& importance_;
    std::vector<std::size_t> features_;
    DecisionTree tree_;
};

}  // namespace detail

struct ForestModel {
    ForestParams params;
    std::vector<DecisionTree> trees;
    Eigen::VectorXd importances;  // mean impurity decrease, normalized to sum 1 when any split exists

    // Mean leaf value over trees: class-1 probability or regression estimate.
    Eigen::VectorXd predict_value(const Eigen::MatrixXd& x) const {
        Eigen::VectorXd out(x.rows());
        parallel_for(static_cast<std::size_t>(x.rows()), [&](std::size_t i) {
            const auto r = static_cast<Eigen::Index>(i);
            double s = 0;
            for (const auto& t : trees) s += t.predict_row(x.row(r));
            out(r) = s / static_cast<double>(trees.size());
        });
        return out;
    }

    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const {
        Eigen::VectorXd v = predict_value(x);
        if (params.task == ForestTask::Classification) v = (v.array() >= 0.5).cast<double>();
        return v;
    }
};

inline ForestModel fit_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ForestParams& params = {}) {
    if (x.rows() < 2) throw ModelError("fit_forest: need at least 2 rows");
    if (x.rows() != y.size()) throw ModelError("fit_forest: X and y row counts differ");
    if (x.cols() == 0) throw ModelError("fit_forest: no features");
    if (params.n_trees == 0) throw ModelError("fit_forest: n_trees must be positive");
    if (!y.allFinite()) throw ModelError("fit_forest: non-finite target");
    if (params.task == ForestTask::Classification) {
        for (Eigen::Index i = 0; i < y.size(); ++i)
            if (y(i) != 0.0 && y(i) != 1.0) throw ModelError("fit_forest: classification labels must be 0 or 1");
    }
    const auto rows = static_cast<std::size_t>(x.rows());
    const auto p = static_cast<std::size_t>(x.cols());
    std::size_t mtry = params.max_features;
    if (mtry == 0) {
        mtry = params.task == ForestTask::Classification
                   ? std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(p))))
                   : p;
    }
    mtry = std::min(mtry, p);
    const std::size_t draw = params.max_samples == 0 ? rows : std::min(rows, params.max_samples);

    ForestModel model;
    model.params = params;
    model.trees.resize(params.n_trees);
    std::vector<std::vector<double>> per_tree(params.n_trees, std::vector<double>(p, 0.0));
    parallel_for(params.n_trees, [&](std::size_t t) {
        Rng rng(derive_seed(params.seed, t));
        std::vector<std::size_t> sample(draw);
        for (auto& s : sample) s = uniform_index(rng, rows);
        detail::TreeBuilder builder(x, y, params, mtry, rng, per_tree[t]);
        model.trees[t] = builder.build(std::move(sample));
    });

    model.importances = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    std::size_t split_trees = 0;
    for (const auto& imp : per_tree) {
        const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
        if (total <= 0) continue;
        ++split_trees;
        for (std::size_t f = 0; f < p; ++f) model.importances(static_cast<Eigen::Index>(f)) += imp[f] / total;
    }
    if (split_trees > 0) model.importances /= model.importances.sum();
    return model;
}

}  // namespace adjvar
