#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "adjvar/models/forest.hpp"
#include "adjvar/models/linear.hpp"
#include "adjvar/models/metrics.hpp"
#include "adjvar/models/suite.hpp"
#include "adjvar/synth.hpp"

using namespace adjvar;

namespace {

struct Blobs {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

Blobs separable_blobs(std::uint64_t seed, int n) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> d(0, 0.5);
    Blobs b{Eigen::MatrixXd(n, 2), Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        const bool pos = i % 2 == 0;
        b.x(i, 0) = (pos ? 3.0 : -3.0) + d(g);
        b.x(i, 1) = (pos ? 2.0 : -2.0) + d(g);
        b.y(i) = pos ? 1 : 0;
    }
    return b;
}

Blobs bernoulli_logit(std::uint64_t seed, int n, double w, double b0 = 0.0) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> d;
    std::uniform_real_distribution<double> u;
    Blobs b{Eigen::MatrixXd(n, 1), Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        b.x(i, 0) = d(g);
        b.y(i) = u(g) < 1 / (1 + std::exp(-(w * b.x(i, 0) + b0))) ? 1 : 0;
    }
    return b;
}

}  // namespace

TEST(Split, SizesAndPartition) {
    const auto s = train_test_split(10, {0.8, 1});
    EXPECT_EQ(s.train.size(), 8u);
    EXPECT_EQ(s.test.size(), 2u);
    std::vector<int> seen(10, 0);
    for (auto i : s.train) ++seen[i];
    for (auto i : s.test) ++seen[i];
    for (int c : seen) EXPECT_EQ(c, 1);
    const auto t = train_test_split(10, {0.8, 1});
    EXPECT_EQ(s.train, t.train);
    EXPECT_THROW(train_test_split(1, {}), ModelError);
    EXPECT_THROW(train_test_split(10, {1.0, 1}), ModelError);
}

TEST(Split, TestMembershipFrequency) {
    std::vector<int> hits(1000, 0);
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        for (auto i : train_test_split(1000, {0.8, seed}).test) ++hits[i];
    // Binomial(100, 0.2): ±5 percentage points is about 1.25 sigma; check the aggregate and the tails.
    int outside = 0;
    for (int h : hits) outside += std::abs(h - 20) > 5;
    EXPECT_LT(outside, 300);
    int far = 0;
    for (int h : hits) far += std::abs(h - 20) > 14;
    EXPECT_EQ(far, 0);
}

TEST(Logistic, SeparableBlobs) {
    const auto b = separable_blobs(1, 200);
    const auto m = fit_logistic(b.x, b.y);
    EXPECT_EQ(evaluate(m, b.x, b.y).accuracy, 1.0);
}

TEST(Logistic, RecoversWeight) {
    const auto b = bernoulli_logit(7, 10000, 3.0, -0.5);
    const auto m = fit_logistic(b.x, b.y);
    EXPECT_TRUE(m.converged);
    EXPECT_NEAR(m.weights(0), 3.0, 0.3);
    EXPECT_GT(m.weights(0), 0);
    Eigen::VectorXd theta(2);
    theta << m.weights(0), m.intercept;
    EXPECT_LT(logistic_gradient(b.x, b.y, theta).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Logistic, NegativeAssociationNegativeWeight) {
    const auto b = bernoulli_logit(8, 2000, -1.0);
    EXPECT_LT(fit_logistic(b.x, b.y).weights(0), 0);
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
    std::mt19937_64 g(21);
    std::normal_distribution<double> d;
    for (int inst = 0; inst < 10; ++inst) {
        const int n = 30, p = 3;
        Eigen::MatrixXd x(n, p);
        Eigen::VectorXd y(n), theta(p + 1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < p; ++j) x(i, j) = d(g);
            y(i) = d(g) > 0 ? 1 : 0;
        }
        for (int j = 0; j <= p; ++j) theta(j) = d(g);
        const auto grad = logistic_gradient(x, y, theta);
        for (int j = 0; j <= p; ++j) {
            const double h = 1e-5;
            Eigen::VectorXd a = theta, b = theta;
            a(j) += h;
            b(j) -= h;
            const double fd = (logistic_loss(x, y, a) - logistic_loss(x, y, b)) / (2 * h);
            EXPECT_LE(std::abs(fd - grad(j)), 1e-5 * std::max(1e-3, std::abs(grad(j))));
        }
    }
}

TEST(Logistic, Errors) {
    Eigen::MatrixXd x(4, 1);
    x << 1, 2, 3, 4;
    Eigen::VectorXd y(4);
    y << 1, 1, 1, 1;
    EXPECT_THROW(fit_logistic(x, y), ModelError);
    y << 1, 0, 0, 0;
    EXPECT_THROW(fit_logistic(x, y), ModelError);
    y << 1, 1, 0, 0;
    x(0, 0) = NAN;
    EXPECT_THROW(fit_logistic(x, y), ModelError);
}

TEST(Svc, SeparableBlobsAgreesWithLogistic) {
    const auto b = separable_blobs(3, 200);
    const auto svc = fit_linear_svc(b.x, b.y);
    const auto lr = fit_logistic(b.x, b.y);
    EXPECT_TRUE(svc.converged);
    EXPECT_EQ(evaluate(svc, b.x, b.y).accuracy, 1.0);
    for (int j = 0; j < 2; ++j) EXPECT_EQ(svc.weights(j) > 0, lr.weights(j) > 0);
}

TEST(Svc, IdenticalRowsPredictMajority) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Constant(10, 2, 0.5);
    Eigen::VectorXd y(10);
    y << 1, 1, 1, 1, 1, 1, 1, 0, 0, 0;
    EXPECT_EQ(fit_linear_svc(x, y).predict(x), Eigen::VectorXd::Ones(10));
    y = (1 - y.array()).matrix();
    EXPECT_EQ(fit_linear_svc(x, y).predict(x), Eigen::VectorXd::Zero(10));
}

TEST(LinearModelFile, RoundTrip) {
    const auto b = bernoulli_logit(9, 500, 2.0);
    auto m = fit_logistic(b.x, b.y);
    m.feature_names = {"gamma"};
    std::stringstream ss;
    m.save(ss);
    const auto back = LinearModel::load(ss);
    EXPECT_EQ(back.kind, LinearKind::Logistic);
    EXPECT_EQ(back.feature_names, m.feature_names);
    EXPECT_EQ(back.weights, m.weights);
    EXPECT_EQ(back.intercept, m.intercept);
    std::istringstream bad("adjvar-linear-model v9\n");
    EXPECT_THROW(LinearModel::load(bad), ModelError);
}

TEST(Metrics, BaselineClosedForm) {
    for (std::size_t pos : {1u, 13u, 128u, 499u}) {
        const std::size_t n = 1000;
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < pos; ++i) y(i) = 1;
        const auto m = evaluate(ConstantClassifier{0}, Eigen::MatrixXd(n, 0), y);
        const double p = static_cast<double>(pos) / n;
        EXPECT_NEAR(m.r2, -p / (1 - p), 1e-12);
        EXPECT_NEAR(m.accuracy, 1 - p, 1e-15);
        EXPECT_EQ(m.recall, 0.0);
        EXPECT_EQ(m.precision, 0.0);
        EXPECT_EQ(m.confusion.positives(), pos);
        EXPECT_EQ(m.confusion.negatives(), n - pos);
    }
}

TEST(Metrics, AlwaysDenyBaseline) {
    Confusion c;
    c.fn = 128751;
    c.tn = 1000000 - 128751;
    const auto m = metrics_from_confusion(c);
    EXPECT_NEAR(m.accuracy, 0.871249, 1e-6);
    EXPECT_NEAR(m.r2, -0.147777, 1e-5);
}

TEST(Metrics, PerfectAndSquaredErrorDefinition) {
    Eigen::VectorXd y(6), p(6);
    y << 1, 0, 1, 0, 0, 0;
    const auto perfect = evaluate_labels(y, y);
    EXPECT_EQ(perfect.accuracy, 1.0);
    EXPECT_EQ(perfect.r2, 1.0);
    EXPECT_EQ(perfect.precision, 1.0);
    EXPECT_EQ(perfect.recall, 1.0);
    p << 1, 1, 0, 0, 0, 0;
    const auto m = evaluate_labels(y, p);
    const double mean = y.mean();
    const double ss_tot = (y.array() - mean).square().sum();
    const double ss_res = (y - p).squaredNorm();
    EXPECT_NEAR(m.r2, 1 - ss_res / ss_tot, 1e-15);
    EXPECT_EQ(m.precision, 0.5);
    EXPECT_EQ(m.recall, 0.5);
    EXPECT_THROW(evaluate_labels(Eigen::VectorXd(0), Eigen::VectorXd(0)), std::invalid_argument);
}

TEST(Forest, ThresholdFeatureDominates) {
    std::mt19937_64 g(2);
    std::normal_distribution<double> d;
    const int n = 1000;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = d(g);
        x(i, 1) = d(g);
        y(i) = x(i, 0) > 0;
    }
    ForestParams p;
    p.n_trees = 50;
    p.seed = 1;
    const auto f = fit_forest(x, y, p);
    EXPECT_GE(f.importances(0), 0.9);
    EXPECT_NEAR(f.importances.sum(), 1.0, 1e-12);
    EXPECT_GE(evaluate(f, x, y).accuracy, 0.99);
}

TEST(Forest, ConstantTargetSingleLeaf) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(50, 3);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(50);
    const auto f = fit_forest(x, y);
    for (const auto& t : f.trees) EXPECT_EQ(t.nodes.size(), 1u);
    EXPECT_EQ(f.predict(x), y);
    EXPECT_EQ(f.importances.sum(), 0.0);
}

TEST(Forest, RegressionMemorizes) {
    const int n = 300;
    Eigen::MatrixXd x(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) x(i, 0) = y(i) = std::sin(i * 0.37) * 10;
    ForestParams p;
    p.task = ForestTask::Regression;
    p.n_trees = 1;
    p.max_samples = 0;
    const auto f = fit_forest(x, y, p);
    const Eigen::VectorXd pred = f.predict(x);
    const double r2 = 1 - (y - pred).squaredNorm() / (y.array() - y.mean()).square().sum();
    EXPECT_GE(r2, 0.99);
}

TEST(Forest, DeterministicAcrossThreadCounts) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(400, 4);
    Eigen::VectorXd y = (x.col(1).array() + 0.3 * x.col(2).array() > 0).cast<double>();
    ForestParams p;
    p.n_trees = 20;
    p.seed = 77;
    set_max_threads(1);
    const auto a = fit_forest(x, y, p);
    set_max_threads(3);
    const auto b = fit_forest(x, y, p);
    set_max_threads(0);
    EXPECT_EQ(a.importances, b.importances);
    EXPECT_EQ(a.predict_value(x), b.predict_value(x));
}

TEST(Forest, BootstrapCapLimitsLeaves) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(5000, 2);
    Eigen::VectorXd y = x.col(0);
    ForestParams p;
    p.task = ForestTask::Regression;
    p.n_trees = 3;
    p.max_samples = 100;
    const auto f = fit_forest(x, y, p);
    for (const auto& t : f.trees) {
        std::size_t leaves = 0;
        for (const auto& n : t.nodes) leaves += n.feature < 0;
        EXPECT_LE(leaves, 100u);
    }
}

namespace {

const FeatureSetResult& set_named(const SuiteReport& r, std::string_view name) {
    for (const auto& s : r.sets)
        if (s.name == name) return s;
    throw std::logic_error("missing set");
}

}  // namespace

TEST(Suite, ClimateDrivenCorpusFavorsPartisanship) {
    for (std::uint64_t seed : {1, 2, 3}) {
        ScenarioConfig c;
        c.cases = 20000;
        c.base_rate = 0.5;
        c.climate_effect = 0.6;
        c.seed = seed;
        const auto corpus = generate(c);
        const auto t = score_corpus(corpus.records, build_index(corpus.records));
        const auto r = predict_decision_suite(t, corpus.records);
        ASSERT_EQ(r.sets.size(), 5u);
        const double g = set_named(r, "partisanship").logistic_metrics.r2;
        EXPECT_GT(g, set_named(r, "cohort_consistency").logistic_metrics.r2);
        EXPECT_GT(g, set_named(r, "disaggregated_consistency").logistic_metrics.r2);
        EXPECT_TRUE(set_named(r, "partisanship").spearman_vs_decision.has_value());
        EXPECT_FALSE(set_named(r, "partisanship+cohort_consistency").spearman_vs_decision.has_value());
        const auto j = r.to_json();
        EXPECT_EQ(j["warning"], std::string(kLeakageWarning));
        EXPECT_TRUE(j["feature_sets"][0]["logistic"]["weights"].contains("gamma"));
    }
}

TEST(Suite, UnanimousCohortsDegenerateToBaseline) {
    ScenarioConfig c;
    c.cases = 5000;
    c.nationalities = 4;
    auto corpus = generate(c);
    for (auto& rec : corpus.records) rec.decision = rec.nationality == "N000" ? Decision::Grant : Decision::Deny;
    const auto t = score_corpus(corpus.records, build_index(corpus.records));
    const auto r = predict_decision_suite(t, corpus.records);
    for (const char* name : {"cohort_consistency", "disaggregated_consistency"}) {
        const auto& s = set_named(r, name);
        ASSERT_FALSE(s.skipped);
        EXPECT_EQ(s.logistic_metrics.confusion, s.baseline_metrics.confusion) << name;
        EXPECT_EQ(s.logistic_metrics.r2, s.baseline_metrics.r2);
        EXPECT_EQ(s.svc_metrics.confusion, s.baseline_metrics.confusion) << name;
    }
}

TEST(Suite, AllNullGammaSkippedWithWarning) {
    ScenarioConfig c;
    c.cases = 3000;
    c.base_rate = 0.3;
    auto corpus = generate(c);
    for (auto& rec : corpus.records) rec.climate.reset();
    const auto t = score_corpus(corpus.records, build_index(corpus.records));
    const auto r = predict_decision_suite(t, corpus.records);
    for (const char* name : {"partisanship", "partisanship+cohort_consistency", "partisanship+disaggregated_consistency"}) {
        EXPECT_TRUE(set_named(r, name).skipped);
        EXPECT_NE(set_named(r, name).warning.find("usable rows"), std::string::npos);
    }
    EXPECT_FALSE(set_named(r, "cohort_consistency").skipped);
}

TEST(Suite, Deterministic) {
    ScenarioConfig c;
    c.cases = 4000;
    c.base_rate = 0.4;
    c.climate_effect = 0.2;
    const auto corpus = generate(c);
    const auto t = score_corpus(corpus.records, build_index(corpus.records));
    EXPECT_EQ(predict_decision_suite(t, corpus.records).to_json().dump(),
              predict_decision_suite(t, corpus.records).to_json().dump());
}
