#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "adjvar/stats.hpp"

using namespace adjvar;

namespace {

std::vector<double> noise(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v) x = d(g);
    return v;
}

// Textbook closed form, valid without ties.
double spearman_no_ties(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = x.size();
    double d2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rx = 1, ry = 1;
        for (std::size_t j = 0; j < n; ++j) {
            rx += x[j] < x[i];
            ry += y[j] < y[i];
        }
        const double d = static_cast<double>(rx) - static_cast<double>(ry);
        d2 += d * d;
    }
    const double nd = static_cast<double>(n);
    return 1.0 - 6.0 * d2 / (nd * (nd * nd - 1.0));
}

}  // namespace

TEST(FrequencyEncode, Examples) {
    EXPECT_EQ(frequency_encode({"x"}), std::vector<double>{1.0});
    EXPECT_EQ(frequency_encode({"TX", "TX", "NY", "CA"}), (std::vector<double>{0.5, 0.5, 0.25, 0.25}));
    EXPECT_THROW(frequency_encode({}), std::invalid_argument);
}

TEST(FrequencyEncode, NullsStayNull) {
    const auto v = frequency_encode({"a", std::nullopt, "a", "b"});
    EXPECT_EQ(v[0], 0.5);
    EXPECT_TRUE(is_null(v[1]));
    EXPECT_EQ(v[3], 0.25);
}

TEST(FrequencyEncode, ThousandCategoriesMatchCountingPass) {
    std::mt19937_64 g(5);
    std::vector<std::optional<std::string>> col;
    for (int i = 0; i < 20000; ++i) col.emplace_back("c" + std::to_string(g() % 1000));
    const auto enc = frequency_encode(col);
    std::map<std::string, int> counts;
    for (const auto& c : col) ++counts[*c];
    for (std::size_t i = 0; i < col.size(); ++i) {
        ASSERT_EQ(enc[i], counts[*col[i]] / 20000.0);
        ASSERT_GT(enc[i], 0.0);
        ASSERT_LE(enc[i], 1.0);
    }
    // Same category implies same value.
    std::map<std::string, double> seen;
    for (std::size_t i = 0; i < col.size(); ++i) {
        auto [it, fresh] = seen.emplace(*col[i], enc[i]);
        if (!fresh) {
            ASSERT_EQ(it->second, enc[i]);
        }
    }
}

TEST(Prune, DuplicateDropped) {
    FeatureMatrix m(50);
    const auto a = noise(1, 50);
    m.add_column("A", ColumnKind::RawNumeric, a);
    m.add_column("B", ColumnKind::RawNumeric, a);
    const auto p = prune_correlated(m);
    EXPECT_EQ(p.names(), std::vector<std::string>{"A"});
}

TEST(Prune, ChainKeepsOnlyFirst) {
    FeatureMatrix m(50);
    auto a = noise(2, 50);
    auto c = a;
    for (auto& v : c) v = -v;
    m.add_column("A", ColumnKind::RawNumeric, a);
    m.add_column("B", ColumnKind::RawNumeric, a);
    m.add_column("C", ColumnKind::RawNumeric, c);
    EXPECT_EQ(prune_correlated(m).names(), std::vector<std::string>{"A"});
}

TEST(Prune, IndependentColumnsSurviveAndIdempotent) {
    FeatureMatrix m(500);
    for (int c = 0; c < 8; ++c) m.add_column("f" + std::to_string(c), ColumnKind::RawNumeric, noise(100 + c, 500));
    m.add_column("const", ColumnKind::RawNumeric, std::vector<double>(500, 3.0));
    auto dup = m.column(3);
    for (auto& v : dup) v = 2 * v + 1;
    m.add_column("f3_scaled", ColumnKind::RawNumeric, dup);
    const auto r = prune_correlated_report(m);
    EXPECT_EQ(r.matrix.cols(), 8u);
    EXPECT_EQ(r.dropped_constant, std::vector<std::string>{"const"});
    ASSERT_EQ(r.dropped_correlated.size(), 1u);
    EXPECT_EQ(r.dropped_correlated[0].first, "f3_scaled");
    for (std::size_t i = 0; i < r.matrix.cols(); ++i)
        for (std::size_t j = i + 1; j < r.matrix.cols(); ++j) {
            EXPECT_LE(std::abs(*pearson(r.matrix.column(i), r.matrix.column(j))), 0.95);
        }
    EXPECT_EQ(prune_correlated(r.matrix), r.matrix);
}

TEST(Prune, PairwiseDeletion) {
    FeatureMatrix m(6);
    m.add_column("a", ColumnKind::RawNumeric, {1, 2, 3, 4, kNull, 9});
    m.add_column("b", ColumnKind::RawNumeric, {2, 4, 6, 8, 5, kNull});
    EXPECT_EQ(prune_correlated(m).names(), std::vector<std::string>{"a"});
}

TEST(Spearman, Examples) {
    EXPECT_EQ(spearman({1, 2, 3}, {1, 3, 2}).rho, 0.5);
    EXPECT_EQ(spearman({1, 2, 3, 4}, {1, 2, 3, 4}).rho, 1.0);
    EXPECT_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}).rho, -1.0);
    EXPECT_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}).p, 0.0);
    EXPECT_THROW(spearman({1, 1, 1}, {1, 2, 3}), UndefinedCorrelation);
    EXPECT_THROW(spearman({1, 2}, {1, 2}), std::invalid_argument);
}

TEST(Spearman, MatchesClosedFormWithoutTies) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto x = noise(s, 40), y = noise(s + 1000, 40);
        EXPECT_NEAR(spearman(x, y).rho, spearman_no_ties(x, y), 1e-12);
    }
}

TEST(Spearman, TiesUseAverageRanks) {
    // ranks x: 1.5 1.5 3 4; y: 1 2 3 4
    const double rx[] = {1.5, 1.5, 3, 4}, ry[] = {1, 2, 3, 4};
    double mx = 2.5, my = 2.5, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < 4; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    EXPECT_NEAR(spearman({7, 7, 8, 9}, {1, 2, 3, 4}).rho, sxy / std::sqrt(sxx * syy), 1e-15);
}

TEST(Spearman, PValueMatchesTApproximation) {
    // rho = 0.5, n = 10: t = 0.5 * sqrt(8 / 0.75) = 1.63299; two-sided p from t(8) = 0.141...
    std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> y{2, 1, 4, 3, 7, 10, 5, 6, 9, 8};
    const auto r = spearman(x, y);
    const double t = r.rho * std::sqrt(8 / (1 - r.rho * r.rho));
    boost::math::students_t d(8);
    EXPECT_NEAR(r.p, 2 * (1 - boost::math::cdf(d, t)), 1e-12);
}

TEST(Spearman, MonotoneInvariance) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto x = noise(s, 200), y = noise(s + 7, 200);
        auto ex = x;
        for (auto& v : ex) v = std::exp(v);
        EXPECT_NEAR(spearman(x, y).rho, spearman(ex, y).rho, 1e-12);
    }
}

TEST(Bonferroni, Examples) {
    EXPECT_EQ(bonferroni({0.04}, 0.05), std::vector<bool>{true});
    EXPECT_EQ(bonferroni(std::vector<double>(50, 0.001), 0.05), std::vector<bool>(50, false));
    // 0.005019 is not significant once m >= 10.
    EXPECT_EQ(bonferroni(std::vector<double>(107, 0.005019), 0.05)[0], false);
    EXPECT_THROW(bonferroni({}, 0.05), std::invalid_argument);
    EXPECT_THROW(bonferroni({1.5}, 0.05), std::invalid_argument);
}

TEST(Bonferroni, MonotoneInM) {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(0, 0.01);
    std::vector<double> ps;
    std::vector<bool> prev;
    for (int m = 1; m <= 60; ++m) {
        ps.push_back(u(g));
        const auto f = bonferroni(ps, 0.05);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            if (!prev[i]) {
                EXPECT_FALSE(f[i]);
            }
        }
        prev = f;
    }
}

TEST(BagImportances, CopiedFeatureDominates) {
    const std::size_t n = 2000;
    FeatureMatrix m(n);
    const auto f = noise(11, n);
    m.add_column("noise1", ColumnKind::RawNumeric, noise(12, n));
    m.add_column("signal", ColumnKind::RawNumeric, f);
    m.add_column("noise2", ColumnKind::RawNumeric, noise(13, n));
    BagOptions o;
    o.replicates = 50;
    o.sample_size = 500;
    o.forest.n_trees = 10;
    o.seed = 4;
    const auto s = bag_importances(m, f, o);
    EXPECT_EQ(s.task, ForestTask::Regression);
    EXPECT_GT(s.features[1].mean, 0.9);
    EXPECT_EQ(s.tested, 3u);
    EXPECT_TRUE(s.features[1].significant);
    EXPECT_NEAR(*s.features[1].coefficient, 1.0, 1e-15);
}

TEST(BagImportances, PureNoiseIsSymmetric) {
    const std::size_t n = 1500;
    FeatureMatrix m(n);
    for (int c = 0; c < 3; ++c) m.add_column("n" + std::to_string(c), ColumnKind::RawNumeric, noise(20 + c, n));
    BagOptions o;
    o.replicates = 50;
    o.sample_size = 400;
    o.forest.n_trees = 10;
    const auto s = bag_importances(m, noise(99, n), o);
    double total = 0;
    for (const auto& f : s.features) {
        EXPECT_NEAR(f.mean, 1.0 / 3, 0.1);
        EXPECT_GE(f.mean, 0.0);
        total += f.mean;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(BagImportances, SingleReplicateZeroStdAndDeterministic) {
    const std::size_t n = 300;
    FeatureMatrix m(n);
    m.add_column("a", ColumnKind::RawNumeric, noise(1, n));
    m.add_column("b", ColumnKind::RawNumeric, noise(2, n));
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = m.column(0)[i] > 0 ? 1.0 : 0.0;
    y[5] = kNull;
    BagOptions o;
    o.replicates = 1;
    o.sample_size = 1000;  // larger than rows: sampled with replacement
    o.forest.n_trees = 5;
    const auto s = bag_importances(m, y, o);
    EXPECT_EQ(s.task, ForestTask::Classification);
    EXPECT_EQ(s.rows, n - 1);
    for (const auto& f : s.features) EXPECT_EQ(f.std, 0.0);

    o.replicates = 8;
    set_max_threads(1);
    const auto one = bag_importances(m, y, o);
    set_max_threads(4);
    const auto four = bag_importances(m, y, o);
    set_max_threads(0);
    for (std::size_t i = 0; i < one.features.size(); ++i) EXPECT_EQ(one.features[i].mean, four.features[i].mean);
}

TEST(BagImportances, ConstantTargetRejected) {
    FeatureMatrix m(10);
    m.add_column("a", ColumnKind::RawNumeric, noise(1, 10));
    EXPECT_THROW(bag_importances(m, std::vector<double>(10, 1.0)), std::invalid_argument);
}

TEST(BagImportances, CsvShape) {
    ImportanceSummary s;
    s.features.push_back({"x", 0.5, 0.1, 0.25, 0.01, true});
    s.features.push_back({"y", 0.5, 0.1, std::nullopt, std::nullopt, false});
    std::ostringstream out;
    write_importances(out, s);
    EXPECT_EQ(out.str(), "feature,mean,std,coefficient,p,significant\nx,0.5,0.1,0.25,0.01,true\ny,0.5,0.1,,,false\n");
}
