#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ecodeps/stats.hpp"
#include "oracles.hpp"

using namespace ecodeps;

namespace {

SurvivalSample sample(std::vector<std::pair<double, bool>> obs, std::string label = "s") {
  SurvivalSample s{std::move(label), {}};
  for (auto [d, censored] : obs) s.observations.push_back({d, censored});
  return s;
}

constexpr bool kEvent = false;
constexpr bool kCensored = true;

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, bool integers) {
  std::vector<double> v(n);
  for (auto& x : v) {
    x = integers ? static_cast<double>(rng() % 50) : std::uniform_real_distribution<double>(0, 100)(rng);
  }
  return v;
}

double lorenz_area(const LorenzCurve& c) {
  double area = 0;
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    const auto [x0, y0] = c.points[i - 1];
    const auto [x1, y1] = c.points[i];
    area += (x1 - x0) * (y0 + y1) / 2;
  }
  return area;
}

}  // namespace

TEST(KaplanMeier, HandExample) {
  auto curve = kaplan_meier(sample({{2, kEvent}, {4, kEvent}, {5, kCensored}}));
  EXPECT_DOUBLE_EQ(curve.at(0), 1.0);
  EXPECT_DOUBLE_EQ(curve.at(2), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(curve.at(4), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(curve.at(5), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(curve.at(3.9), 2.0 / 3.0);
  EXPECT_EQ(curve.steps.front().time, 0.0);
}

TEST(KaplanMeier, AllCensoredStaysAtOne) {
  auto curve = kaplan_meier(sample({{1, kCensored}, {3, kCensored}, {3, kCensored}}));
  for (const auto& s : curve.steps) EXPECT_EQ(s.survival, 1.0);
  EXPECT_EQ(curve.at(100), 1.0);
}

TEST(KaplanMeier, NoCensoringIsEmpirical) {
  auto curve = kaplan_meier(sample({{1, kEvent}, {2, kEvent}, {3, kEvent}}));
  EXPECT_DOUBLE_EQ(curve.at(1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(curve.at(2), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(curve.at(3), 0.0);
}

TEST(KaplanMeier, EventsPrecedeCensoringsAtTies) {
  auto curve = kaplan_meier(sample({{2, kCensored}, {2, kEvent}, {4, kEvent}}));
  EXPECT_DOUBLE_EQ(curve.at(2), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(curve.at(4), 0.0);
}

TEST(KaplanMeier, Errors) {
  EXPECT_THROW(kaplan_meier(sample({})), std::invalid_argument);
  EXPECT_THROW(kaplan_meier(sample({{-1, kEvent}})), std::invalid_argument);
}

TEST(KaplanMeier, RandomSamplesMatchOracleAndDecrease) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    SurvivalSample s{"r", {}};
    const std::size_t n = 1 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i) {
      s.observations.push_back({static_cast<double>(rng() % 30), rng() % 3 == 0});
    }
    auto curve = kaplan_meier(s);
    double prev = 1.0;
    for (const auto& step : curve.steps) {
      EXPECT_LE(step.survival, prev);
      EXPECT_GE(step.survival, 0.0);
      EXPECT_NEAR(curve.at(step.time), oracle::km_at(s.observations, step.time), 1e-12);
      prev = step.survival;
    }
  }
}

TEST(LogRank, IdenticalGroupsGiveZero) {
  auto a = sample({{1, kEvent}, {3, kEvent}, {4, kCensored}, {7, kEvent}});
  auto r = log_rank(a, a, 0.05);
  EXPECT_LT(r.statistic, 1e-12);
  EXPECT_FALSE(r.significant);
}

TEST(LogRank, SeparatedSmallGroups) {
  auto a = sample({{1, kEvent}, {2, kEvent}, {3, kEvent}});
  auto b = sample({{10, kEvent}, {20, kEvent}, {30, kEvent}});
  auto strict = log_rank(a, b, 0.01);
  EXPECT_NEAR(strict.statistic, oracle::log_rank(a.observations, b.observations), 1e-12);
  // statsmodels survdiff: chi2 = 5.051660516605167, p = 0.0246
  EXPECT_NEAR(strict.statistic, 5.051660516605167, 1e-12);
  EXPECT_FALSE(strict.significant);
  EXPECT_TRUE(log_rank(a, b, 0.05).significant);
}

TEST(LogRank, FullyCensoredGivesZero) {
  auto a = sample({{1, kCensored}, {2, kCensored}});
  auto b = sample({{5, kCensored}});
  auto r = log_rank(a, b);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_FALSE(r.significant);
}

TEST(LogRank, SymmetricAndMatchesOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    SurvivalSample a{"a", {}}, b{"b", {}};
    for (std::size_t i = 0, n = 1 + rng() % 40; i < n; ++i) a.observations.push_back({double(rng() % 20), rng() % 4 == 0});
    for (std::size_t i = 0, n = 1 + rng() % 40; i < n; ++i) b.observations.push_back({double(rng() % 25), rng() % 4 == 0});
    const double ab = log_rank(a, b).statistic;
    EXPECT_NEAR(ab, log_rank(b, a).statistic, 1e-9 * std::max(1.0, ab));
    EXPECT_NEAR(ab, oracle::log_rank(a.observations, b.observations), 1e-9 * std::max(1.0, ab));
    EXPECT_GE(ab, 0.0);
  }
}

TEST(LogRank, CriticalValues) {
  EXPECT_DOUBLE_EQ(chi_square_critical(0.05), 3.841);
  EXPECT_DOUBLE_EQ(chi_square_critical(0.01), 6.635);
  EXPECT_THROW(chi_square_critical(0.1), std::invalid_argument);
}

TEST(Lorenz, Examples) {
  std::vector<double> v{3, 1};
  auto inv = lorenz_points(v, true);
  EXPECT_EQ(inv.points, (std::vector<std::pair<double, double>>{{0, 0}, {0.5, 0.75}, {1, 1}}));
  EXPECT_EQ(inv.orientation, LorenzOrientation::inverted);

  std::vector<double> equal{2, 2, 2, 2};
  for (bool inverted : {false, true}) {
    for (auto [x, y] : lorenz_points(equal, inverted).points) EXPECT_DOUBLE_EQ(x, y);
  }
  std::vector<double> holder{0, 0, 0, 4};
  EXPECT_EQ(lorenz_points(holder, true).points,
            (std::vector<std::pair<double, double>>{{0, 0}, {0.25, 1}, {0.5, 1}, {0.75, 1}, {1, 1}}));
  std::vector<double> zeros{0, 0};
  EXPECT_THROW(lorenz_points(zeros, false), std::invalid_argument);
  EXPECT_THROW(lorenz_points(std::vector<double>{}, false), std::invalid_argument);
}

TEST(Lorenz, CurvesBracketDiagonalAndAreaMatchesGini) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_values(rng, 1 + rng() % 80, trial % 2);
    v.push_back(1.0);
    auto standard = lorenz_points(v, false);
    auto inverted = lorenz_points(v, true);
    EXPECT_EQ(standard.points.front(), std::make_pair(0.0, 0.0));
    EXPECT_EQ(standard.points.back(), std::make_pair(1.0, 1.0));
    for (std::size_t i = 0; i < standard.points.size(); ++i) {
      EXPECT_LE(standard.points[i].second, standard.points[i].first + 1e-12);
      EXPECT_GE(inverted.points[i].second, inverted.points[i].first - 1e-12);
      if (i > 0) {
        EXPECT_GE(standard.points[i].first, standard.points[i - 1].first);
        EXPECT_GE(standard.points[i].second, standard.points[i - 1].second);
      }
    }
    const double g = gini(v);
    EXPECT_NEAR(std::abs(2 * (0.5 - lorenz_area(standard))), g, 1e-9);
    EXPECT_NEAR(std::abs(2 * (lorenz_area(inverted) - 0.5)), g, 1e-9);
  }
}

TEST(Gini, Examples) {
  EXPECT_EQ(gini(std::vector<double>{1, 1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(gini(std::vector<double>{0, 0, 0, 4}), 0.75);
  EXPECT_DOUBLE_EQ(gini(std::vector<double>{0, 0, 3}), 2.0 / 3.0);
  EXPECT_EQ(gini(std::vector<double>{0, 0}), 0.0);
  EXPECT_THROW(gini(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(gini(std::vector<double>{1, -1}), std::invalid_argument);
}

TEST(Gini, NormalizedExamples) {
  EXPECT_DOUBLE_EQ(normalized_gini(std::vector<double>{0, 0, 0, 4}), 1.0);
  EXPECT_EQ(normalized_gini(std::vector<double>{5, 5}), 0.0);
  EXPECT_THROW(normalized_gini(std::vector<double>{5}), std::invalid_argument);
}

TEST(Gini, MatchesPairwiseOracleAndInvariances) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_values(rng, 1 + rng() % 150, trial % 2);
    const double g = gini(v);
    EXPECT_NEAR(g, oracle::gini(v), 1e-9);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0 - 1.0 / v.size() + 1e-12);
    auto scaled = v;
    for (auto& x : scaled) x *= 7.25;
    EXPECT_NEAR(gini(scaled), g, 1e-9);
    auto shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_NEAR(gini(shuffled), g, 1e-12);
    if (v.size() >= 2) {
      const double ng = normalized_gini(v);
      EXPECT_GE(ng, 0.0);
      EXPECT_LE(ng, 1.0 + 1e-12);
    }
  }
}

TEST(Regression, LinearExamples) {
  auto exact = fit_linear(std::vector<double>{0, 1, 2}, std::vector<double>{1, 3, 5});
  EXPECT_NEAR(exact.a, 2.0, 1e-12);
  EXPECT_NEAR(exact.b, 1.0, 1e-12);
  EXPECT_NEAR(exact.r_squared, 1.0, 1e-12);

  auto flat = fit_linear(std::vector<double>{0, 1, 2}, std::vector<double>{4, 4, 4});
  EXPECT_NEAR(flat.a, 0.0, 1e-12);
  EXPECT_NEAR(flat.b, 4.0, 1e-12);
  EXPECT_EQ(flat.r_squared, 1.0);

  auto curved = fit_linear(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 4});
  EXPECT_NEAR(curved.a, 2.0, 1e-12);
  EXPECT_NEAR(curved.b, -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(curved.r_squared, 24.0 / 26.0, 1e-12);
  EXPECT_NEAR(curved.predict(3), 6.0 - 1.0 / 3.0, 1e-12);

  EXPECT_THROW(fit_linear(std::vector<double>{0, 1}, std::vector<double>{0, 1}), std::invalid_argument);
  EXPECT_THROW(fit_linear(std::vector<double>{1, 1, 1}, std::vector<double>{0, 1, 2}), std::invalid_argument);
}

TEST(Regression, ExponentialExamples) {
  const double e = std::exp(1.0);
  auto exact = fit_exponential(std::vector<double>{0, 1, 2}, std::vector<double>{1, e, e * e});
  EXPECT_NEAR(exact.a, 1.0, 1e-12);
  EXPECT_NEAR(exact.b, 1.0, 1e-12);
  EXPECT_NEAR(exact.r_squared, 1.0, 1e-12);
  ASSERT_TRUE(exact.r_squared_log.has_value());
  EXPECT_NEAR(*exact.r_squared_log, 1.0, 1e-12);

  auto flat = fit_exponential(std::vector<double>{0, 1, 2}, std::vector<double>{2, 2, 2});
  EXPECT_NEAR(flat.a, 2.0, 1e-12);
  EXPECT_NEAR(flat.b, 0.0, 1e-12);
  EXPECT_NEAR(flat.r_squared, 1.0, 1e-12);

  EXPECT_THROW(fit_exponential(std::vector<double>{0, 1, 2}, std::vector<double>{1, 0, 2}), std::invalid_argument);
}

TEST(Regression, ModelSelectionOnGeneratedData) {
  std::vector<double> x, lin, ex;
  for (int i = 0; i < 48; ++i) {
    x.push_back(i);
    lin.push_back(3.5 * i + 12);
    ex.push_back(40 * std::exp(0.08 * i));
  }
  EXPECT_NEAR(fit_linear(x, lin).r_squared, 1.0, 1e-9);
  const double exp_r2 = fit_exponential(x, ex).r_squared;
  EXPECT_NEAR(exp_r2, 1.0, 1e-6);
  EXPECT_GT(exp_r2, fit_linear(x, ex).r_squared);
}

TEST(Regression, RSquaredConvention) {
  std::vector<double> same{3, 3, 3};
  std::vector<double> off{3, 3, 4};
  EXPECT_EQ(r_squared(same, same), 1.0);
  EXPECT_EQ(r_squared(same, off), 0.0);
  EXPECT_EQ(to_string(GrowthModel::exponential), "exponential");
}
