#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ecodeps {

struct SurvivalObservation {
  double duration = 0.0;  // days, >= 0
  bool censored = false;

  friend bool operator==(const SurvivalObservation&, const SurvivalObservation&) = default;
};

struct SurvivalSample {
  std::string label;
  std::vector<SurvivalObservation> observations;
};

struct SurvivalStep {
  double time = 0.0;
  double survival = 1.0;
};

/// Right-continuous step function. The first step is always (0, 1).
struct SurvivalCurve {
  std::vector<SurvivalStep> steps;

  /// S(t): survival of the last step whose time is <= t.
  double at(double t) const;
};

/// Product-limit estimator. Steps are emitted at every distinct observed
/// duration; at tied times events are counted before censorings.
/// Throws std::invalid_argument for an empty sample or a negative duration.
SurvivalCurve kaplan_meier(const SurvivalSample& sample);

struct LogRankResult {
  double statistic = 0.0;  // chi-square, 1 degree of freedom
  bool significant = false;
};

/// Critical chi-square value (df = 1) for alpha = 0.05 or 0.01; other alphas
/// throw std::invalid_argument.
double chi_square_critical(double alpha);

/// Two-group log-rank test. Groups without any event, or with zero
/// hypergeometric variance, yield statistic 0.
LogRankResult log_rank(const SurvivalSample& a, const SurvivalSample& b, double alpha = 0.01);

enum class LorenzOrientation { standard, inverted };

struct LorenzCurve {
  LorenzOrientation orientation = LorenzOrientation::standard;
  std::vector<std::pair<double, double>> points;  // (cum_population, cum_value)
};

/// Cumulative shares after sorting ascending (standard) or descending
/// (inverted), starting at (0,0) and ending exactly at (1,1).
/// Throws std::invalid_argument for empty input, negative values, or zero sum.
LorenzCurve lorenz_points(std::span<const double> values, bool inverted);

/// Mean-absolute-difference Gini, sum|xi-xj| / (2 n^2 mean), via a sorted
/// prefix form in O(n log n). All-zero input gives 0. Range [0, 1 - 1/n].
/// Throws std::invalid_argument for empty input or negative values.
double gini(std::span<const double> values);

/// gini / (1 - 1/n); throws std::invalid_argument when n < 2.
double normalized_gini(std::span<const double> values);

enum class GrowthModel { linear, exponential };

struct RegressionFit {
  GrowthModel model = GrowthModel::linear;
  double a = 0.0;  // linear: slope; exponential: multiplier
  double b = 0.0;  // linear: intercept; exponential: rate
  double r_squared = 0.0;            // on the original scale
  std::optional<double> r_squared_log;  // exponential only: R^2 of the log-space fit

  /// linear: a*x + b; exponential: a*exp(b*x)
  double predict(double x) const;
};

/// Ordinary least squares y = a*x + b. Needs >= 3 points and non-zero
/// variance in x (std::invalid_argument otherwise).
RegressionFit fit_linear(std::span<const double> x, std::span<const double> y);

/// Least squares on log y = log a + b*x; R^2 evaluated on the back-transformed
/// predictions. Needs >= 3 points, all y > 0.
RegressionFit fit_exponential(std::span<const double> x, std::span<const double> y);

/// R^2 = 1 - SS_res/SS_tot; for SS_tot = 0 returns 1 when SS_res = 0 and 0 otherwise.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

std::string to_string(GrowthModel m);

}  // namespace ecodeps
