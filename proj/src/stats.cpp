#include "ecodeps/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ecodeps {

double SurvivalCurve::at(double t) const {
  double s = 1.0;
  for (const auto& step : steps) {
    if (step.time > t) break;
    s = step.survival;
  }
  return s;
}

SurvivalCurve kaplan_meier(const SurvivalSample& sample) {
  if (sample.observations.empty()) throw std::invalid_argument("kaplan_meier: empty sample");
  std::vector<SurvivalObservation> obs = sample.observations;
  for (const auto& o : obs) {
    if (!(o.duration >= 0.0)) throw std::invalid_argument("kaplan_meier: negative duration");
  }
  // events before censorings at equal times
  std::sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) {
    return a.duration != b.duration ? a.duration < b.duration : (!a.censored && b.censored);
  });

  SurvivalCurve curve;
  curve.steps.push_back({0.0, 1.0});
  // Between censorings the product telescopes to (still at risk) / (at risk
  // after the last censoring), so each run is evaluated with one division.
  double s = 1.0;
  double base = 1.0;
  std::size_t at_risk = obs.size();
  std::size_t run_start = obs.size();
  for (std::size_t i = 0; i < obs.size();) {
    const double t = obs[i].duration;
    std::size_t events = 0, total = 0;
    for (; i < obs.size() && obs[i].duration == t; ++i, ++total) events += !obs[i].censored;
    if (events > 0) s = base * static_cast<double>(at_risk - events) / static_cast<double>(run_start);
    if (total > events) {
      base = s;
      run_start = at_risk - total;
    }
    if (t == 0.0 && events == 0) {
      // (0, 1) already present
    } else {
      curve.steps.push_back({t, s});
    }
    at_risk -= total;
  }
  return curve;
}

double chi_square_critical(double alpha) {
  if (alpha == 0.05) return 3.841;
  if (alpha == 0.01) return 6.635;
  throw std::invalid_argument("log_rank: alpha must be 0.05 or 0.01");
}

LogRankResult log_rank(const SurvivalSample& a, const SurvivalSample& b, double alpha) {
  const double critical = chi_square_critical(alpha);
  if (a.observations.empty() || b.observations.empty()) {
    throw std::invalid_argument("log_rank: both samples must be non-empty");
  }
  struct Entry {
    double time;
    bool censored;
    int group;
  };
  std::vector<Entry> all;
  all.reserve(a.observations.size() + b.observations.size());
  for (const auto& o : a.observations) all.push_back({o.duration, o.censored, 0});
  for (const auto& o : b.observations) all.push_back({o.duration, o.censored, 1});
  std::sort(all.begin(), all.end(), [](const Entry& x, const Entry& y) { return x.time < y.time; });

  double at_risk_a = static_cast<double>(a.observations.size());
  double at_risk_b = static_cast<double>(b.observations.size());
  double observed_minus_expected = 0.0, variance = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    const double t = all[i].time;
    double events_a = 0, events_b = 0, leaving_a = 0, leaving_b = 0;
    for (; i < all.size() && all[i].time == t; ++i) {
      auto& leaving = all[i].group == 0 ? leaving_a : leaving_b;
      auto& events = all[i].group == 0 ? events_a : events_b;
      leaving += 1;
      if (!all[i].censored) events += 1;
    }
    const double events = events_a + events_b;
    const double at_risk = at_risk_a + at_risk_b;
    if (events > 0) {
      observed_minus_expected += events_a - events * at_risk_a / at_risk;
      if (at_risk > 1) {
        variance += events * (at_risk_a / at_risk) * (at_risk_b / at_risk) * (at_risk - events) /
                    (at_risk - 1);
      }
    }
    at_risk_a -= leaving_a;
    at_risk_b -= leaving_b;
  }
  LogRankResult result;
  if (variance > 0) result.statistic = observed_minus_expected * observed_minus_expected / variance;
  result.significant = result.statistic > critical;
  return result;
}

namespace {

void check_values(std::span<const double> values, const char* who) {
  if (values.empty()) throw std::invalid_argument(std::string(who) + ": empty input");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) + ": values must be finite and non-negative");
    }
  }
}

}  // namespace

LorenzCurve lorenz_points(std::span<const double> values, bool inverted) {
  check_values(values, "lorenz_points");
  std::vector<double> sorted(values.begin(), values.end());
  if (inverted) {
    std::sort(sorted.begin(), sorted.end(), std::greater<>{});
  } else {
    std::sort(sorted.begin(), sorted.end());
  }
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  if (total <= 0.0) throw std::invalid_argument("lorenz_points: values sum to zero");

  LorenzCurve curve;
  curve.orientation = inverted ? LorenzOrientation::inverted : LorenzOrientation::standard;
  curve.points.reserve(sorted.size() + 1);
  curve.points.emplace_back(0.0, 0.0);
  const auto n = static_cast<double>(sorted.size());
  double cumulative = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    curve.points.emplace_back(static_cast<double>(i + 1) / n, cumulative / total);
  }
  curve.points.back() = {1.0, 1.0};
  return curve;
}

double gini(std::span<const double> values) {
  check_values(values, "gini");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double total = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    total += sorted[i];
    // coefficient (2i - n - 1) for 1-based rank i
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  if (total == 0.0) return 0.0;
  return weighted / (n * total);
}

double normalized_gini(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("normalized_gini: needs at least 2 values");
  const auto n = static_cast<double>(values.size());
  return gini(values) / (1.0 - 1.0 / n);
}

double RegressionFit::predict(double x) const {
  return model == GrowthModel::linear ? a * x + b : a * std::exp(b * x);
}

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  const double mean =
      std::accumulate(observed.begin(), observed.end(), 0.0) / static_cast<double>(observed.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

namespace {

std::pair<double, double> least_squares(std::span<const double> x, std::span<const double> y,
                                        const char* who) {
  if (x.size() != y.size()) throw std::invalid_argument(std::string(who) + ": size mismatch");
  if (x.size() < 3) throw std::invalid_argument(std::string(who) + ": needs at least 3 points");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument(std::string(who) + ": zero variance in x");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace

RegressionFit fit_linear(std::span<const double> x, std::span<const double> y) {
  auto [slope, intercept] = least_squares(x, y, "fit_linear");
  RegressionFit fit{GrowthModel::linear, slope, intercept, 0.0, std::nullopt};
  std::vector<double> predicted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) predicted[i] = fit.predict(x[i]);
  fit.r_squared = r_squared(y, predicted);
  return fit;
}

RegressionFit fit_exponential(std::span<const double> x, std::span<const double> y) {
  std::vector<double> log_y(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw std::invalid_argument("fit_exponential: values must be positive");
    log_y[i] = std::log(y[i]);
  }
  auto [rate, log_a] = least_squares(x, log_y, "fit_exponential");
  RegressionFit fit{GrowthModel::exponential, std::exp(log_a), rate, 0.0, std::nullopt};
  std::vector<double> predicted(x.size()), predicted_log(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    predicted[i] = fit.predict(x[i]);
    predicted_log[i] = log_a + rate * x[i];
  }
  fit.r_squared = r_squared(y, predicted);
  fit.r_squared_log = r_squared(log_y, predicted_log);
  return fit;
}

std::string to_string(GrowthModel m) { return m == GrowthModel::linear ? "linear" : "exponential"; }

}  // namespace ecodeps
