#include "ecodeps/evolution.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ecodeps/graphops.hpp"
#include "ecodeps/parallel.hpp"

namespace ecodeps {

std::vector<double> TimeSeries::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.second);
  return out;
}

std::vector<double> TimeSeries::month_offsets() const {
  std::vector<double> out;
  out.reserve(points.size());
  if (points.empty()) return out;
  const auto first = points.front().first;
  for (const auto& p : points) {
    out.push_back(static_cast<double>((p.first - first).count()));
  }
  return out;
}

std::string AgeHistogram::label(std::size_t bin) {
  static const std::array<const char*, kBins> labels{"[0,3)", "[3,6)", "[6,12)", "[12,24)",
                                                     "[24,inf)"};
  return labels.at(bin);
}

std::size_t AgeHistogram::bin_of(double age_days) {
  const double months = age_days / kDaysPerMonth;
  std::size_t bin = 0;
  for (std::size_t i = 1; i < kBins; ++i) {
    if (months >= kLowerEdgeMonths[i]) bin = i;
  }
  return bin;
}

namespace {

std::shared_ptr<const Timeline> compile(const Dataset& d) { return std::make_shared<const Timeline>(d); }

void check_window(Timestamp start, Timestamp end) {
  if (start > end) {
    throw std::invalid_argument("window [" + format_timestamp(start) + ", " + format_timestamp(end) +
                                ") is inverted");
  }
}

// Runs fn(month_index, snapshot) for every month and collects the results in order.
template <class Result, class Fn>
std::vector<Result> per_month(const std::shared_ptr<const Timeline>& timeline,
                              const std::vector<Month>& months, const EvolutionOptions& options,
                              Fn&& fn) {
  std::vector<Result> results(months.size());
  parallel_for(months.size(), options.jobs, [&](std::size_t i) {
    auto g = build_snapshot(timeline, anchor_instant(months[i], options.anchor, timeline->cutoff()));
    results[i] = fn(i, g);
  });
  return results;
}

std::uint64_t in_degree_h_index(const SnapshotGraph& g) {
  std::vector<std::uint64_t> counts;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.in_degree(v) > 0) counts.push_back(g.in_degree(v));
  }
  return h_index(counts);
}

Inequality inequality_of(std::vector<std::string> names, std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("inequality: empty population");
  Inequality out;
  out.packages = std::move(names);
  out.values = std::move(values);
  out.gini = gini(out.values);
  if (out.values.size() >= 2) out.normalized_gini = normalized_gini(out.values);
  if (std::accumulate(out.values.begin(), out.values.end(), 0.0) > 0.0) {
    out.lorenz = lorenz_points(out.values, true);
  } else {
    out.lorenz.orientation = LorenzOrientation::inverted;
  }
  return out;
}

}  // namespace

std::vector<MonthMetrics> monthly_metrics(std::shared_ptr<const Timeline> timeline, Month from,
                                          Month to, const MonthlyOptions& options) {
  auto months = checked_months(from, to, timeline->cutoff());
  for (double p : options.p_percents) {
    if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("p_impact: P must be in (0, 100]");
  }
  return per_month<MonthMetrics>(timeline, months, options.evolution,
                                 [&](std::size_t i, const SnapshotGraph& g) {
    MonthMetrics m;
    m.month = months[i];
    m.at = g.at();
    m.packages = g.node_count();
    m.dependencies = g.edge_count();
    auto roles = classify(g);
    m.dependent = roles.dependent;
    m.required = roles.required;
    m.connected = roles.connected;
    m.top_level = roles.top_level;
    auto dependents = transitive_counts(g, Direction::dependents, 1);
    m.transitive_dependencies = std::accumulate(dependents.begin(), dependents.end(), std::uint64_t{0});
    m.reusability = in_degree_h_index(g);
    for (double p : options.p_percents) m.p_impact.push_back(p_impact_value(dependents, g.node_count(), p));
    m.changeability = changeability_index(*timeline, g.at(), options.window_days).value;
    return m;
  });
}

GrowthSeries growth_series(const Dataset& d, Month from, Month to, const EvolutionOptions& options) {
  auto timeline = compile(d);
  auto months = checked_months(from, to, timeline->cutoff());
  auto sizes = per_month<std::pair<std::size_t, std::size_t>>(
      timeline, months, options,
      [](std::size_t, const SnapshotGraph& g) { return std::pair{g.node_count(), g.edge_count()}; });
  GrowthSeries out{{"packages", {}}, {"dependencies", {}}};
  for (std::size_t i = 0; i < months.size(); ++i) {
    out.packages.points.emplace_back(months[i], static_cast<double>(sizes[i].first));
    out.dependencies.points.emplace_back(months[i], static_cast<double>(sizes[i].second));
  }
  return out;
}

TimeSeries dependency_ratio_series(const Dataset& d, Month from, Month to,
                                   const EvolutionOptions& options) {
  auto growth = growth_series(d, from, to, options);
  TimeSeries out{"dependency_ratio", {}};
  for (std::size_t i = 0; i < growth.packages.points.size(); ++i) {
    const double nodes = growth.packages.points[i].second;
    if (nodes == 0) continue;
    out.points.emplace_back(growth.packages.points[i].first,
                            growth.dependencies.points[i].second / nodes);
  }
  return out;
}

TimeSeries update_counts_series(const Dataset& d, Month from, Month to, bool include_first_releases) {
  auto months = checked_months(from, to, d.cutoff);
  Timeline timeline(d);
  std::map<Month, double> counts;
  for (auto m : months) counts[m] = 0;
  for (ReleaseId r = 0; r < timeline.release_count(); ++r) {
    if (!include_first_releases && !timeline.is_update(r)) continue;
    auto it = counts.find(month_of(timeline.release(r).timestamp));
    if (it != counts.end()) it->second += 1;
  }
  TimeSeries out{include_first_releases ? "releases" : "updates", {}};
  for (const auto& [m, c] : counts) out.points.emplace_back(m, c);
  return out;
}

UpdateBins update_distribution(const Dataset& d, Timestamp t) {
  if (t > d.cutoff) throw std::invalid_argument("update_distribution: instant after cutoff");
  Timeline timeline(d);
  UpdateBins bins;
  for (PackageId p = 0; p < timeline.package_count(); ++p) {
    auto latest = timeline.latest_at(p, t);
    if (!latest) continue;
    const auto updates = timeline.release_rank(*latest);
    ++bins.total;
    if (updates == 0) {
      ++bins.never;
    } else if (updates < 5) {
      ++bins.low;
    } else {
      ++bins.high;
    }
  }
  return bins;
}

namespace {

// Per-package update counts in [start, end), keyed by package id.
std::vector<std::uint32_t> window_update_counts(const Timeline& timeline, Timestamp start, Timestamp end) {
  std::vector<std::uint32_t> counts(timeline.package_count(), 0);
  for (ReleaseId r = 0; r < timeline.release_count(); ++r) {
    const auto ts = timeline.release(r).timestamp;
    if (timeline.is_update(r) && ts >= start && ts < end) ++counts[timeline.release_package(r)];
  }
  return counts;
}

}  // namespace

std::vector<std::string> active_packages(const Dataset& d, Timestamp window_start, Timestamp window_end) {
  check_window(window_start, window_end);
  Timeline timeline(d);
  auto counts = window_update_counts(timeline, window_start, window_end);
  std::vector<std::string> out;
  for (PackageId p = 0; p < counts.size(); ++p) {
    if (counts[p] > 0) out.push_back(timeline.package_name(p));
  }
  return out;
}

Inequality update_inequality(const Dataset& d, Timestamp window_start, Timestamp window_end,
                             InequalityPopulation population) {
  check_window(window_start, window_end);
  Timeline timeline(d);
  auto counts = window_update_counts(timeline, window_start, window_end);
  std::vector<std::string> names;
  std::vector<double> values;
  for (PackageId p = 0; p < counts.size(); ++p) {
    bool include = counts[p] > 0;
    if (population == InequalityPopulation::existing) {
      auto releases = timeline.releases_of(p);
      include = !releases.empty() && timeline.release(releases.front()).timestamp < window_end;
    }
    if (include) {
      names.push_back(timeline.package_name(p));
      values.push_back(counts[p]);
    }
  }
  if (std::accumulate(values.begin(), values.end(), 0.0) == 0.0) {
    throw std::invalid_argument("update_inequality: no package was updated in the window");
  }
  return inequality_of(std::move(names), std::move(values));
}

AgeHistogram updates_by_age(const Dataset& d, Timestamp window_start, Timestamp window_end) {
  check_window(window_start, window_end);
  Timeline timeline(d);
  AgeHistogram hist;
  for (ReleaseId r = 0; r < timeline.release_count(); ++r) {
    const auto ts = timeline.release(r).timestamp;
    if (!timeline.is_update(r) || ts < window_start || ts >= window_end) continue;
    const auto first = timeline.releases_of(timeline.release_package(r)).front();
    ++hist.counts[AgeHistogram::bin_of(days_between(timeline.release(first).timestamp, ts))];
    ++hist.total;
  }
  return hist;
}

std::vector<SurvivalSample> survival_dataset(const Dataset& d, bool split_by_required) {
  Timeline timeline(d);
  const auto n_releases = timeline.release_count();

  std::vector<SurvivalObservation> obs(n_releases);
  for (PackageId p = 0; p < timeline.package_count(); ++p) {
    auto list = timeline.releases_of(p);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto ts = timeline.release(list[i]).timestamp;
      if (i + 1 < list.size()) {
        obs[list[i]] = {days_between(ts, timeline.release(list[i + 1]).timestamp), false};
      } else {
        obs[list[i]] = {days_between(ts, timeline.cutoff()), true};
      }
    }
  }

  if (!split_by_required) {
    SurvivalSample all{"all", {}};
    all.observations.reserve(n_releases);
    for (auto r : timeline.chronological()) all.observations.push_back(obs[r]);
    return {std::move(all)};
  }

  // Sweep releases in time order, maintaining the in-degree of every package
  // in the network formed by each package's current latest release. All
  // releases sharing a timestamp are applied before any of them is assessed.
  constexpr ReleaseId kNone = UINT32_MAX;
  std::vector<ReleaseId> current(timeline.package_count(), kNone);
  std::vector<std::uint32_t> in_degree(timeline.package_count(), 0);
  SurvivalSample required{"required", {}}, not_required{"not_required", {}};
  const auto& order = timeline.chronological();
  for (std::size_t i = 0; i < order.size();) {
    const auto ts = timeline.release(order[i]).timestamp;
    std::size_t j = i;
    for (; j < order.size() && timeline.release(order[j]).timestamp == ts; ++j) {
      const ReleaseId r = order[j];
      const PackageId p = timeline.release_package(r);
      if (current[p] != kNone) {
        for (auto t : timeline.targets(current[p])) --in_degree[t];
      }
      current[p] = r;
      for (auto t : timeline.targets(r)) ++in_degree[t];
    }
    for (; i < j; ++i) {
      const ReleaseId r = order[i];
      auto& sample = in_degree[timeline.release_package(r)] > 0 ? required : not_required;
      sample.observations.push_back(obs[r]);
    }
  }
  return {std::move(required), std::move(not_required)};
}

TimeSeries transitive_ratio_series(const Dataset& d, Month from, Month to,
                                   const EvolutionOptions& options) {
  auto timeline = compile(d);
  auto months = checked_months(from, to, timeline->cutoff());
  auto sums = per_month<std::pair<std::uint64_t, std::uint64_t>>(
      timeline, months, options, [](std::size_t, const SnapshotGraph& g) {
        auto counts = transitive_counts(g, Direction::dependencies, 1);
        return std::pair{std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}),
                         static_cast<std::uint64_t>(g.edge_count())};
      });
  TimeSeries out{"transitive_ratio", {}};
  for (std::size_t i = 0; i < months.size(); ++i) {
    if (sums[i].second == 0) continue;
    out.points.emplace_back(months[i],
                            static_cast<double>(sums[i].first) / static_cast<double>(sums[i].second));
  }
  return out;
}

std::map<std::size_t, std::size_t> depth_distribution(const SnapshotGraph& g, unsigned jobs) {
  std::vector<NodeId> top;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.out_degree(v) > 0 && g.in_degree(v) == 0) top.push_back(v);
  }
  std::map<std::size_t, std::size_t> hist;
  for (auto depth : dependency_depths(g, top, jobs)) ++hist[depth];
  return hist;
}

TimeSeries index_series(const Dataset& d, Month from, Month to, IndexKind which,
                        std::optional<double> parameter, const EvolutionOptions& options) {
  auto timeline = compile(d);
  auto months = checked_months(from, to, timeline->cutoff());
  TimeSeries out{to_string(which), {}};
  std::vector<double> values(months.size(), 0.0);
  switch (which) {
    case IndexKind::changeability: {
      const double window = parameter.value_or(30.0);
      if (window < 1 || window != static_cast<int>(window)) {
        throw std::invalid_argument("changeability: window must be a positive whole number of days");
      }
      parallel_for(months.size(), options.jobs, [&](std::size_t i) {
        values[i] = static_cast<double>(
            changeability_index(*timeline, anchor_instant(months[i], options.anchor, timeline->cutoff()),
                                static_cast<int>(window))
                .value);
      });
      break;
    }
    case IndexKind::reusability:
      values = per_month<double>(timeline, months, options, [](std::size_t, const SnapshotGraph& g) {
        return static_cast<double>(in_degree_h_index(g));
      });
      break;
    case IndexKind::p_impact: {
      const double p = parameter.value_or(5.0);
      values = per_month<double>(timeline, months, options, [p](std::size_t, const SnapshotGraph& g) {
        return static_cast<double>(p_impact_index(g, p).value);
      });
      break;
    }
  }
  for (std::size_t i = 0; i < months.size(); ++i) out.points.emplace_back(months[i], values[i]);
  return out;
}

Inequality dependents_inequality(const SnapshotGraph& g) {
  std::vector<std::string> names;
  std::vector<double> values;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.in_degree(v) == 0) continue;
    names.push_back(g.name(v));
    values.push_back(static_cast<double>(g.in_degree(v)));
  }
  if (values.empty()) throw std::invalid_argument("dependents_inequality: no required packages");
  return inequality_of(std::move(names), std::move(values));
}

std::vector<PackageMetrics> package_metrics(const SnapshotGraph& g, unsigned jobs) {
  auto forward = transitive_counts(g, Direction::dependencies, jobs);
  auto backward = transitive_counts(g, Direction::dependents, jobs);
  std::vector<NodeId> all(g.node_count());
  std::iota(all.begin(), all.end(), NodeId{0});
  auto depths = dependency_depths(g, all, jobs);
  std::vector<PackageMetrics> out(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out[v] = {g.name(v),
              static_cast<std::uint32_t>(g.out_degree(v)),
              forward[v],
              static_cast<std::uint32_t>(g.in_degree(v)),
              backward[v],
              depths[v]};
  }
  return out;
}

RegressionFit fit_growth(const TimeSeries& series, GrowthModel model) {
  auto x = series.month_offsets();
  auto y = series.values();
  return model == GrowthModel::linear ? fit_linear(x, y) : fit_exponential(x, y);
}

}  // namespace ecodeps
