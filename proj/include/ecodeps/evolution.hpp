#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecodeps/indices.hpp"
#include "ecodeps/ingest.hpp"
#include "ecodeps/snapshot.hpp"
#include "ecodeps/stats.hpp"

namespace ecodeps {

struct TimeSeries {
  std::string name;
  std::vector<std::pair<Month, double>> points;

  std::vector<double> values() const;
  /// Month offsets from the first point (x axis for growth fits).
  std::vector<double> month_offsets() const;
};

struct EvolutionOptions {
  MonthAnchor anchor = MonthAnchor::start;
  unsigned jobs = 1;
};

struct GrowthSeries {
  TimeSeries packages;
  TimeSeries dependencies;
};

struct UpdateBins {
  std::size_t never = 0;  // 0 updates
  std::size_t low = 0;    // 1-4 updates
  std::size_t high = 0;   // >= 5 updates
  std::size_t total = 0;

  friend bool operator==(const UpdateBins&, const UpdateBins&) = default;
};

/// Package-age bins for updates: [0,3), [3,6), [6,12), [12,24), [24,inf)
/// months of 30.44 days.
struct AgeHistogram {
  static constexpr std::size_t kBins = 5;
  static constexpr std::array<double, kBins> kLowerEdgeMonths{0, 3, 6, 12, 24};
  static constexpr double kDaysPerMonth = 30.44;

  std::array<std::size_t, kBins> counts{};
  std::size_t total = 0;

  bool empty() const { return total == 0; }
  double proportion(std::size_t bin) const {
    return total == 0 ? 0.0 : static_cast<double>(counts[bin]) / static_cast<double>(total);
  }
  static std::string label(std::size_t bin);
  static std::size_t bin_of(double age_days);
};

enum class InequalityPopulation {
  active,    // packages with at least one update in the window
  existing,  // every package released before the window end, zeros included
};

struct Inequality {
  std::vector<std::string> packages;
  std::vector<double> values;
  LorenzCurve lorenz;  // inverted
  double gini = 0.0;
  std::optional<double> normalized_gini;  // absent when fewer than 2 values
};

struct PackageMetrics {
  std::string package;
  std::uint32_t direct = 0;
  std::uint32_t transitive = 0;
  std::uint32_t reverse_direct = 0;
  std::uint32_t reverse_transitive = 0;
  std::size_t depth = 0;
};

struct MonthMetrics {
  Month month;
  Timestamp at{};
  std::size_t packages = 0;
  std::size_t dependencies = 0;  // edges
  std::uint64_t transitive_dependencies = 0;  // sum over packages
  std::size_t dependent = 0;
  std::size_t required = 0;
  std::size_t connected = 0;
  std::size_t top_level = 0;
  std::uint64_t changeability = 0;
  std::uint64_t reusability = 0;
  std::vector<std::uint64_t> p_impact;  // one per requested P
};

struct MonthlyOptions {
  EvolutionOptions evolution;
  int window_days = 30;
  std::vector<double> p_percents{5.0};
};

/// One sweep computing every per-month network metric: snapshot size, role
/// counts, transitive-dependent totals and all three indices. Months are
/// evaluated concurrently; results depend only on the inputs.
std::vector<MonthMetrics> monthly_metrics(std::shared_ptr<const Timeline> timeline, Month from,
                                          Month to, const MonthlyOptions& options = {});

GrowthSeries growth_series(const Dataset& d, Month from, Month to, const EvolutionOptions& options = {});
/// edges / nodes; months without packages are omitted.
TimeSeries dependency_ratio_series(const Dataset& d, Month from, Month to,
                                   const EvolutionOptions& options = {});
/// Updates per calendar month; include_first_releases counts every release.
TimeSeries update_counts_series(const Dataset& d, Month from, Month to,
                                bool include_first_releases = false);
UpdateBins update_distribution(const Dataset& d, Timestamp t);
/// Packages with >= 1 update in [window_start, window_end); throws on an inverted window.
std::vector<std::string> active_packages(const Dataset& d, Timestamp window_start, Timestamp window_end);
/// Update-count inequality; throws std::invalid_argument when no package qualifies.
Inequality update_inequality(const Dataset& d, Timestamp window_start, Timestamp window_end,
                             InequalityPopulation population = InequalityPopulation::active);
AgeHistogram updates_by_age(const Dataset& d, Timestamp window_start, Timestamp window_end);

/// One observation per release: time until the next release of the same
/// package (event) or until the cutoff (censored). With split_by_required the
/// result holds {required, not_required}, a release being "required" when its
/// package has a direct dependent in the snapshot at the release's timestamp.
std::vector<SurvivalSample> survival_dataset(const Dataset& d, bool split_by_required);

/// Sum of transitive / sum of direct dependencies; months without edges omitted.
TimeSeries transitive_ratio_series(const Dataset& d, Month from, Month to,
                                   const EvolutionOptions& options = {});
/// depth -> number of top-level packages with that dependency depth.
std::map<std::size_t, std::size_t> depth_distribution(const SnapshotGraph& g, unsigned jobs = 1);

/// Index value at every month boundary. `parameter` is the window in days for
/// changeability (default 30) and P for p_impact (default 5).
TimeSeries index_series(const Dataset& d, Month from, Month to, IndexKind which,
                        std::optional<double> parameter = std::nullopt,
                        const EvolutionOptions& options = {});

/// In-degree inequality among required packages.
Inequality dependents_inequality(const SnapshotGraph& g);

/// Per-package dependency counts and depth for the snapshot.
std::vector<PackageMetrics> package_metrics(const SnapshotGraph& g, unsigned jobs = 1);

RegressionFit fit_growth(const TimeSeries& series, GrowthModel model);

}  // namespace ecodeps
