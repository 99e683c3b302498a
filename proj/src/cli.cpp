#include "ecodeps/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "ecodeps/evolution.hpp"
#include "ecodeps/fixtures.hpp"
#include "ecodeps/graphops.hpp"
#include "ecodeps/indices.hpp"
#include "ecodeps/ingest.hpp"
#include "ecodeps/parallel.hpp"
#include "ecodeps/snapshot.hpp"
#include "ecodeps/stats.hpp"
#include "ecodeps/table.hpp"

namespace ecodeps {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  // dataset
  std::string data_dir;
  std::string cutoff;
  std::string ecosystem;
  std::string kinds = "runtime,imports,depends,normal";
  std::string exclude_file;
  bool no_filter = false;
  // output
  std::string format = "csv";
  std::string out;
  std::string out_dir;
  std::string manifest;
  unsigned jobs = 0;
  std::string anchor = "start";
  // command arguments
  std::string what;
  std::string at;
  std::string from;
  std::string to;
  std::vector<std::string> window;
  std::string index_name;
  double p_percent = 5.0;
  int window_days = 30;
  bool edges = false;
  bool include_first_releases = false;
  bool fit = false;
  bool r2_log = false;
  bool split_required = false;
  bool km = false;
  bool logrank = false;
  double alpha = 0.01;
  std::string population = "active";
  bool summary = false;
  bool transitive = false;
  // fixtures
  std::string dest;
  GeneratorConfig generator;
  std::string generator_start = "2010-01";
};

Timestamp arg_instant(const std::string& text, const char* flag) {
  try {
    return parse_date_arg(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string(flag) + ": expected YYYY-MM-DD or YYYY-MM, got '" + text + "'");
  }
}

Month arg_month(const std::string& text, const char* flag) {
  try {
    if (text.size() == 7) return parse_month(text);
    return month_of(parse_timestamp(text));
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string(flag) + ": expected YYYY-MM, got '" + text + "'");
  }
}

std::set<std::string> split_kinds(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto kind = normalize_kind(item);
    if (!kind.empty()) out.insert(kind);
  }
  return out;
}

class Session {
 public:
  Session(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {
    jobs_ = opt.jobs == 0 ? default_jobs() : opt.jobs;
    format_ = opt.format == "json" ? OutputFormat::json : OutputFormat::csv;
    anchor_ = opt.anchor == "end" ? MonthAnchor::end : MonthAnchor::start;
  }

  const Dataset& dataset() {
    if (!dataset_) {
      if (opt_.data_dir.empty()) throw UsageError("--data is required");
      LoadOptions load;
      if (!opt_.cutoff.empty()) load.cutoff = arg_instant(opt_.cutoff, "--cutoff");
      if (!opt_.ecosystem.empty()) load.ecosystem = opt_.ecosystem;
      auto d = load_dataset_dir(opt_.data_dir, load);
      if (!opt_.no_filter) {
        std::set<std::string> excluded;
        if (!opt_.exclude_file.empty()) excluded = read_exclusion_list(opt_.exclude_file);
        d = filter_dependencies(d, split_kinds(opt_.kinds), excluded);
      }
      dataset_ = std::make_unique<Dataset>(std::move(d));
    }
    return *dataset_;
  }

  std::shared_ptr<const Timeline> timeline() {
    if (!timeline_) timeline_ = std::make_shared<const Timeline>(dataset());
    return timeline_;
  }

  Timestamp at_or_cutoff() {
    return opt_.at.empty() ? dataset().cutoff : arg_instant(opt_.at, "--at");
  }

  std::pair<Month, Month> month_span() {
    const auto& d = dataset();
    Month to = opt_.to.empty() ? month_of(d.cutoff) : arg_month(opt_.to, "--to");
    Month from = to;
    if (!opt_.from.empty()) {
      from = arg_month(opt_.from, "--from");
    } else if (!d.releases.empty()) {
      auto first = std::min_element(d.releases.begin(), d.releases.end(),
                                    [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
      from = month_of(first->timestamp);
    }
    return {from, to};
  }

  std::pair<Timestamp, Timestamp> window_or_default() {
    if (opt_.window.size() == 2) {
      return {arg_instant(opt_.window[0], "--window"), arg_instant(opt_.window[1], "--window")};
    }
    const auto end = dataset().cutoff;
    return {days_before(end, 365), end};
  }

  EvolutionOptions evolution() const { return {anchor_, jobs_}; }
  unsigned jobs() const { return jobs_; }

  void emit(const std::vector<Table>& tables) {
    if (!opt_.out_dir.empty()) {
      fs::create_directories(opt_.out_dir);
      const std::string eco = dataset_ ? dataset_->ecosystem : std::string("none");
      for (const auto& t : tables) {
        auto path = fs::path(opt_.out_dir) / (t.metric + "__" + eco + (format_ == OutputFormat::csv ? ".csv" : ".json"));
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write " + path.string());
        write_table(file, t, format_);
      }
      return;
    }
    if (!opt_.out.empty()) {
      std::ofstream file(opt_.out, std::ios::binary | std::ios::trunc);
      if (!file) throw std::runtime_error("cannot write " + opt_.out);
      for (const auto& t : tables) write_table(file, t, format_);
      return;
    }
    for (const auto& t : tables) write_table(out_, t, format_);
  }

  void write_manifest(const std::vector<std::string>& args) {
    if (opt_.manifest.empty()) return;
    nlohmann::ordered_json m;
    m["tool"] = "ecodeps";
    m["version"] = kToolVersion;
    m["arguments"] = args;
    if (dataset_) {
      m["dataset_dir"] = opt_.data_dir;
      m["dataset_sha256"] = dataset_hash(opt_.data_dir);
      m["ecosystem"] = dataset_->ecosystem;
      m["cutoff"] = format_timestamp(dataset_->cutoff);
      const auto& r = dataset_->filter_report;
      m["filter_report"] = {{"kind_dropped", r.kind_dropped},
                            {"excluded_releases", r.excluded_releases},
                            {"excluded_dependencies", r.excluded_dependencies},
                            {"duplicate_dependencies", r.duplicate_dependencies},
                            {"unresolved_dropped", r.unresolved_dropped},
                            {"unresolved_fraction", r.unresolved_fraction()}};
    }
    std::ofstream file(opt_.manifest, std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + opt_.manifest);
    file << m.dump(2) << '\n';
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  unsigned jobs_ = 1;
  OutputFormat format_ = OutputFormat::csv;
  MonthAnchor anchor_ = MonthAnchor::start;
  std::unique_ptr<Dataset> dataset_;
  std::shared_ptr<const Timeline> timeline_;
};

// ---------------------------------------------------------------------------
// subcommands

std::vector<Table> cmd_validate(Session& s) {
  const auto& d = s.dataset();
  auto report = validate_dataset(d);
  Table t{"validation", {"check", "package", "version", "detail"}, {}};
  for (const auto& r : report.duplicate_releases) t.add({"duplicate_release", r.package, r.version, ""});
  for (const auto& r : report.releases_after_cutoff) {
    t.add({"after_cutoff", r.package, r.version, format_timestamp(r.timestamp)});
  }
  for (const auto& dep : report.orphan_dependencies) {
    t.add({"orphan_dependency", dep.source_package, dep.source_version, dep.target_package});
  }
  for (const auto& f : report.ordering_flags) {
    t.add({"ordering", f.package, f.later_version,
           "released after " + f.earlier_version + " (" + format_timestamp(f.later_timestamp) + ")"});
  }
  for (const auto& b : report.burst_warnings) {
    t.add({"burst", "", "",
           format_month(b.month) + ": " + std::to_string(b.releases) + " releases, trailing median " +
               format_double(b.trailing_median)});
  }
  const auto& f = d.filter_report;
  t.add({"filter_kind_dropped", "", "", std::to_string(f.kind_dropped)});
  t.add({"filter_excluded_releases", "", "", std::to_string(f.excluded_releases)});
  t.add({"filter_excluded_dependencies", "", "", std::to_string(f.excluded_dependencies)});
  t.add({"filter_duplicate_dependencies", "", "", std::to_string(f.duplicate_dependencies)});
  t.add({"filter_unresolved_dropped", "", "", std::to_string(f.unresolved_dropped)});
  t.add({"filter_unresolved_fraction", "", "", format_double(f.unresolved_fraction())});
  if (report.has_errors()) throw std::pair<std::vector<Table>, int>{{t}, kExitDataError};
  return {t};
}

std::vector<Table> cmd_snapshot(Session& s, const Options& o) {
  if (o.at.empty()) throw UsageError("snapshot: --at is required");
  auto g = build_snapshot(s.timeline(), arg_instant(o.at, "--at"));
  Table summary{"snapshot", {"at", "packages", "dependencies", "dropped_dependencies"}, {}};
  summary.add({format_timestamp(g.at()), std::uint64_t{g.node_count()}, std::uint64_t{g.edge_count()},
               std::uint64_t{g.dropped_dependencies()}});
  if (!o.edges) return {summary};
  Table edges{"snapshot_edges", {"source", "target"}, {}};
  for (auto& [a, b] : g.edge_list()) edges.add({a, b});
  return {summary, edges};
}

Table month_value_table(const std::string& metric, const TimeSeries& series) {
  Table t{metric, {"month", "value"}, {}};
  for (const auto& [m, v] : series.points) t.add({format_month(m), v});
  return t;
}

Table fit_table(const std::vector<const TimeSeries*>& series, bool with_log) {
  Table t{"growth_fit", {"metric", "model", "a", "b", "r2"}, {}};
  if (with_log) t.columns.push_back("r2_log");
  for (const auto* ts : series) {
    for (auto model : {GrowthModel::linear, GrowthModel::exponential}) {
      std::vector<Cell> row{ts->name, to_string(model)};
      try {
        auto fit = fit_growth(*ts, model);
        row.insert(row.end(), {fit.a, fit.b, fit.r_squared});
        if (with_log) row.push_back(fit.r_squared_log ? Cell{*fit.r_squared_log} : Cell{});
      } catch (const std::invalid_argument&) {
        // model not applicable (too few points or non-positive values)
        row.insert(row.end(), {Cell{}, Cell{}, Cell{}});
        if (with_log) row.push_back(Cell{});
      }
      t.add(std::move(row));
    }
  }
  return t;
}

std::vector<Table> cmd_series(Session& s, const Options& o) {
  const auto& d = s.dataset();
  auto [from, to] = s.month_span();
  const auto& what = o.what;
  if (what == "growth") {
    auto g = growth_series(d, from, to, s.evolution());
    if (o.fit) return {fit_table({&g.packages, &g.dependencies}, o.r2_log)};
    Table t{"growth", {"month", "packages", "dependencies"}, {}};
    for (std::size_t i = 0; i < g.packages.points.size(); ++i) {
      t.add({format_month(g.packages.points[i].first),
             static_cast<std::uint64_t>(g.packages.points[i].second),
             static_cast<std::uint64_t>(g.dependencies.points[i].second)});
    }
    return {t};
  }
  if (what == "ratio") return {month_value_table("dependency_ratio", dependency_ratio_series(d, from, to, s.evolution()))};
  if (what == "updates") {
    auto series = update_counts_series(d, from, to, o.include_first_releases);
    if (o.fit) return {fit_table({&series}, o.r2_log)};
    return {month_value_table(series.name, series)};
  }
  if (what == "transitive-ratio") {
    return {month_value_table("transitive_ratio", transitive_ratio_series(d, from, to, s.evolution()))};
  }
  if (what == "roles") {
    auto metrics = monthly_metrics(s.timeline(), from, to, {s.evolution(), o.window_days, {o.p_percent}});
    Table t{"roles", {"month", "packages", "dependent", "required", "connected", "top_level"}, {}};
    for (const auto& m : metrics) {
      auto frac = [&](std::size_t c) { return m.packages ? static_cast<double>(c) / m.packages : 0.0; };
      t.add({format_month(m.month), std::uint64_t{m.packages}, frac(m.dependent), frac(m.required),
             frac(m.connected), frac(m.top_level)});
    }
    return {t};
  }
  if (what == "dependents-gini") {
    auto series = monthly_snapshots(s.timeline(), from, to, {MonthAnchor::start, s.jobs()});
    Table t{"dependents_gini", {"month", "value"}, {}};
    for (std::size_t i = 0; i < series.months.size(); ++i) {
      const auto& g = series.snapshots[i];
      std::vector<double> degrees;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.in_degree(v) > 0) degrees.push_back(static_cast<double>(g.in_degree(v)));
      }
      if (degrees.size() >= 2) t.add({format_month(series.months[i]), normalized_gini(degrees)});
    }
    return {t};
  }
  if (what == "index") {
    Table t{"index", {"month", "index_name", "parameter", "value"}, {}};
    auto parameter_of = [&](IndexKind k) -> Cell {
      if (k == IndexKind::changeability) return static_cast<double>(o.window_days);
      if (k == IndexKind::p_impact) return o.p_percent;
      return Cell{};
    };
    if (!o.index_name.empty()) {
      IndexKind kind;
      try {
        kind = parse_index_kind(o.index_name);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      std::optional<double> param;
      if (kind == IndexKind::changeability) param = o.window_days;
      if (kind == IndexKind::p_impact) param = o.p_percent;
      auto series = index_series(d, from, to, kind, param, s.evolution());
      for (const auto& [m, v] : series.points) {
        t.add({format_month(m), to_string(kind), parameter_of(kind), static_cast<std::uint64_t>(v)});
      }
      return {t};
    }
    auto metrics = monthly_metrics(s.timeline(), from, to, {s.evolution(), o.window_days, {o.p_percent}});
    for (const auto& m : metrics) {
      const auto month = format_month(m.month);
      t.add({month, "changeability", parameter_of(IndexKind::changeability), m.changeability});
      t.add({month, "reusability", Cell{}, m.reusability});
      t.add({month, "p_impact", parameter_of(IndexKind::p_impact), m.p_impact.front()});
    }
    return {t};
  }
  throw UsageError("series: unknown metric '" + what + "'");
}

std::vector<Table> cmd_distribution(Session& s, const Options& o) {
  const auto& d = s.dataset();
  if (o.what == "updates") {
    auto bins = update_distribution(d, s.at_or_cutoff());
    Table t{"update_distribution", {"bin", "count", "proportion"}, {}};
    auto prop = [&](std::size_t c) { return bins.total ? static_cast<double>(c) / bins.total : 0.0; };
    t.add({"never", std::uint64_t{bins.never}, prop(bins.never)});
    t.add({"1-4", std::uint64_t{bins.low}, prop(bins.low)});
    t.add({"5+", std::uint64_t{bins.high}, prop(bins.high)});
    return {t};
  }
  if (o.what == "age") {
    auto [start, end] = s.window_or_default();
    auto hist = updates_by_age(d, start, end);
    Table t{"updates_by_age", {"bin", "count", "proportion"}, {}};
    for (std::size_t b = 0; b < AgeHistogram::kBins; ++b) {
      t.add({AgeHistogram::label(b), std::uint64_t{hist.counts[b]}, hist.proportion(b)});
    }
    return {t};
  }
  auto g = build_snapshot(s.timeline(), s.at_or_cutoff());
  if (o.what == "depth") {
    auto hist = depth_distribution(g, s.jobs());
    std::size_t total = 0;
    for (const auto& [depth, count] : hist) total += count;
    Table t{"depth_distribution", {"bin", "count", "proportion"}, {}};
    for (const auto& [depth, count] : hist) {
      t.add({std::uint64_t{depth}, std::uint64_t{count}, static_cast<double>(count) / static_cast<double>(total)});
    }
    return {t};
  }
  if (o.what == "deps") {
    Table t{"dependency_distribution",
            {"package", "n_direct", "n_transitive", "n_rev_direct", "n_rev_transitive", "depth"},
            {}};
    for (const auto& m : package_metrics(g, s.jobs())) {
      t.add({m.package, std::uint64_t{m.direct}, std::uint64_t{m.transitive}, std::uint64_t{m.reverse_direct},
             std::uint64_t{m.reverse_transitive}, std::uint64_t{m.depth}});
    }
    return {t};
  }
  throw UsageError("distribution: unknown kind '" + o.what + "'");
}

std::vector<Table> cmd_survival(Session& s, const Options& o) {
  if (o.logrank && o.km) throw UsageError("survival: choose one of --km and --logrank");
  if (o.logrank && !o.split_required) throw UsageError("survival: --logrank needs --split-required");
  if (o.alpha != 0.05 && o.alpha != 0.01) throw UsageError("survival: --alpha must be 0.05 or 0.01");
  auto samples = survival_dataset(s.dataset(), o.split_required);
  if (o.logrank) {
    if (samples[0].observations.empty() || samples[1].observations.empty()) {
      throw std::invalid_argument("survival: one of the groups is empty");
    }
    auto result = log_rank(samples[0], samples[1], o.alpha);
    Table t{"logrank", {"statistic", "alpha", "critical", "significant"}, {}};
    t.add({result.statistic, o.alpha, chi_square_critical(o.alpha), result.significant});
    return {t};
  }
  Table t{"survival", {}, {}};
  if (o.split_required) {
    t.columns = {"group", "time", "survival"};
  } else {
    t.columns = {"time", "survival"};
  }
  for (const auto& sample : samples) {
    if (sample.observations.empty()) continue;
    for (const auto& step : kaplan_meier(sample).steps) {
      if (o.split_required) {
        t.add({sample.label, step.time, step.survival});
      } else {
        t.add({step.time, step.survival});
      }
    }
  }
  return {t};
}

std::vector<Table> cmd_inequality(Session& s, const Options& o) {
  Inequality result;
  std::string metric;
  if (o.what == "updates") {
    auto [start, end] = s.window_or_default();
    auto population = o.population == "existing" ? InequalityPopulation::existing : InequalityPopulation::active;
    result = update_inequality(s.dataset(), start, end, population);
    metric = "update_inequality";
  } else if (o.what == "dependents") {
    result = dependents_inequality(build_snapshot(s.timeline(), s.at_or_cutoff()));
    metric = "dependents_inequality";
  } else {
    throw UsageError("inequality: unknown population '" + o.what + "'");
  }
  if (o.summary) {
    Table t{metric + "_gini", {"population", "gini", "normalized_gini"}, {}};
    t.add({std::uint64_t{result.values.size()}, result.gini,
           result.normalized_gini ? Cell{*result.normalized_gini} : Cell{}});
    return {t};
  }
  Table t{metric, {"cum_pop", "cum_val"}, {}};
  for (const auto& [x, y] : result.lorenz.points) t.add({x, y});
  return {t};
}

std::vector<Table> cmd_index(Session& s, const Options& o) {
  if (o.at.empty()) throw UsageError("index: --at is required");
  const auto at = arg_instant(o.at, "--at");
  IndexKind kind;
  try {
    kind = parse_index_kind(o.what);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  IndexReport report;
  switch (kind) {
    case IndexKind::changeability:
      report = changeability_index(*s.timeline(), at, o.window_days);
      break;
    case IndexKind::reusability:
      report = reusability_index(build_snapshot(s.timeline(), at),
                                 o.transitive ? ReuseCount::transitive : ReuseCount::direct, s.jobs());
      break;
    case IndexKind::p_impact:
      report = p_impact_index(build_snapshot(s.timeline(), at), o.p_percent, s.jobs());
      break;
  }
  Table t{"index_" + to_string(kind), {"ecosystem", "at", "index_name", "parameter", "value"}, {}};
  t.add({report.ecosystem, format_timestamp(report.at), to_string(report.index),
         report.parameter ? Cell{*report.parameter} : Cell{}, report.value});
  return {t};
}

std::vector<Table> cmd_fixture(Options& o) {
  if (o.dest.empty()) throw UsageError("fixture: --dest is required");
  std::string hash;
  Dataset d;
  if (o.what == "tiny") {
    d = tiny_dataset();
    hash = write_dataset(d, o.dest);
  } else if (o.what == "generate") {
    o.generator.start = arg_month(o.generator_start, "--start");
    try {
      o.generator.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    d = generate(o.generator);
    hash = write_dataset(d, o.dest, o.generator);
  } else {
    throw UsageError("fixture: unknown kind '" + o.what + "'");
  }
  Table t{"fixture", {"path", "packages", "releases", "dependencies", "sha256"}, {}};
  t.add({o.dest, std::uint64_t{d.packages.size()}, std::uint64_t{d.releases.size()},
         std::uint64_t{d.dependencies.size()}, hash});
  return {t};
}

void add_dataset_options(CLI::App* app, Options& o) {
  app->add_option("--data,-d", o.data_dir, "Dataset directory (packages.csv, releases.csv, dependencies.csv)");
  app->add_option("--cutoff", o.cutoff, "End of observation (default: manifest.json, else latest release)");
  app->add_option("--ecosystem", o.ecosystem, "Ecosystem identifier");
  app->add_option("--kinds", o.kinds, "Comma-separated dependency kinds to keep")->capture_default_str();
  app->add_option("--exclude", o.exclude_file, "File listing packages to ignore, one per line");
  app->add_flag("--no-filter", o.no_filter, "Use every dependency row as-is");
  app->add_option("--jobs,-j", o.jobs, "Worker threads (default: $ECODEPS_JOBS or all cores)");
  app->add_option("--anchor", o.anchor, "Monthly snapshot instant")->check(CLI::IsMember({"start", "end"}))->capture_default_str();
  app->add_option("--manifest", o.manifest, "Write a JSON provenance record to this path");
}

void add_output_options(CLI::App* app, Options& o) {
  app->add_option("--format,-f", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app->add_option("--out,-o", o.out, "Write results to this file instead of standard output");
  app->add_option("--out-dir", o.out_dir, "Write each table to <dir>/<metric>__<ecosystem>.<format>");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"ecodeps: temporal package dependency network analytics", "ecodeps"};
  app.set_version_flag("--version", std::string("ecodeps ") + kToolVersion);
  app.require_subcommand(1);
  app.footer("Environment:\n  ECODEPS_JOBS  default worker count for monthly computations");

  auto* validate = app.add_subcommand("validate", "Consistency report and filter statistics");
  auto* snapshot = app.add_subcommand("snapshot", "Dependency network at one instant");
  snapshot->add_option("--at", o.at, "Instant (YYYY-MM-DD or YYYY-MM)")->required();
  snapshot->add_flag("--edges", o.edges, "Also list the edges");

  auto* series = app.add_subcommand("series", "Monthly time series");
  series->add_option("metric", o.what, "growth|ratio|updates|transitive-ratio|index|roles|dependents-gini")
      ->required()
      ->check(CLI::IsMember({"growth", "ratio", "updates", "transitive-ratio", "index", "roles", "dependents-gini"}));
  series->add_option("--from", o.from, "First month (YYYY-MM)");
  series->add_option("--to", o.to, "Last month (YYYY-MM)");
  series->add_option("--index", o.index_name, "changeability|reusability|impact (default: all)");
  series->add_option("--p", o.p_percent, "P for the P-impact index (percent)")->capture_default_str();
  series->add_option("--window-days", o.window_days, "Changeability window in days")->capture_default_str();
  series->add_flag("--include-first-releases", o.include_first_releases, "updates: count every release");
  series->add_flag("--fit", o.fit, "growth/updates: emit linear and exponential fits");
  series->add_flag("--r2-log", o.r2_log, "with --fit: also report R^2 of the log-space exponential fit");

  auto* distribution = app.add_subcommand("distribution", "Per-package distributions at one instant");
  distribution->add_option("kind", o.what, "updates|depth|deps|age")
      ->required()
      ->check(CLI::IsMember({"updates", "depth", "deps", "age"}));
  distribution->add_option("--at", o.at, "Instant (default: cutoff)");
  distribution->add_option("--window", o.window, "age: START END")->expected(2);

  auto* survival = app.add_subcommand("survival", "Time until a release is updated");
  survival->add_flag("--split-required", o.split_required, "Separate required and not-required packages");
  survival->add_flag("--km", o.km, "Kaplan-Meier curve(s) (default)");
  survival->add_flag("--logrank", o.logrank, "Log-rank test between the two groups");
  survival->add_option("--alpha", o.alpha, "Significance level (0.05 or 0.01)")->capture_default_str();

  auto* inequality = app.add_subcommand("inequality", "Lorenz curve and Gini index");
  inequality->add_option("subject", o.what, "updates|dependents")
      ->required()
      ->check(CLI::IsMember({"updates", "dependents"}));
  inequality->add_option("--window", o.window, "updates: START END (default: 365 days before cutoff)")->expected(2);
  inequality->add_option("--at", o.at, "dependents: instant (default: cutoff)");
  inequality->add_option("--population", o.population, "updates: active|existing")
      ->check(CLI::IsMember({"active", "existing"}))
      ->capture_default_str();
  inequality->add_flag("--summary", o.summary, "Emit population size and Gini values instead of the curve");

  auto* index = app.add_subcommand("index", "Ecosystem index at one instant");
  index->add_option("name", o.what, "changeability|reusability|impact")
      ->required()
      ->check(CLI::IsMember({"changeability", "reusability", "impact", "p_impact"}));
  index->add_option("--at", o.at, "Instant (YYYY-MM-DD or YYYY-MM)")->required();
  index->add_option("--p", o.p_percent, "P for the P-impact index (percent)")->capture_default_str();
  index->add_option("--window-days", o.window_days, "Changeability window in days")->capture_default_str();
  index->add_flag("--transitive", o.transitive, "reusability: count transitive dependents");

  auto* fixture = app.add_subcommand("fixture", "Write a reference or synthetic dataset");
  fixture->add_option("kind", o.what, "generate|tiny")->required()->check(CLI::IsMember({"generate", "tiny"}));
  fixture->add_option("--dest", o.dest, "Output directory")->required();
  fixture->add_option("--packages", o.generator.n_packages, "Number of packages")->capture_default_str();
  fixture->add_option("--months", o.generator.months, "Number of months")->capture_default_str();
  fixture->add_option("--seed", o.generator.seed, "Random seed")->capture_default_str();
  fixture->add_option("--bias", o.generator.attachment_bias, "Preferential attachment exponent")->capture_default_str();
  fixture->add_option("--mean-deps", o.generator.mean_deps, "Mean dependencies per package")->capture_default_str();
  fixture->add_option("--update-rate", o.generator.update_rate, "Mean updates per package per month")->capture_default_str();
  fixture->add_option("--start", o.generator_start, "First month (YYYY-MM)")->capture_default_str();
  fixture->add_option("--ecosystem", o.generator.ecosystem, "Ecosystem identifier")->capture_default_str();

  for (auto* sub : {validate, snapshot, series, distribution, survival, inequality, index}) {
    add_dataset_options(sub, o);
    add_output_options(sub, o);
  }
  add_output_options(fixture, o);

  std::vector<const char*> argv{"ecodeps"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "ecodeps " << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Session session(o, out);
  try {
    std::vector<Table> tables;
    if (validate->parsed()) {
      try {
        tables = cmd_validate(session);
      } catch (std::pair<std::vector<Table>, int>& failed) {
        session.emit(failed.first);
        err << "validate: dataset has structural errors\n";
        return failed.second;
      }
    } else if (snapshot->parsed()) {
      tables = cmd_snapshot(session, o);
    } else if (series->parsed()) {
      tables = cmd_series(session, o);
    } else if (distribution->parsed()) {
      tables = cmd_distribution(session, o);
    } else if (survival->parsed()) {
      tables = cmd_survival(session, o);
    } else if (inequality->parsed()) {
      tables = cmd_inequality(session, o);
    } else if (index->parsed()) {
      tables = cmd_index(session, o);
    } else if (fixture->parsed()) {
      tables = cmd_fixture(o);
    }
    session.emit(tables);
    session.write_manifest(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace ecodeps
