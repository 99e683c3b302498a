#include "ecodeps/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "csv.hpp"
#include "ecodeps/version_order.hpp"

namespace ecodeps {

namespace fs = std::filesystem;

ParseError::ParseError(std::string file, std::size_t line, std::string column,
                       const std::string& detail)
    : std::runtime_error(file + ":" + std::to_string(line) +
                         (column.empty() ? std::string{} : " [" + column + "]") + ": " + detail),
      file_(std::move(file)),
      line_(line),
      column_(std::move(column)) {}

namespace {

struct Row {
  std::size_t line;
  std::vector<std::string> fields;  // in the order of the requested columns
};

struct Table {
  std::vector<Row> rows;
  bool has_optional = false;
};

// Reads a CSV file and projects each row onto `required` (+ `optional`, if the
// header has it). Extra columns are ignored.
Table read_table(const fs::path& path, const std::vector<std::string>& required,
                 const std::string& optional = {}) {
  const std::string file = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(file, 0, "", "cannot open file");

  csv::Reader reader(in);
  std::vector<std::string> header;
  try {
    if (!reader.next(header)) throw ParseError(file, 1, "", "missing header row");
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ParseError*>(&e)) throw;
    throw ParseError(file, 1, "", e.what());
  }
  for (auto& h : header) {
    auto first = h.find_first_not_of(" \t");
    auto last = h.find_last_not_of(" \t");
    h = first == std::string::npos ? std::string{} : h.substr(first, last - first + 1);
  }

  std::vector<std::size_t> index;
  for (const auto& col : required) {
    auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) throw ParseError(file, 1, col, "missing required column");
    index.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  Table table;
  if (!optional.empty()) {
    auto it = std::find(header.begin(), header.end(), optional);
    if (it != header.end()) {
      table.has_optional = true;
      index.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  }

  std::vector<std::string> fields;
  for (;;) {
    try {
      if (!reader.next(fields)) break;
    } catch (const std::runtime_error& e) {
      throw ParseError(file, reader.record_line(), "", e.what());
    }
    if (fields.size() != header.size()) {
      std::size_t missing = std::min(fields.size(), header.size() - 1);
      throw ParseError(file, reader.record_line(), header[missing],
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    Row row{reader.record_line(), {}};
    row.fields.reserve(index.size());
    for (auto i : index) row.fields.push_back(std::move(fields[i]));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string trim_copy(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string release_key(std::string_view package, std::string_view version) {
  std::string key;
  key.reserve(package.size() + version.size() + 1);
  key.append(package).push_back('\0');
  key.append(version);
  return key;
}

}  // namespace

std::string normalize_kind(std::string_view kind) {
  auto out = trim_copy(kind);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::set<std::string> default_included_kinds() { return {"runtime", "imports", "depends", "normal"}; }

std::set<std::string> read_exclusion_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto name = trim_copy(line);
    if (name.empty() || name.front() == '#') continue;
    out.insert(std::move(name));
  }
  return out;
}

Dataset parse_dataset(const fs::path& packages_path, const fs::path& releases_path,
                      const fs::path& dependencies_path, Timestamp cutoff,
                      const ParseOptions& options) {
  auto packages_f = std::async(std::launch::async, [&] {
    return read_table(packages_path, {"name"}, "ecosystem");
  });
  auto releases_f = std::async(std::launch::async, [&] {
    return read_table(releases_path, {"package", "version", "timestamp"});
  });
  auto deps_f = std::async(std::launch::async, [&] {
    return read_table(dependencies_path,
                      {"source_package", "source_version", "target_package", "constraint", "kind"});
  });
  Table package_rows = packages_f.get();
  Table release_rows = releases_f.get();
  Table dep_rows = deps_f.get();

  Dataset d;
  d.ecosystem = options.ecosystem;
  d.cutoff = cutoff;

  const std::string pfile = packages_path.string();
  std::unordered_map<std::string, std::size_t> package_line;
  d.packages.reserve(package_rows.rows.size());
  for (auto& row : package_rows.rows) {
    auto name = trim_copy(row.fields[0]);
    if (name.empty()) throw ParseError(pfile, row.line, "name", "empty package name");
    auto [it, inserted] = package_line.emplace(name, row.line);
    if (!inserted) {
      throw ParseError(pfile, row.line, "name",
                       "duplicate package '" + name + "' (first on line " +
                           std::to_string(it->second) + ")");
    }
    std::string eco = package_rows.has_optional ? trim_copy(row.fields[1]) : std::string{};
    d.packages.push_back({std::move(name), eco.empty() ? options.ecosystem : std::move(eco)});
  }

  const std::string rfile = releases_path.string();
  std::unordered_map<std::string, std::size_t> release_line;
  d.releases.reserve(release_rows.rows.size());
  for (auto& row : release_rows.rows) {
    auto package = trim_copy(row.fields[0]);
    auto version = trim_copy(row.fields[1]);
    if (package.empty()) throw ParseError(rfile, row.line, "package", "empty package name");
    if (version.empty()) throw ParseError(rfile, row.line, "version", "empty version");
    if (!package_line.count(package)) {
      throw ParseError(rfile, row.line, "package", "undeclared package '" + package + "'");
    }
    auto ts = try_parse_timestamp(row.fields[2]);
    if (!ts) {
      throw ParseError(rfile, row.line, "timestamp", "invalid timestamp '" + row.fields[2] + "'");
    }
    if (*ts > cutoff) {
      throw ParseError(rfile, row.line, "timestamp",
                       "release after cutoff " + format_timestamp(cutoff));
    }
    auto [it, inserted] = release_line.emplace(release_key(package, version), row.line);
    if (!inserted) {
      throw ParseError(rfile, row.line, "version",
                       "duplicate release " + package + "@" + version + " (lines " +
                           std::to_string(it->second) + " and " + std::to_string(row.line) + ")");
    }
    d.releases.push_back({std::move(package), std::move(version), *ts});
  }

  const std::string dfile = dependencies_path.string();
  d.dependencies.reserve(dep_rows.rows.size());
  for (auto& row : dep_rows.rows) {
    auto source = trim_copy(row.fields[0]);
    auto source_version = trim_copy(row.fields[1]);
    auto target = trim_copy(row.fields[2]);
    if (!release_line.count(release_key(source, source_version))) {
      throw ParseError(dfile, row.line, "source_version",
                       "unknown source release " + source + "@" + source_version);
    }
    if (target.empty()) throw ParseError(dfile, row.line, "target_package", "empty target");
    d.dependencies.push_back({std::move(source), std::move(source_version), std::move(target),
                              std::move(row.fields[3]), normalize_kind(row.fields[4])});
  }
  return d;
}

Dataset filter_dependencies(const Dataset& d, const std::set<std::string>& included_kinds,
                            const std::set<std::string>& excluded_packages) {
  Dataset out;
  out.ecosystem = d.ecosystem;
  out.cutoff = d.cutoff;
  out.filter_report = d.filter_report;
  auto& report = out.filter_report;
  if (report.input_dependency_rows == 0) report.input_dependency_rows = d.dependencies.size();

  auto excluded = [&](const std::string& name) { return excluded_packages.count(name) != 0; };

  std::unordered_set<std::string_view> known;
  for (const auto& p : d.packages) {
    if (excluded(p.name)) continue;
    out.packages.push_back(p);
  }
  for (const auto& p : out.packages) known.insert(p.name);

  for (const auto& r : d.releases) {
    if (excluded(r.package)) {
      ++report.excluded_releases;
      continue;
    }
    out.releases.push_back(r);
  }

  std::unordered_set<std::string> seen;
  for (const auto& dep : d.dependencies) {
    if (excluded(dep.source_package) || excluded(dep.target_package)) {
      ++report.excluded_dependencies;
      continue;
    }
    if (!included_kinds.count(dep.kind)) {
      ++report.kind_dropped;
      continue;
    }
    std::string key = release_key(dep.source_package, dep.source_version);
    key.push_back('\0');
    key += dep.target_package;
    key.push_back('\0');
    key += dep.kind;
    if (!seen.insert(std::move(key)).second) {
      ++report.duplicate_dependencies;
      continue;
    }
    if (!known.count(dep.target_package)) {
      ++report.unresolved_dropped;
      continue;
    }
    out.dependencies.push_back(dep);
  }
  return out;
}

ValidationReport validate_dataset(const Dataset& d, const ValidationOptions& options) {
  ValidationReport report;

  std::unordered_set<std::string> release_keys;
  std::map<std::string, std::vector<const ReleaseRecord*>> by_package;
  for (const auto& r : d.releases) {
    if (!release_keys.insert(release_key(r.package, r.version)).second) {
      report.duplicate_releases.push_back(r);
    }
    if (r.timestamp > d.cutoff) report.releases_after_cutoff.push_back(r);
    by_package[r.package].push_back(&r);
  }
  for (const auto& dep : d.dependencies) {
    if (!release_keys.count(release_key(dep.source_package, dep.source_version))) {
      report.orphan_dependencies.push_back(dep);
    }
  }

  for (auto& [name, list] : by_package) {
    std::stable_sort(list.begin(), list.end(), [](const ReleaseRecord* a, const ReleaseRecord* b) {
      return a->timestamp < b->timestamp;
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const auto* prev = list[i - 1];
      const auto* cur = list[i];
      if (cur->timestamp == prev->timestamp || compare_versions(prev->version, cur->version) >= 0) {
        report.ordering_flags.push_back(
            {name, prev->version, cur->version, prev->timestamp, cur->timestamp});
      }
    }
  }

  if (!d.releases.empty()) {
    std::map<Month, std::size_t> per_month;
    for (const auto& r : d.releases) ++per_month[month_of(r.timestamp)];
    auto months = month_range(per_month.begin()->first, per_month.rbegin()->first);
    std::vector<std::size_t> counts;
    counts.reserve(months.size());
    for (auto m : months) {
      auto it = per_month.find(m);
      counts.push_back(it == per_month.end() ? 0 : it->second);
    }
    const auto window = static_cast<std::size_t>(std::max(1, options.trailing_months));
    for (std::size_t i = 1; i < counts.size(); ++i) {
      std::size_t lo = i >= window ? i - window : 0;
      std::vector<double> trailing(counts.begin() + static_cast<std::ptrdiff_t>(lo),
                                   counts.begin() + static_cast<std::ptrdiff_t>(i));
      std::sort(trailing.begin(), trailing.end());
      auto n = trailing.size();
      double median = n % 2 ? trailing[n / 2] : 0.5 * (trailing[n / 2 - 1] + trailing[n / 2]);
      if (static_cast<double>(counts[i]) > options.burst_factor * std::max(1.0, median)) {
        report.burst_warnings.push_back({months[i], counts[i], median});
      }
    }
  }
  return report;
}

}  // namespace ecodeps
