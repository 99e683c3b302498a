#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecodeps/time.hpp"

namespace ecodeps {

struct PackageRecord {
  std::string name;
  std::string ecosystem;

  friend bool operator==(const PackageRecord&, const PackageRecord&) = default;
};

struct ReleaseRecord {
  std::string package;
  std::string version;
  Timestamp timestamp;

  friend bool operator==(const ReleaseRecord&, const ReleaseRecord&) = default;
};

struct DependencyRecord {
  std::string source_package;
  std::string source_version;
  std::string target_package;
  std::string constraint;  // carried verbatim, never interpreted
  std::string kind;        // lowercased, trimmed

  friend bool operator==(const DependencyRecord&, const DependencyRecord&) = default;
};

/// Rows removed by filter_dependencies, accumulated across calls.
struct FilterReport {
  std::size_t kind_dropped = 0;              // kind not in the include-list
  std::size_t excluded_releases = 0;         // releases of excluded packages
  std::size_t excluded_dependencies = 0;     // rows from or to excluded packages
  std::size_t duplicate_dependencies = 0;    // same (source release, target, kind)
  std::size_t unresolved_dropped = 0;        // target has no PackageRecord
  std::size_t input_dependency_rows = 0;     // rows seen by the first filter pass

  /// Unresolved rows as a fraction of the pre-filter dependency rows.
  double unresolved_fraction() const {
    return input_dependency_rows == 0
               ? 0.0
               : static_cast<double>(unresolved_dropped) / static_cast<double>(input_dependency_rows);
  }

  friend bool operator==(const FilterReport&, const FilterReport&) = default;
};

/// Package, release and dependency metadata for one ecosystem. Treated as an
/// immutable value once constructed; all analysis entry points take it by
/// const reference.
struct Dataset {
  std::string ecosystem;
  std::vector<PackageRecord> packages;
  std::vector<ReleaseRecord> releases;
  std::vector<DependencyRecord> dependencies;
  Timestamp cutoff{};
  FilterReport filter_report;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Malformed input. `what()` names the file, line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, std::string column, const std::string& detail);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string column_;
};

struct ParseOptions {
  std::string ecosystem = "unknown";
};

/// Loads the three CSV files. Kinds are lowercased and trimmed; nothing is
/// filtered. Rows are validated for shape, timestamps, duplicate releases,
/// releases of undeclared packages and dependency rows whose source release
/// does not exist. The three files are parsed concurrently.
Dataset parse_dataset(const std::filesystem::path& packages_path,
                      const std::filesystem::path& releases_path,
                      const std::filesystem::path& dependencies_path, Timestamp cutoff,
                      const ParseOptions& options = {});

/// Lowercase and trim a dependency-kind tag.
std::string normalize_kind(std::string_view kind);

/// Install/execute-time kinds: runtime, imports, depends, normal.
std::set<std::string> default_included_kinds();

/// One package name per line; blank lines and lines starting with '#' ignored.
std::set<std::string> read_exclusion_list(const std::filesystem::path& path);

/// Applies, in order: removal of excluded packages (their records, releases,
/// and every dependency row from or to them), the kind include-list,
/// first-occurrence deduplication on (source release, target, kind), and
/// removal of rows whose target has no PackageRecord. Idempotent.
Dataset filter_dependencies(const Dataset& d, const std::set<std::string>& included_kinds,
                            const std::set<std::string>& excluded_packages);

struct BurstWarning {
  Month month;
  std::size_t releases;
  double trailing_median;
};

struct OrderingFlag {
  std::string package;
  std::string earlier_version;  // released first
  std::string later_version;    // released afterwards, but not a greater version
  Timestamp earlier_timestamp;
  Timestamp later_timestamp;
};

struct ValidationReport {
  std::vector<ReleaseRecord> duplicate_releases;
  std::vector<OrderingFlag> ordering_flags;
  std::vector<BurstWarning> burst_warnings;
  std::vector<DependencyRecord> orphan_dependencies;  // source release missing
  std::vector<ReleaseRecord> releases_after_cutoff;

  bool empty() const {
    return duplicate_releases.empty() && ordering_flags.empty() && burst_warnings.empty() &&
           orphan_dependencies.empty() && releases_after_cutoff.empty();
  }
  /// Structural problems, as opposed to burst/ordering warnings.
  bool has_errors() const {
    return !duplicate_releases.empty() || !orphan_dependencies.empty() ||
           !releases_after_cutoff.empty();
  }
};

struct ValidationOptions {
  /// A month is a burst when its release count exceeds
  /// burst_factor * max(1, median of the up-to-12 preceding months).
  double burst_factor = 10.0;
  int trailing_months = 12;
};

/// Report-only consistency checks; never modifies the dataset.
ValidationReport validate_dataset(const Dataset& d, const ValidationOptions& options = {});

}  // namespace ecodeps
