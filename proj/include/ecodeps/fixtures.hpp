#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ecodeps/ingest.hpp"
#include "ecodeps/time.hpp"

namespace ecodeps {

/// Parameters of the synthetic ecosystem generator.
///
/// Generator "ecodeps-fixture-v1": std::mt19937_64 seeded with `seed`;
/// uniforms are (draw >> 11) * 2^-53; Poisson draws use Knuth's product
/// method for means <= 30 and a rounded normal approximation above. Packages
/// arrive in index order at sorted uniform instants spread evenly over the
/// months; each first release draws Poisson(mean_deps) distinct targets among
/// earlier packages with weight (in_degree + 1)^attachment_bias; every
/// package then receives Poisson(update_rate) updates per month, each copying
/// the previous release's dependencies. The draw order is fixed, so a config
/// always yields the same dataset.
struct GeneratorConfig {
  std::uint64_t n_packages = 1000;
  int months = 24;
  std::uint64_t seed = 42;
  double attachment_bias = 1.0;
  double mean_deps = 2.0;
  double update_rate = 0.2;
  Month start = std::chrono::year{2010} / std::chrono::January;
  std::string ecosystem = "synthetic";

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

inline constexpr const char* kGeneratorVersion = "ecodeps-fixture-v1";

Dataset generate(const GeneratorConfig& cfg);

/// The five-package reference dataset used throughout the tests and docs.
Dataset tiny_dataset();

/// Writes packages.csv, releases.csv, dependencies.csv and manifest.json
/// (`{rows, seed, config, sha256, cutoff, ecosystem}`; seed/config are null
/// unless a generator config is given). Returns the content hash.
std::string write_dataset(const Dataset& d, const std::filesystem::path& dir,
                          const std::optional<GeneratorConfig>& config = std::nullopt);

/// Hex SHA-256 over the three CSV files in schema order.
std::string dataset_hash(const std::filesystem::path& dir);

struct LoadOptions {
  std::optional<Timestamp> cutoff;         // else manifest.json, else latest release
  std::optional<std::string> ecosystem;    // else manifest.json, else directory name
};

/// Parses a dataset directory in the ingest layout.
Dataset load_dataset_dir(const std::filesystem::path& dir, const LoadOptions& options = {});

}  // namespace ecodeps
