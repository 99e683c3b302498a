#include "ecodeps/fixtures.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "csv.hpp"

namespace ecodeps {

namespace fs = std::filesystem;
using json = nlohmann::json;

void GeneratorConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("generator config: " + field + " " + why);
  };
  if (n_packages == 0) fail("n_packages", "must be positive");
  if (n_packages >= UINT32_MAX) fail("n_packages", "is too large");
  if (months <= 0) fail("months", "must be positive");
  if (!(attachment_bias >= 0.0) || !std::isfinite(attachment_bias)) fail("attachment_bias", "must be >= 0");
  if (!(mean_deps >= 0.0) || !std::isfinite(mean_deps)) fail("mean_deps", "must be >= 0");
  if (!(update_rate >= 0.0) || !std::isfinite(update_rate)) fail("update_rate", "must be >= 0");
  if (!start.ok()) fail("start", "is not a valid month");
}

namespace {

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t bound) {
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)),
                                   bound - 1);
  }

  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean <= 30.0) {
      const double limit = std::exp(-mean);
      std::uint64_t k = 0;
      double product = uniform();
      while (product > limit) {
        ++k;
        product *= uniform();
      }
      return k;
    }
    // Box-Muller normal approximation
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return static_cast<std::uint64_t>(std::max(0.0, std::round(mean + std::sqrt(mean) * z)));
  }

 private:
  std::mt19937_64 engine_;
};

// Fenwick tree over non-negative weights with prefix-sum descent.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0), weight_(n, 0.0) {}

  void set(std::size_t i, double w) {
    const double delta = w - weight_[i];
    weight_[i] = w;
    for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
  }
  double weight(std::size_t i) const { return weight_[i]; }

  double prefix(std::size_t count) const {
    double s = 0.0;
    for (std::size_t j = count; j > 0; j -= j & (~j + 1)) s += tree_[j];
    return s;
  }

  // Smallest index i < limit with prefix(i + 1) > target.
  std::size_t find(double target, std::size_t limit) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return std::min(pos, limit - 1);
  }

 private:
  std::vector<double> tree_;
  std::vector<double> weight_;
};

std::string package_name(std::uint64_t i, std::uint64_t n) {
  const auto digits = std::to_string(i);
  const auto width = std::to_string(n - 1).size();
  return "p" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace

Dataset generate(const GeneratorConfig& cfg) {
  cfg.validate();
  Random rng(cfg.seed);
  const std::uint64_t n = cfg.n_packages;
  const Timestamp end = month_start(cfg.start + std::chrono::months{cfg.months});

  auto month_bounds = [&](int m) {
    return std::pair{month_start(cfg.start + std::chrono::months{m}),
                     month_start(cfg.start + std::chrono::months{m + 1})};
  };

  // Arrival instants: package i is released in month floor(i * months / n).
  std::vector<Timestamp> arrival(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto m = static_cast<int>(i * static_cast<std::uint64_t>(cfg.months) / n);
    auto [lo, hi] = month_bounds(m);
    // leave the last second of the month free so updates always fit after it
    const auto span = static_cast<std::uint64_t>((hi - lo).count()) - 1;
    arrival[i] = lo + std::chrono::seconds{static_cast<long long>(rng.below(span))};
  }
  std::sort(arrival.begin(), arrival.end());

  // First-release dependencies by preferential attachment.
  std::vector<std::vector<std::uint32_t>> deps(n);
  std::vector<std::uint32_t> in_degree(n, 0);
  WeightTree tree(n);
  auto attach_weight = [&](std::uint32_t v) {
    return std::pow(static_cast<double>(in_degree[v]) + 1.0, cfg.attachment_bias);
  };
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto wanted = std::min<std::uint64_t>(rng.poisson(cfg.mean_deps), i);
    auto& chosen = deps[i];
    for (std::uint64_t k = 0; k < wanted; ++k) {
      const double total = tree.prefix(i);
      std::size_t pick = tree.find(rng.uniform() * total, i);
      if (tree.weight(pick) <= 0.0) {
        // rounding landed on a removed entry: take the nearest live one
        std::size_t up = pick;
        while (up < i && tree.weight(up) <= 0.0) ++up;
        if (up == i) {
          up = pick;
          while (up > 0 && tree.weight(up) <= 0.0) --up;
        }
        pick = up;
      }
      chosen.push_back(static_cast<std::uint32_t>(pick));
      tree.set(pick, 0.0);
    }
    for (auto t : chosen) {
      ++in_degree[t];
      tree.set(t, attach_weight(t));
    }
    std::sort(chosen.begin(), chosen.end());
    tree.set(i, attach_weight(static_cast<std::uint32_t>(i)));
  }

  // Updates, drawn month by month in package order.
  std::vector<std::vector<Timestamp>> times(n);
  for (std::uint64_t i = 0; i < n; ++i) times[i].push_back(arrival[i]);
  for (int m = 0; m < cfg.months; ++m) {
    auto [lo, hi] = month_bounds(m);
    for (std::uint64_t i = 0; i < n && arrival[i] < hi; ++i) {
      const auto count = rng.poisson(cfg.update_rate);
      const Timestamp from = std::max(lo, arrival[i] + std::chrono::seconds{1});
      const auto span = static_cast<std::uint64_t>((hi - from).count());
      for (std::uint64_t k = 0; k < count; ++k) {
        times[i].push_back(from + std::chrono::seconds{static_cast<long long>(rng.below(span))});
      }
    }
  }

  Dataset d;
  d.ecosystem = cfg.ecosystem;
  d.cutoff = end;
  d.packages.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto name = package_name(i, n);
    d.packages.push_back({name, cfg.ecosystem});
    auto& ts = times[i];
    std::sort(ts.begin(), ts.end());
    // strictly increasing timestamps; bumped instants stay before the cutoff
    for (std::size_t k = 1; k < ts.size(); ++k) {
      if (ts[k] <= ts[k - 1]) ts[k] = ts[k - 1] + std::chrono::seconds{1};
    }
    while (!ts.empty() && ts.back() >= end) ts.pop_back();
    for (std::size_t k = 0; k < ts.size(); ++k) {
      std::string version = "1." + std::to_string(k) + ".0";
      for (auto t : deps[i]) {
        d.dependencies.push_back({name, version, package_name(t, n), "*", "runtime"});
      }
      d.releases.push_back({name, std::move(version), ts[k]});
    }
  }
  return d;
}

Dataset tiny_dataset() {
  Dataset d;
  d.ecosystem = "tiny";
  d.cutoff = parse_timestamp("2020-04-01");
  for (const char* name : {"a", "b", "c", "d", "e"}) d.packages.push_back({name, "tiny"});
  const std::vector<std::tuple<const char*, const char*, const char*>> releases{
      {"e", "1.0.0", "2020-01-05"}, {"a", "1.0.0", "2020-01-10"}, {"b", "1.0.0", "2020-01-20"},
      {"c", "1.0.0", "2020-02-03"}, {"a", "1.1.0", "2020-02-15"}, {"c", "2.0.0", "2020-03-05"},
      {"d", "1.0.0", "2020-03-10"}};
  for (const auto& [p, v, t] : releases) d.releases.push_back({p, v, parse_timestamp(t)});
  const std::vector<std::tuple<const char*, const char*, const char*>> deps{
      {"a", "1.1.0", "b"}, {"c", "1.0.0", "a"}, {"c", "2.0.0", "a"}, {"c", "2.0.0", "b"}, {"d", "1.0.0", "c"}};
  for (const auto& [p, v, t] : deps) d.dependencies.push_back({p, v, t, "*", "runtime"});
  return d;
}

std::string dataset_hash(const fs::path& dir) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 unavailable");
  }
  std::vector<char> buffer(1 << 16);
  for (const char* file : {"packages.csv", "releases.csv", "dependencies.csv"}) {
    std::ifstream in(dir / file, std::ios::binary);
    if (!in) {
      EVP_MD_CTX_free(ctx);
      throw std::runtime_error("cannot read " + (dir / file).string());
    }
    while (in) {
      in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      EVP_DigestUpdate(ctx, buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

namespace {

json config_json(const GeneratorConfig& cfg) {
  return {{"generator", kGeneratorVersion},
          {"n_packages", cfg.n_packages},
          {"months", cfg.months},
          {"seed", cfg.seed},
          {"attachment_bias", cfg.attachment_bias},
          {"mean_deps", cfg.mean_deps},
          {"update_rate", cfg.update_rate},
          {"start", format_month(cfg.start)},
          {"ecosystem", cfg.ecosystem}};
}

}  // namespace

std::string write_dataset(const Dataset& d, const fs::path& dir, const std::optional<GeneratorConfig>& config) {
  fs::create_directories(dir);
  auto open = [&](const char* file) {
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
    return out;
  };
  {
    auto out = open("packages.csv");
    out << "name\n";
    for (const auto& p : d.packages) csv::write_row(out, {p.name});
    if (!out) throw std::runtime_error("write failed: packages.csv");
  }
  {
    auto out = open("releases.csv");
    out << "package,version,timestamp\n";
    for (const auto& r : d.releases) {
      csv::write_row(out, {r.package, r.version, format_timestamp(r.timestamp)});
    }
    if (!out) throw std::runtime_error("write failed: releases.csv");
  }
  {
    auto out = open("dependencies.csv");
    out << "source_package,source_version,target_package,constraint,kind\n";
    for (const auto& dep : d.dependencies) {
      csv::write_row(out, {dep.source_package, dep.source_version, dep.target_package, dep.constraint, dep.kind});
    }
    if (!out) throw std::runtime_error("write failed: dependencies.csv");
  }
  const auto hash = dataset_hash(dir);
  json manifest = {
      {"rows", {{"packages", d.packages.size()}, {"releases", d.releases.size()}, {"dependencies", d.dependencies.size()}}},
      {"seed", config ? json(config->seed) : json(nullptr)},
      {"config", config ? config_json(*config) : json(nullptr)},
      {"sha256", hash},
      {"cutoff", format_timestamp(d.cutoff)},
      {"ecosystem", d.ecosystem}};
  auto out = open("manifest.json");
  out << manifest.dump(2) << '\n';
  return hash;
}

Dataset load_dataset_dir(const fs::path& dir, const LoadOptions& options) {
  std::optional<Timestamp> cutoff = options.cutoff;
  std::optional<std::string> ecosystem = options.ecosystem;
  if (std::ifstream in(dir / "manifest.json"); in) {
    json manifest;
    try {
      manifest = json::parse(in);
    } catch (const json::exception& e) {
      throw ParseError((dir / "manifest.json").string(), 0, "", e.what());
    }
    if (!cutoff && manifest.contains("cutoff") && manifest["cutoff"].is_string()) {
      cutoff = parse_timestamp(manifest["cutoff"].get<std::string>());
    }
    if (!ecosystem && manifest.contains("ecosystem") && manifest["ecosystem"].is_string()) {
      ecosystem = manifest["ecosystem"].get<std::string>();
    }
  }
  ParseOptions parse_options;
  auto normalized = fs::absolute(dir).lexically_normal();
  if (normalized.filename().empty()) normalized = normalized.parent_path();
  parse_options.ecosystem = ecosystem.value_or(normalized.filename().string());
  if (parse_options.ecosystem.empty()) parse_options.ecosystem = "unknown";
  auto d = parse_dataset(dir / "packages.csv", dir / "releases.csv", dir / "dependencies.csv",
                         cutoff.value_or(Timestamp::max()), parse_options);
  if (!cutoff) {
    Timestamp latest{};
    for (const auto& r : d.releases) latest = std::max(latest, r.timestamp);
    d.cutoff = latest;
  }
  return d;
}

}  // namespace ecodeps
