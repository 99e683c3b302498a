#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ecodeps/evolution.hpp"
#include "ecodeps/fixtures.hpp"
#include "ecodeps/graphops.hpp"
#include "ecodeps/indices.hpp"
#include "ecodeps/ingest.hpp"
#include "ecodeps/snapshot.hpp"
#include "ecodeps/stats.hpp"

namespace py = pybind11;
using namespace ecodeps;

namespace {

Timestamp instant(const std::string& text) { return parse_date_arg(text); }

Month month(const std::string& text) { return parse_month(text); }

py::list points(const TimeSeries& s) {
  py::list out;
  for (const auto& [m, v] : s.points) out.append(py::make_tuple(format_month(m), v));
  return out;
}

SurvivalSample sample_of(const std::vector<std::pair<double, bool>>& obs, std::string label) {
  SurvivalSample s{std::move(label), {}};
  for (auto [d, c] : obs) s.observations.push_back({d, c});
  return s;
}

py::dict index_dict(const IndexReport& r) {
  py::dict d;
  d["ecosystem"] = r.ecosystem;
  d["at"] = format_timestamp(r.at);
  d["index"] = to_string(r.index);
  d["value"] = r.value;
  d["parameter"] = r.parameter ? py::cast(*r.parameter) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Temporal package dependency network analytics";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<FilterReport>(m, "FilterReport")
      .def_readonly("kind_dropped", &FilterReport::kind_dropped)
      .def_readonly("excluded_releases", &FilterReport::excluded_releases)
      .def_readonly("excluded_dependencies", &FilterReport::excluded_dependencies)
      .def_readonly("duplicate_dependencies", &FilterReport::duplicate_dependencies)
      .def_readonly("unresolved_dropped", &FilterReport::unresolved_dropped)
      .def_property_readonly("unresolved_fraction", &FilterReport::unresolved_fraction);

  py::class_<Dataset, std::shared_ptr<Dataset>>(m, "Dataset")
      .def_readonly("ecosystem", &Dataset::ecosystem)
      .def_property_readonly("cutoff", [](const Dataset& d) { return format_timestamp(d.cutoff); })
      .def_property_readonly("package_count", [](const Dataset& d) { return d.packages.size(); })
      .def_property_readonly("release_count", [](const Dataset& d) { return d.releases.size(); })
      .def_property_readonly("dependency_count", [](const Dataset& d) { return d.dependencies.size(); })
      .def_readonly("filter_report", &Dataset::filter_report)
      .def("releases", [](const Dataset& d) {
        py::list out;
        for (const auto& r : d.releases) out.append(py::make_tuple(r.package, r.version, format_timestamp(r.timestamp)));
        return out;
      })
      .def("dependencies", [](const Dataset& d) {
        py::list out;
        for (const auto& r : d.dependencies) {
          out.append(py::make_tuple(r.source_package, r.source_version, r.target_package, r.kind));
        }
        return out;
      });

  m.def(
      "load",
      [](const std::filesystem::path& dir, std::optional<std::string> cutoff, std::optional<std::string> ecosystem) {
        LoadOptions o;
        if (cutoff) o.cutoff = instant(*cutoff);
        o.ecosystem = ecosystem;
        return load_dataset_dir(dir, o);
      },
      py::arg("path"), py::arg("cutoff") = py::none(), py::arg("ecosystem") = py::none(),
      "Parse a dataset directory (packages.csv, releases.csv, dependencies.csv).");
  m.def(
      "filter",
      [](const Dataset& d, std::optional<std::set<std::string>> kinds, std::set<std::string> excluded) {
        return filter_dependencies(d, kinds ? *kinds : default_included_kinds(), excluded);
      },
      py::arg("dataset"), py::arg("kinds") = py::none(), py::arg("exclude") = std::set<std::string>{});
  m.def("tiny", &tiny_dataset, "The five-package reference dataset.");
  m.def(
      "generate",
      [](std::uint64_t packages, int months, std::uint64_t seed, double bias, double mean_deps,
         double update_rate, const std::string& start, const std::string& ecosystem) {
        GeneratorConfig c;
        c.n_packages = packages;
        c.months = months;
        c.seed = seed;
        c.attachment_bias = bias;
        c.mean_deps = mean_deps;
        c.update_rate = update_rate;
        c.start = month(start);
        c.ecosystem = ecosystem;
        return generate(c);
      },
      py::arg("packages") = 1000, py::arg("months") = 24, py::arg("seed") = 42, py::arg("bias") = 1.0,
      py::arg("mean_deps") = 2.0, py::arg("update_rate") = 0.2, py::arg("start") = "2010-01",
      py::arg("ecosystem") = "synthetic");
  m.def("write", [](const Dataset& d, const std::filesystem::path& dir) { return write_dataset(d, dir); });

  py::class_<SnapshotGraph>(m, "Snapshot")
      .def_property_readonly("at", [](const SnapshotGraph& g) { return format_timestamp(g.at()); })
      .def_property_readonly("node_count", &SnapshotGraph::node_count)
      .def_property_readonly("edge_count", &SnapshotGraph::edge_count)
      .def("nodes", &SnapshotGraph::node_names)
      .def("edges", &SnapshotGraph::edge_list)
      .def("direct_dependencies",
           [](const SnapshotGraph& g, const std::string& p) { return direct_dependencies(g, std::string_view(p)); })
      .def("transitive_dependencies",
           [](const SnapshotGraph& g, const std::string& p) { return transitive_dependencies(g, p); })
      .def("transitive_dependents",
           [](const SnapshotGraph& g, const std::string& p) { return transitive_dependents(g, p); })
      .def("depth", [](const SnapshotGraph& g, const std::string& p) { return dependency_depth(g, std::string_view(p)); })
      .def("top_level", &top_level_packages)
      .def("connected", &connected_packages)
      .def("components", [](const SnapshotGraph& g) {
        std::vector<std::vector<std::string>> out;
        for (const auto& c : weakly_connected_components(g).components) out.push_back(names_of(g, c));
        return out;
      });

  m.def(
      "snapshot", [](const Dataset& d, const std::string& at) { return build_snapshot(d, instant(at)); },
      py::arg("dataset"), py::arg("at"));
  m.def(
      "latest_releases",
      [](const Dataset& d, const std::string& at) {
        std::map<std::string, std::string> out;
        for (const auto& [name, r] : latest_releases_at(d, instant(at))) out[name] = r.version;
        return out;
      },
      py::arg("dataset"), py::arg("at"));

  m.def("changeability_index",
        [](const Dataset& d, const std::string& at, int window_days) {
          return index_dict(changeability_index(d, instant(at), window_days));
        },
        py::arg("dataset"), py::arg("at"), py::arg("window_days") = 30);
  m.def("reusability_index",
        [](const SnapshotGraph& g, bool transitive) {
          return index_dict(reusability_index(g, transitive ? ReuseCount::transitive : ReuseCount::direct));
        },
        py::arg("snapshot"), py::arg("transitive") = false);
  m.def("p_impact_index", [](const SnapshotGraph& g, double p) { return index_dict(p_impact_index(g, p)); },
        py::arg("snapshot"), py::arg("p") = 5.0);
  m.def("h_index", [](std::vector<std::uint64_t> v) { return h_index(v); });

  m.def("growth_series", [](const Dataset& d, const std::string& from, const std::string& to) {
    auto g = growth_series(d, month(from), month(to));
    py::dict out;
    out["packages"] = points(g.packages);
    out["dependencies"] = points(g.dependencies);
    return out;
  });
  m.def("dependency_ratio_series", [](const Dataset& d, const std::string& from, const std::string& to) {
    return points(dependency_ratio_series(d, month(from), month(to)));
  });
  m.def("transitive_ratio_series", [](const Dataset& d, const std::string& from, const std::string& to) {
    return points(transitive_ratio_series(d, month(from), month(to)));
  });
  m.def(
      "update_counts_series",
      [](const Dataset& d, const std::string& from, const std::string& to, bool include_first) {
        return points(update_counts_series(d, month(from), month(to), include_first));
      },
      py::arg("dataset"), py::arg("from_month"), py::arg("to_month"), py::arg("include_first_releases") = false);
  m.def(
      "index_series",
      [](const Dataset& d, const std::string& from, const std::string& to, const std::string& which,
         std::optional<double> parameter) {
        return points(index_series(d, month(from), month(to), parse_index_kind(which), parameter));
      },
      py::arg("dataset"), py::arg("from_month"), py::arg("to_month"), py::arg("index"),
      py::arg("parameter") = py::none());
  m.def("update_distribution", [](const Dataset& d, const std::string& at) {
    auto b = update_distribution(d, instant(at));
    return py::dict(py::arg("never") = b.never, py::arg("low") = b.low, py::arg("high") = b.high,
                    py::arg("total") = b.total);
  });
  m.def(
      "survival_dataset",
      [](const Dataset& d, bool split) {
        py::dict out;
        for (const auto& s : survival_dataset(d, split)) {
          py::list obs;
          for (const auto& o : s.observations) obs.append(py::make_tuple(o.duration, o.censored));
          out[py::str(s.label)] = obs;
        }
        return out;
      },
      py::arg("dataset"), py::arg("split_required") = false);

  m.def("gini", [](std::vector<double> v) { return gini(v); });
  m.def("normalized_gini", [](std::vector<double> v) { return normalized_gini(v); });
  m.def(
      "lorenz", [](std::vector<double> v, bool inverted) { return lorenz_points(v, inverted).points; },
      py::arg("values"), py::arg("inverted") = false);
  m.def("kaplan_meier", [](const std::vector<std::pair<double, bool>>& obs) {
    std::vector<std::pair<double, double>> out;
    for (const auto& s : kaplan_meier(sample_of(obs, "")).steps) out.emplace_back(s.time, s.survival);
    return out;
  }, "Observations are (duration_days, censored) pairs; returns (time, survival) steps.");
  m.def(
      "log_rank",
      [](const std::vector<std::pair<double, bool>>& a, const std::vector<std::pair<double, bool>>& b,
         double alpha) {
        auto r = log_rank(sample_of(a, "a"), sample_of(b, "b"), alpha);
        return py::make_tuple(r.statistic, r.significant);
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = 0.01);
  m.def("fit_linear", [](std::vector<double> x, std::vector<double> y) {
    auto f = fit_linear(x, y);
    return py::make_tuple(f.a, f.b, f.r_squared);
  });
  m.def("fit_exponential", [](std::vector<double> x, std::vector<double> y) {
    auto f = fit_exponential(x, y);
    return py::make_tuple(f.a, f.b, f.r_squared);
  });

  m.attr("__version__") = "0.1.0";
}
