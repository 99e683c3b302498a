#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "ecodeps/cli.hpp"
#include "test_support.hpp"

using namespace ecodeps;
using namespace testing_support;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> with_tiny(std::vector<std::string> args) {
  args.push_back("--data");
  args.push_back(tiny_dir().string());
  return args;
}

}  // namespace

TEST(Cli, ImpactIndexOnTiny) {
  auto r = cli(with_tiny({"index", "impact", "--p", "5", "--at", "2020-04-01"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "ecosystem,at,index_name,parameter,value\ntiny,2020-04-01T00:00:00Z,p_impact,5,3\n");
}

TEST(Cli, OtherIndices) {
  auto c = cli(with_tiny({"index", "changeability", "--at", "2020-03-31", "--window-days", "30"}));
  EXPECT_EQ(c.out, "ecosystem,at,index_name,parameter,value\ntiny,2020-03-31T00:00:00Z,changeability,30,1\n");
  auto u = cli(with_tiny({"index", "reusability", "--at", "2020-04"}));
  EXPECT_EQ(u.out, "ecosystem,at,index_name,parameter,value\ntiny,2020-04-01T00:00:00Z,reusability,,1\n");
}

TEST(Cli, GrowthSeriesRange) {
  auto r = cli(with_tiny({"series", "growth", "--from", "2020-02", "--to", "2020-04"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "month,packages,dependencies\n2020-02,3,0\n2020-03,4,2\n2020-04,5,4\n");
}

TEST(Cli, SnapshotBeforeHistoryIsEmpty) {
  auto r = cli(with_tiny({"snapshot", "--at", "1900-01-01"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "at,packages,dependencies,dropped_dependencies\n1900-01-01T00:00:00Z,0,0,0\n");
}

TEST(Cli, ExitCodes) {
  auto unknown = cli({"frobnicate"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_TRUE(unknown.out.empty());
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli(with_tiny({"snapshot", "--at", "yesterday"})).code, kExitUsage);
  EXPECT_EQ(cli(with_tiny({"survival", "--logrank"})).code, kExitUsage);
  EXPECT_EQ(cli(with_tiny({"survival", "--split-required", "--logrank", "--alpha", "0.1"})).code, kExitUsage);
  EXPECT_EQ(cli(with_tiny({"snapshot", "--at", "2021-01-01"})).code, kExitDataError);
  EXPECT_EQ(cli({"snapshot", "--at", "2020-01-01", "--data", "/nonexistent/dir"}).code, kExitDataError);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  auto version = cli({"--version"});
  EXPECT_EQ(version.code, kExitOk);
  EXPECT_NE(version.out.find(kToolVersion), std::string::npos);
}

TEST(Cli, HelpMentionsJobsEnvironment) {
  EXPECT_NE(cli({"--help"}).out.find("ECODEPS_JOBS"), std::string::npos);
}

TEST(Cli, SurvivalOutputs) {
  auto km = cli(with_tiny({"survival"}));
  ASSERT_EQ(km.code, 0) << km.err;
  EXPECT_EQ(km.out.substr(0, 18), "time,survival\n0,1\n");
  EXPECT_NE(km.out.find("31,0.8\n"), std::string::npos);
  auto split = cli(with_tiny({"survival", "--split-required", "--km"}));
  EXPECT_EQ(split.out.substr(0, 20), "group,time,survival\n");
  auto lr = cli(with_tiny({"survival", "--split-required", "--logrank", "--alpha", "0.05"}));
  ASSERT_EQ(lr.code, 0) << lr.err;
  EXPECT_EQ(lr.out.substr(0, 37), "statistic,alpha,critical,significant\n");
}

TEST(Cli, DistributionsAndInequality) {
  auto bins = cli(with_tiny({"distribution", "updates"}));
  EXPECT_EQ(bins.out, "bin,count,proportion\nnever,3,0.6\n1-4,2,0.4\n5+,0,0\n");
  auto depth = cli(with_tiny({"distribution", "depth", "--at", "2020-04-01"}));
  EXPECT_EQ(depth.out, "bin,count,proportion\n2,1,1\n");
  auto deps = cli(with_tiny({"distribution", "deps"}));
  EXPECT_NE(deps.out.find("d,1,3,0,0,2\n"), std::string::npos);
  auto lorenz = cli(with_tiny({"inequality", "updates", "--window", "2020-01-01", "2020-04-01"}));
  EXPECT_EQ(lorenz.out, "cum_pop,cum_val\n0,0\n0.5,0.5\n1,1\n");
  auto none = cli(with_tiny({"inequality", "updates", "--window", "2019-01-01", "2019-04-01"}));
  EXPECT_EQ(none.code, kExitDataError);
}

TEST(Cli, JsonOutputAndOutDir) {
  TempDir dir;
  auto r = cli(with_tiny({"series", "ratio", "--format", "json", "--out-dir", dir.path().string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  auto parsed = nlohmann::json::parse(read_file(dir / "dependency_ratio__tiny.json"));
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[2]["month"], "2020-04");
  EXPECT_EQ(parsed[2]["value"], 0.8);
}

TEST(Cli, ManifestRecordsProvenance) {
  TempDir dir;
  auto r = cli(with_tiny({"series", "updates", "--manifest", (dir / "run.json").string(), "--out",
                          (dir / "out.csv").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  auto m = nlohmann::json::parse(read_file(dir / "run.json"));
  EXPECT_EQ(m["dataset_sha256"], dataset_hash(tiny_dir()));
  EXPECT_EQ(m["version"], kToolVersion);
  EXPECT_EQ(m["arguments"][0], "series");
  EXPECT_EQ(read_file(dir / "out.csv"), "month,value\n2020-01,0\n2020-02,1\n2020-03,1\n2020-04,0\n");
}

TEST(Cli, IndexSeriesSingleAndAll) {
  auto one = cli(with_tiny({"series", "index", "--index", "impact", "--p", "50", "--from", "2020-04"}));
  EXPECT_EQ(one.out, "month,index_name,parameter,value\n2020-04,p_impact,50,1\n");
  auto all = cli(with_tiny({"series", "index", "--from", "2020-04", "--p", "50"}));
  EXPECT_EQ(all.out,
            "month,index_name,parameter,value\n2020-04,changeability,30,1\n2020-04,reusability,,1\n"
            "2020-04,p_impact,50,1\n");
}

TEST(Cli, DeterministicAcrossJobs) {
  TempDir dir;
  ASSERT_EQ(cli({"fixture", "generate", "--dest", dir.path().string(), "--packages", "1500", "--months", "12"}).code, 0);
  for (const std::string what : {"growth", "index", "transitive-ratio", "roles"}) {
    auto a = cli({"series", what, "--data", dir.path().string(), "--jobs", "1"});
    auto b = cli({"series", what, "--data", dir.path().string(), "--jobs", "4"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << what;
  }
}

TEST(Cli, FilteringOptions) {
  TempDir dir;
  fs::copy(tiny_dir(), dir.path(), fs::copy_options::recursive);
  std::ofstream(dir / "dependencies.csv", std::ios::app) << "d,1.0.0,zzz,*,runtime\nd,1.0.0,e,*,dev\n";
  write_file(dir / "exclude.txt", "e\n");
  auto v = cli({"validate", "--data", dir.path().string()});
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_NE(v.out.find("filter_kind_dropped,,,1\n"), std::string::npos);
  EXPECT_NE(v.out.find("filter_unresolved_dropped,,,1\n"), std::string::npos);
  auto kinds = cli({"snapshot", "--at", "2020-04-01", "--data", dir.path().string(), "--kinds", "runtime,dev"});
  EXPECT_NE(kinds.out.find(",5,5,0\n"), std::string::npos) << kinds.out;
  auto excluded = cli({"snapshot", "--at", "2020-04-01", "--data", dir.path().string(), "--exclude",
                       (dir / "exclude.txt").string()});
  EXPECT_NE(excluded.out.find(",4,4,0\n"), std::string::npos) << excluded.out;
}

TEST(Cli, FixtureTinyMatchesShippedCopy) {
  TempDir dir;
  auto r = cli({"fixture", "tiny", "--dest", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(dataset_hash(dir.path()), dataset_hash(tiny_dir()));
}
