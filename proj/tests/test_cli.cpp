#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using fraudcc::cli::run;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("fraudcc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// header-only logs with the given referral rows
fs::path logs_with(const std::string& name, const std::string& referral_rows) {
  const auto dir = scratch(name);
  put(dir / "referrals.csv", "recv_phone,recv_reg_date,sender_phone,sender_reg_date\n" + referral_rows);
  put(dir / "devices.csv", "phone_number,imei\n");
  put(dir / "orders.jsonl", "");
  return dir;
}

fs::path generated(const std::string& name, const std::string& seed) {
  const auto dir = scratch(name);
  EXPECT_EQ(run({"generate", "--seed", seed, "--normal-accounts", "1500", "--run-dir", dir.string()}), 0);
  return dir;
}

}  // namespace

TEST(Cli, GenerateIsDeterministic) {
  const auto a = generated("gen_a", "5");
  const auto b = generated("gen_b", "5");
  for (const char* f : {"orders.jsonl", "devices.csv", "referrals.csv", "events.jsonl", "ground_truth.jsonl"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "generate");
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_TRUE(manifest.contains("config"));
}

TEST(Cli, DetectIsDeterministicAndRerunnable) {
  const auto data = generated("det_data", "6");
  const auto r1 = scratch("det_r1");
  const auto r2 = scratch("det_r2");
  ASSERT_EQ(run({"detect", "--data", data.string(), "--run-dir", r1.string()}), 0);
  ASSERT_EQ(run({"detect", "--data", data.string(), "--run-dir", r2.string()}), 0);
  EXPECT_FALSE(slurp(r1 / "rules.jsonl").empty());
  EXPECT_EQ(slurp(r1 / "rules.jsonl"), slurp(r2 / "rules.jsonl"));
  EXPECT_EQ(slurp(r1 / "profiles.csv"), slurp(r2 / "profiles.csv"));

  const auto r3 = scratch("det_r3");
  ASSERT_EQ(run({"rerun", (r1 / "manifest.json").string(), "--run-dir", r3.string()}), 0);
  EXPECT_EQ(slurp(r1 / "rules.jsonl"), slurp(r3 / "rules.jsonl"));
  EXPECT_EQ(slurp(r1 / "profiles.csv"), slurp(r3 / "profiles.csv"));
}

TEST(Cli, ParallelDetectMatchesSerial) {
  const auto data = generated("par_data", "8");
  const auto s = scratch("par_s");
  const auto p = scratch("par_p");
  ASSERT_EQ(run({"detect", "--data", data.string(), "--run-dir", s.string()}), 0);
  ASSERT_EQ(run({"detect", "--data", data.string(), "--parallel", "--run-dir", p.string()}), 0);
  EXPECT_EQ(slurp(s / "rules.jsonl"), slurp(p / "rules.jsonl"));
  EXPECT_EQ(slurp(s / "profiles.csv"), slurp(p / "profiles.csv"));
}

TEST(Cli, EmptyLogsGiveEmptyReports) {
  const auto data = logs_with("empty", "");
  const auto out = scratch("empty_out");
  ASSERT_EQ(run({"detect", "--data", data.string(), "--run-dir", out.string()}), 0);
  std::istringstream rules(slurp(out / "rules.jsonl"));
  std::string line;
  int n = 0;
  while (std::getline(rules, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j["accounts"].empty()) << line;
    ++n;
  }
  EXPECT_EQ(n, 10);
  std::istringstream profiles(slurp(out / "profiles.csv"));
  std::getline(profiles, line);
  EXPECT_EQ(line, "label,size,depth,bonus_sent,non_self_order_ratio,shared_device_ratio,gini");
  EXPECT_FALSE(std::getline(profiles, line));
}

TEST(Cli, LongChainLandsInRuleA) {
  std::string rows;
  for (int i = 1; i <= 60; ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "c%02d,2020-11-20T00:00:00Z,c%02d,2020-11-20T00:00:00Z\n", i, i - 1);
    rows += buf;
  }
  const auto data = logs_with("chain", rows);
  const auto out = scratch("chain_out");
  ASSERT_EQ(run({"detect", "--data", data.string(), "--run-dir", out.string()}), 0);
  std::istringstream rules(slurp(out / "rules.jsonl"));
  std::string line;
  std::getline(rules, line);
  const auto a = nlohmann::json::parse(line);
  EXPECT_EQ(a["rule"], "a");
  EXPECT_EQ(a["accounts"].size(), 61u);
  std::istringstream profiles(slurp(out / "profiles.csv"));
  std::getline(profiles, line);
  std::getline(profiles, line);
  EXPECT_EQ(line.rfind("c00,61,60,", 0), 0u) << line;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"detect"}), 2);
  EXPECT_EQ(run({"detect", "--data", "x", "--bogus"}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  const auto out = scratch("usage");
  EXPECT_EQ(run({"sweep", "--windows", "100", "--effective-window-s", "5000", "--store-window-s", "3600",
                 "--run-dir", out.string()}),
            2);
}

TEST(Cli, ParseAndIoErrors) {
  const auto dir = scratch("parse");
  put(dir / "bad.json", "{ not json");
  EXPECT_EQ(run({"detect", "--data", dir.string(), "--config", (dir / "bad.json").string(), "--run-dir",
                 (dir / "out").string()}),
            3);
  EXPECT_EQ(run({"detect", "--data", (dir / "missing").string(), "--run-dir", (dir / "out2").string()}), 3);
}

TEST(Cli, SchemaErrors) {
  const auto data = logs_with("schema", "");
  put(data / "config.json", R"json({"jobs": [{"name": "bad", "file": "devices.csv", "format": "csv",
    "header": true, "statements": ["TO VERTEX Phone VALUES($0,$0)"]}]})json");
  EXPECT_EQ(run({"detect", "--data", data.string(), "--config", (data / "config.json").string(), "--run-dir",
                 (data / "out").string()}),
            4);
}

TEST(Cli, CycleIsReported) {
  const auto data = logs_with("cycle",
                              "b,2020-11-20T00:00:00Z,a,2020-11-20T00:00:00Z\n"
                              "c,2020-11-20T00:00:00Z,b,2020-11-20T00:00:00Z\n"
                              "a,2020-11-20T00:00:00Z,c,2020-11-20T00:00:00Z\n");
  EXPECT_EQ(run({"detect", "--data", data.string(), "--run-dir", (data / "out").string()}), 5);
}

TEST(Cli, EvaluateAndSweep) {
  const auto data = generated("eval_data", "9");
  const auto out = scratch("eval_out");
  ASSERT_EQ(run({"evaluate", "--data", data.string(), "--run-dir", out.string()}), 0);
  const auto j = nlohmann::json::parse(slurp(out / "evaluation.json"));
  EXPECT_TRUE(j["combined"].contains("precision"));
  EXPECT_EQ(j["flagged"], j["combined"]["tp"].get<int>() + j["combined"]["fp"].get<int>());
  const auto sw = scratch("sweep_out");
  ASSERT_EQ(run({"sweep", "--seed", "9", "--normal-accounts", "1500", "--windows", "30,3600", "--run-dir",
                 sw.string()}),
            0);
  std::istringstream csv(slurp(sw / "sweep.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Cli, BuildEdges) {
  const auto data = generated("edges_data", "10");
  const auto out = scratch("edges_out");
  ASSERT_EQ(run({"build-edges", "--events", (data / "events.jsonl").string(), "--run-dir", out.string()}), 0);
  EXPECT_FALSE(slurp(out / "edges.jsonl").empty());
}
