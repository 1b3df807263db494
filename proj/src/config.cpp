#include "fraudcc/config.hpp"

#include <fstream>

#include "fraudcc/pipeline.hpp"

namespace fraudcc {

namespace {

void bench_from_json(const nlohmann::json& j, BenchOptions& b) {
  b.concurrency = j.value("concurrency", b.concurrency);
  b.duration_s = j.value("duration_s", b.duration_s);
  b.warmup_s = j.value("warmup_s", b.warmup_s);
  b.sample_accounts = j.value("sample_accounts", b.sample_accounts);
  b.seed = j.value("seed", b.seed);
}

nlohmann::json bench_to_json(const BenchOptions& b) {
  return {{"concurrency", b.concurrency},
          {"duration_s", b.duration_s},
          {"warmup_s", b.warmup_s},
          {"sample_accounts", b.sample_accounts},
          {"seed", b.seed}};
}

}  // namespace

AppConfig config_from_json(const nlohmann::json& j) {
  AppConfig c;
  if (j.contains("rules")) c.rules = j.at("rules").get<RuleThresholds>();
  if (j.contains("service")) c.service = j.at("service").get<ServiceConfig>();
  if (j.contains("window")) c.service.window = j.at("window").get<WindowConfig>();
  if (j.contains("context")) {
    const auto& ctx = j.at("context");
    c.selector.field = ctx.value("field", c.selector.field);
    c.selector.context_type = ctx.value("context_type", c.selector.context_type);
  }
  c.reorder_buffer = j.value("reorder_buffer", c.reorder_buffer);
  if (j.contains("jobs")) {
    for (const auto& job : j.at("jobs")) c.jobs.push_back(loading_job_from_json(job));
  } else {
    c.jobs = default_incentive_jobs();
  }
  if (j.contains("campaign")) c.campaign = j.at("campaign").get<CampaignSpec>();
  else c.campaign.groups = default_fraud_groups();
  if (j.contains("bench")) bench_from_json(j.at("bench"), c.bench);
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    c.sweep_windows = s.value("windows", c.sweep_windows);
    c.sweep_thresholds = s.value("thresholds", c.sweep_thresholds);
  }
  c.parallel = j.value("parallel", c.parallel);
  c.service.validate();
  c.campaign.validate();
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  return config_from_json(nlohmann::json::parse(in));
}

nlohmann::json to_json(const AppConfig& c) {
  nlohmann::json j;
  j["rules"] = c.rules;
  j["service"] = c.service;
  j["context"] = {{"field", c.selector.field}, {"context_type", c.selector.context_type}};
  j["reorder_buffer"] = c.reorder_buffer;
  auto& jobs = j["jobs"] = nlohmann::json::array();
  for (const auto& job : c.jobs) jobs.push_back(to_json(job));
  j["campaign"] = c.campaign;
  j["bench"] = bench_to_json(c.bench);
  j["sweep"] = {{"windows", c.sweep_windows}, {"thresholds", c.sweep_thresholds}};
  j["parallel"] = c.parallel;
  return j;
}

}  // namespace fraudcc
