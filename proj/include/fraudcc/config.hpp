#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>
#include <cstdint>

#include <json.hpp>

#include "fraudcc/bench_driver.hpp"
#include "fraudcc/cocontext.hpp"
#include "fraudcc/generator.hpp"
#include "fraudcc/loading_job.hpp"
#include "fraudcc/risk_service.hpp"
#include "fraudcc/rules.hpp"

namespace fraudcc {

/// Everything a subcommand can be configured with. Every section is
/// optional in the file; missing keys keep their defaults.
struct AppConfig {
  RuleThresholds rules;
  ServiceConfig service;  // service.window is the co-context window
  ContextSelector selector;
  std::size_t reorder_buffer = 1000;
  std::vector<LoadingJob> jobs;  // defaults to the incentive-campaign jobs
  CampaignSpec campaign;
  BenchOptions bench;
  std::vector<std::int64_t> sweep_windows{10, 30, 100, 3600};
  std::vector<std::size_t> sweep_thresholds{10};
  bool parallel = false;
};

AppConfig load_config(const std::filesystem::path& path);
AppConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AppConfig& c);

}  // namespace fraudcc
