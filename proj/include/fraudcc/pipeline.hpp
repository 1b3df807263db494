#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fraudcc/cocontext.hpp"
#include "fraudcc/components.hpp"
#include "fraudcc/graph.hpp"
#include "fraudcc/loading_job.hpp"
#include "fraudcc/profile.hpp"
#include "fraudcc/risk_event.hpp"
#include "fraudcc/rules.hpp"
#include "fraudcc/score_table.hpp"

namespace fraudcc {

/// Loading jobs for the three incentive-campaign logs as written by the
/// generator: referrals.csv, devices.csv and orders.jsonl.
std::vector<LoadingJob> default_incentive_jobs();

struct LoadSummary {
  std::vector<std::pair<std::string, LoadReport>> jobs;  // in run order
  LoadReport total;
};

/// Runs each job against dir / job.file; a job whose file is missing is an
/// IoError. All jobs are checked against the schema before any record is read.
LoadSummary load_logs(PropertyGraph& g, const std::vector<LoadingJob>& jobs,
                      const std::filesystem::path& dir);

struct Campaign;

/// Same as load_logs over the generator's logs, serialized in memory.
LoadSummary load_campaign(PropertyGraph& g, const Campaign& campaign);

struct Detection {
  ComponentLabeling labeling;
  std::vector<ComponentProfile> profiles;
  std::map<VertexId, AccountStats> stats;
  std::vector<RuleOutcome> outcomes;  // a..j
};

Detection detect(const PropertyGraph& g, const RuleThresholds& thresholds = {},
                 Exec exec = Exec::Serial);

/// One JSON object per rule, a..j.
void write_rule_report(std::ostream& out, const std::vector<RuleOutcome>& outcomes);

/// label,size,depth,bonus_sent,non_self_order_ratio,shared_device_ratio,gini
void write_profile_csv(std::ostream& out, const std::vector<ComponentProfile>& profiles);

EventParseResult read_events(const std::filesystem::path& path, const EventParseOptions& options = {});

/// Fresh co-context graph holding every edge the sweep emits at store_window_s.
PropertyGraph build_cocontext_graph(std::span<const RiskEvent> events, const ContextSelector& selector,
                                    std::int64_t store_window_s, Exec exec = Exec::Serial,
                                    std::size_t* edge_count = nullptr);

/// Score table for the graph with recency anchored at its newest edge.
ScoreTable score_snapshot(const PropertyGraph& g, const WindowConfig& window, std::size_t threshold,
                          const std::string& edge_type = std::string(names::kSharedIp),
                          Exec exec = Exec::Serial);

std::set<std::string> risky_accounts(const ScoreTable& table);

/// Accounts of rule g plus accounts whose component reaches the threshold.
std::set<std::string> flagged_accounts(const std::vector<RuleOutcome>& outcomes, const ScoreTable& table);

}  // namespace fraudcc
