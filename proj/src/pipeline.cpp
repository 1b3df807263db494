#include "fraudcc/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fraudcc/csv.hpp"
#include "fraudcc/generator.hpp"

namespace fraudcc {

std::vector<LoadingJob> default_incentive_jobs() {
  const auto jobs = nlohmann::json::parse(R"json([
    {"name": "load_referrals", "format": "csv", "header": true, "file": "referrals.csv",
     "statements": [
       "TO VERTEX Account VALUES($0, $0, $1)",
       "TO VERTEX Account VALUES($2, $2, $3)",
       "TO EDGE invite VALUES($2, $0)"]},
    {"name": "load_devices", "format": "csv", "header": true, "file": "devices.csv",
     "statements": [
       "TO VERTEX IMEI VALUES($1, $1)",
       "TO EDGE use_imei VALUES($0, $1)"]},
    {"name": "load_orders", "format": "jsonl", "file": "orders.jsonl",
     "statements": [
       "TO VERTEX BonusOrder VALUES($\"order_id\", $\"order_date\")",
       "TO EDGE send_bonus VALUES($\"sendr_phone\", $\"order_id\")",
       "TO EDGE recv_bonus VALUES($\"order_id\", $\"recvr_phone\")"]}
  ])json");
  std::vector<LoadingJob> out;
  for (const auto& j : jobs) out.push_back(loading_job_from_json(j));
  return out;
}

LoadSummary load_logs(PropertyGraph& g, const std::vector<LoadingJob>& jobs,
                      const std::filesystem::path& dir) {
  for (const auto& job : jobs) check_job(g, job);
  LoadSummary summary;
  for (const auto& job : jobs) {
    if (job.file.empty()) throw IoError("job " + job.name + " has no file");
    LoadReport report = run_loading_job(g, job, dir / job.file);
    summary.total += report;
    summary.jobs.emplace_back(job.name, std::move(report));
  }
  return summary;
}

LoadSummary load_campaign(PropertyGraph& g, const Campaign& campaign) {
  const auto jobs = default_incentive_jobs();
  for (const auto& job : jobs) check_job(g, job);
  LoadSummary summary;
  for (const auto& job : jobs) {
    std::stringstream src;
    if (job.file == "referrals.csv") {
      write_referrals(src, campaign.referrals);
    } else if (job.file == "devices.csv") {
      write_devices(src, campaign.devices);
    } else {
      write_orders(src, campaign.orders);
    }
    LoadReport report = run_loading_job(g, job, src);
    summary.total += report;
    summary.jobs.emplace_back(job.name, std::move(report));
  }
  return summary;
}

Detection detect(const PropertyGraph& g, const RuleThresholds& thresholds, Exec exec) {
  Detection d;
  d.labeling = dag_cc(g, names::kInvite, exec);
  d.profiles = profile_components(g, d.labeling, exec);
  d.stats = per_account_stats(g);
  d.outcomes = evaluate_rules(g, d.profiles, d.stats, thresholds);
  return d;
}

void write_rule_report(std::ostream& out, const std::vector<RuleOutcome>& outcomes) {
  for (const auto& o : outcomes) out << to_json(o).dump() << '\n';
}

void write_profile_csv(std::ostream& out, const std::vector<ComponentProfile>& profiles) {
  out << "label,size,depth,bonus_sent,non_self_order_ratio,shared_device_ratio,gini\n";
  char buf[160];
  for (const auto& p : profiles) {
    std::snprintf(buf, sizeof buf, ",%zu,%zu,%zu,%.6f,%.6f,%.6f\n", p.size, p.depth, p.bonus_sent,
                  p.non_self_order_ratio, p.shared_device_ratio, p.gini);
    out << csv_escape(p.label_key) << buf;
  }
}

EventParseResult read_events(const std::filesystem::path& path, const EventParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return parse_risk_events(in, options);
}

PropertyGraph build_cocontext_graph(std::span<const RiskEvent> events, const ContextSelector& selector,
                                    std::int64_t store_window_s, Exec exec, std::size_t* edge_count) {
  PropertyGraph g = register_schema(cocontext_schema(selector.context_type));
  const auto edges = build_cocontext_edges(events, selector, store_window_s, exec);
  const std::size_t n = materialize(g, edges);
  if (edge_count) *edge_count = n;
  return g;
}

ScoreTable score_snapshot(const PropertyGraph& g, const WindowConfig& window, std::size_t threshold,
                          const std::string& edge_type, Exec exec) {
  RecomputeOptions options;
  options.window = window;
  options.threshold = threshold;
  options.edge_type = edge_type;
  options.exec = exec;
  options.now = latest_edge_time(g, edge_type).value_or(Timestamp{0});
  options.computed_at = options.now;
  return recompute(g, options);
}

std::set<std::string> risky_accounts(const ScoreTable& table) {
  std::set<std::string> out;
  for (const auto& [key, rec] : table.records)
    if (rec.risky) out.insert(key);
  return out;
}

std::set<std::string> flagged_accounts(const std::vector<RuleOutcome>& outcomes, const ScoreTable& table) {
  std::set<std::string> out = outcome(outcomes, 'g').accounts;
  for (const auto& [key, rec] : table.records)
    if (rec.risky) out.insert(key);
  return out;
}

}  // namespace fraudcc
