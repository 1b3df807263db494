#include "fraudcc/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fraudcc/pipeline.hpp"

namespace fraudcc {

PrecisionRecall precision_recall(const std::set<std::string>& flagged, const std::set<std::string>& truth) {
  PrecisionRecall r;
  for (const auto& a : flagged) {
    if (truth.count(a)) {
      ++r.tp;
    } else {
      ++r.fp;
    }
  }
  r.fn = truth.size() - r.tp;
  r.precision = flagged.empty() ? 1.0 : static_cast<double>(r.tp) / static_cast<double>(flagged.size());
  r.recall = truth.empty() ? 1.0 : static_cast<double>(r.tp) / static_cast<double>(truth.size());
  if (flagged.empty() && !truth.empty()) r.recall = 0.0;
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

std::vector<SweepRow> sweep(const Campaign& campaign, const SweepOptions& options) {
  if (options.windows.empty() || options.thresholds.empty())
    throw std::invalid_argument("sweep needs at least one window and one threshold");
  const std::int64_t store = *std::max_element(options.windows.begin(), options.windows.end());

  PropertyGraph incentive = register_schema(incentive_campaign_schema());
  load_campaign(incentive, campaign);
  const Detection detection = detect(incentive, options.rules, Exec::Serial);
  const std::set<std::string>& rule_g = outcome(detection.outcomes, 'g').accounts;

  const PropertyGraph ip = build_cocontext_graph(campaign.events, options.selector, store, Exec::Serial);
  const TypeId edge_type = ip.require_edge_type(options.selector.context_type);
  const Timestamp now = latest_edge_time(ip, options.selector.context_type).value_or(Timestamp{0});

  std::vector<std::pair<std::int64_t, std::size_t>> pairs;
  for (std::int64_t w : options.windows)
    for (std::size_t t : options.thresholds) pairs.emplace_back(w, t);
  std::vector<SweepRow> rows(pairs.size());

#pragma omp parallel for schedule(dynamic) if (options.exec == Exec::Parallel)
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [w, t] = pairs[i];
    WindowConfig window{store, w, options.recency_days};
    SweepRow& row = rows[i];
    row.window_s = w;
    row.threshold = t;
    const ScoreTable table = score_snapshot(ip, window, t, options.selector.context_type);
    const EdgePredicate keep = edge_predicate(ip, options.selector.context_type, filtered_view(window, now));
    for (EdgeId e : ip.edges_of_type(edge_type))
      if (keep(ip, e)) ++row.edge_count;
    row.account_count = table.records.size();
    row.cc_size_histogram = table.size_histogram;
    std::set<std::string> flagged = rule_g;
    for (const auto& [key, rec] : table.records)
      if (rec.risky) flagged.insert(key);
    row.score = precision_recall(flagged, campaign.truth.fraud_accounts);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "window_s,threshold,precision,recall,f1,tp,fp,fn,edge_count,account_count,cc_size_histogram\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", r.score.precision, r.score.recall, r.score.f1);
    out << r.window_s << ',' << r.threshold << ',' << buf << ',' << r.score.tp << ',' << r.score.fp << ','
        << r.score.fn << ',' << r.edge_count << ',' << r.account_count << ',';
    bool first = true;
    for (const auto& [size, count] : r.cc_size_histogram) {
      if (!first) out << ';';
      out << size << ':' << count;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace fraudcc
