#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fraudcc/cocontext.hpp"
#include "fraudcc/exec.hpp"
#include "fraudcc/generator.hpp"
#include "fraudcc/rules.hpp"

namespace fraudcc {

struct PrecisionRecall {
  double precision = 1.0;  // 1.0 when nothing is flagged
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

PrecisionRecall precision_recall(const std::set<std::string>& flagged, const std::set<std::string>& truth);

struct SweepOptions {
  std::vector<std::int64_t> windows{10, 30, 100, 3600};
  std::vector<std::size_t> thresholds{10};
  std::int64_t recency_days = 7;
  RuleThresholds rules;
  ContextSelector selector;
  Exec exec = Exec::Serial;  // Parallel runs the (window, threshold) pairs concurrently
};

struct SweepRow {
  std::int64_t window_s = 0;
  std::size_t threshold = 0;
  PrecisionRecall score;
  std::size_t edge_count = 0;     // stored edges inside the effective window
  std::size_t account_count = 0;  // accounts with at least one such edge
  std::map<std::size_t, std::size_t> cc_size_histogram;
};

/// One detection per (window, threshold) pair: rule g plus component size at
/// the threshold, scored against the campaign's planted groups. Edges are
/// stored once at the widest window and filtered per pair.
std::vector<SweepRow> sweep(const Campaign& campaign, const SweepOptions& options);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace fraudcc
