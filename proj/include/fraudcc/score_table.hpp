#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>

#include "fraudcc/cocontext.hpp"
#include "fraudcc/exec.hpp"
#include "fraudcc/graph.hpp"

namespace fraudcc {

struct RiskScoreRecord {
  std::string account;
  std::size_t cc_size = 0;
  Timestamp updated_at;
  bool risky = false;

  friend bool operator==(const RiskScoreRecord&, const RiskScoreRecord&) = default;
};

/// An immutable published result of one recompute.
struct ScoreTable {
  std::unordered_map<std::string, RiskScoreRecord> records;
  Timestamp computed_at;
  std::int64_t computed_at_ms = 0;
  std::uint64_t generation = 0;
  Timestamp reference_now;  // time the recency filter was anchored to
  WindowConfig window;
  std::size_t threshold = 10;
  std::size_t component_count = 0;
  std::map<std::size_t, std::size_t> size_histogram;  // component size -> count

  const RiskScoreRecord* find(std::string_view account) const {
    auto it = records.find(std::string(account));
    return it == records.end() ? nullptr : &it->second;
  }
};

struct RecomputeOptions {
  WindowConfig window;
  std::size_t threshold = 10;
  Timestamp now;            // anchors the recency filter
  Timestamp computed_at;    // stamped on every record
  std::int64_t computed_at_ms = 0;
  std::uint64_t generation = 0;
  std::string edge_type = std::string(names::kSharedIp);
  Exec exec = Exec::Serial;
};

/// Components over the filtered co-context edges; every account with an
/// accepted edge gets its component size. Accounts without one are absent.
ScoreTable recompute(const PropertyGraph& g, const RecomputeOptions& options);

}  // namespace fraudcc
