#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fraudcc/exec.hpp"
#include "fraudcc/graph.hpp"
#include "fraudcc/risk_event.hpp"

namespace fraudcc {

/// Undirected account-account edge derived from two time-adjacent uses of
/// the same context value.
struct CoContextEdge {
  std::string a;  // earlier user
  std::string b;  // later user
  std::string context_type;
  std::string context_value;
  Timestamp created_at;  // ts of the later event
  std::int64_t delta = 0;

  friend bool operator==(const CoContextEdge&, const CoContextEdge&) = default;
};

/// Which event field is the shared resource. "ip" and "event_type" read the
/// core fields; any other name reads `extra`.
struct ContextSelector {
  std::string field = "ip";
  std::string context_type = std::string(names::kSharedIp);

  const std::string* select(const RiskEvent& e) const;
};

struct WindowConfig {
  std::int64_t store_window_s = 3600;
  std::int64_t effective_window_s = 30;
  std::int64_t recency_days = 7;

  /// Throws std::invalid_argument unless 1 <= effective <= store and
  /// recency_days >= 1.
  void validate() const;

  /// Effective window equal to the store window and no recency cut.
  static WindowConfig unfiltered(std::int64_t store_window_s);

  friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

/// Streaming form of the sweep: keeps the last event per context value.
class CoContextBuilder {
 public:
  CoContextBuilder(ContextSelector selector, std::int64_t window_s);

  /// Events must arrive in non-decreasing ts; throws std::invalid_argument
  /// otherwise. Returns the edge this event closes, if any.
  std::optional<CoContextEdge> push(const RiskEvent& e);

  std::size_t tracked_contexts() const { return last_.size(); }

 private:
  struct LastSeen {
    std::string account;
    Timestamp ts;
  };
  ContextSelector selector_;
  std::int64_t window_s_;
  std::unordered_map<std::string, LastSeen> last_;
  std::optional<Timestamp> previous_ts_;
};

/// Time-adjacent pair reduction: per context value, an edge joins each event
/// to the previous event of that value when the accounts differ and the gap
/// is <= window_s. Output is ordered by the closing event's position.
std::vector<CoContextEdge> build_cocontext_edges(std::span<const RiskEvent> events,
                                                 const ContextSelector& selector,
                                                 std::int64_t window_s, Exec exec = Exec::Serial);

/// Stores each edge as an undirected co-context edge (type = context_type)
/// with created_at, delta and context_value. Returns the number inserted.
std::size_t materialize(PropertyGraph& g, std::span<const CoContextEdge> edges);

/// Query-time filter: created_at >= now - recency_days and
/// delta <= effective_window_s, both inclusive.
struct EdgeFilter {
  Timestamp min_created_at;
  std::int64_t max_delta = 0;

  bool accepts(Timestamp created_at, std::int64_t delta) const {
    return created_at >= min_created_at && delta <= max_delta;
  }
};

EdgeFilter filtered_view(const WindowConfig& cfg, Timestamp now);

using EdgePredicate = std::function<bool(const PropertyGraph&, EdgeId)>;

/// Binds the filter to the attribute slots of a co-context edge type.
EdgePredicate edge_predicate(const PropertyGraph& g, std::string_view edge_type, EdgeFilter filter);

/// Merged strength of a pair: the number of parallel co-context edges.
std::size_t edge_strength(const PropertyGraph& g, std::string_view edge_type, std::string_view a,
                          std::string_view b);

/// Largest created_at among edges of the type, if any.
std::optional<Timestamp> latest_edge_time(const PropertyGraph& g, std::string_view edge_type);

}  // namespace fraudcc
