#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <queue>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "fraudcc/loading_job.hpp"
#include "fraudcc/timeutil.hpp"

namespace fraudcc {

/// One risk-control log entry. JSONL keys / CSV header names: ts,
/// event_type, account, ip; anything else lands in `extra`.
struct RiskEvent {
  Timestamp ts;
  std::string event_type;
  std::string account;
  std::string ip;
  std::map<std::string, std::string> extra;

  friend bool operator==(const RiskEvent&, const RiskEvent&) = default;
};

struct EventParseOptions {
  SourceFormat format = SourceFormat::Jsonl;
  /// Events held back to repair local disorder before emission.
  std::size_t reorder_buffer = 1000;
};

struct EventParseResult {
  std::vector<RiskEvent> events;  // non-decreasing ts
  std::size_t records_read = 0;
  std::size_t skipped = 0;       // unparseable or missing required fields
  std::size_t dropped_late = 0;  // arrived after a later event was already emitted
};

/// Bounded reorder stage: holds up to `capacity` events and releases the
/// earliest whenever it overflows. Ties keep arrival order.
class ReorderBuffer {
 public:
  explicit ReorderBuffer(std::size_t capacity) : capacity_(capacity) {}

  /// Emits zero or more events through `sink`.
  void push(RiskEvent event, const std::function<void(RiskEvent&&)>& sink);
  void flush(const std::function<void(RiskEvent&&)>& sink);
  std::size_t dropped_late() const { return dropped_late_; }

 private:
  struct Pending {
    RiskEvent event;
    std::uint64_t seq;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      if (a.event.ts != b.event.ts) return a.event.ts > b.event.ts;
      return a.seq > b.seq;
    }
  };
  void pop_one(const std::function<void(RiskEvent&&)>& sink);

  std::size_t capacity_;
  std::priority_queue<Pending, std::vector<Pending>, Later> heap_;
  std::uint64_t seq_ = 0;
  bool emitted_any_ = false;
  Timestamp last_emitted_{};
  std::size_t dropped_late_ = 0;
};

EventParseResult parse_risk_events(std::istream& source, const EventParseOptions& options = {});

void write_event_jsonl(std::ostream& out, const RiskEvent& e);

/// Plays a time-ordered event sequence into a sink at a fixed rate,
/// standing in for a message broker. rate <= 0 replays as fast as possible.
/// Returns the number of events delivered before completion or stop.
std::size_t replay_events(std::span<const RiskEvent> events, double events_per_second,
                          const std::function<void(const RiskEvent&)>& sink,
                          std::stop_token stop = {});

}  // namespace fraudcc
