#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fraudcc/cocontext.hpp"
#include "fraudcc/graph.hpp"
#include "fraudcc/latency.hpp"
#include "fraudcc/score_table.hpp"

namespace httplib {
class Server;
}

namespace fraudcc {

/// Which clock anchors the recency filter. Data uses the newest edge's
/// created_at, so replayed historical logs are not filtered away.
enum class ClockMode { Wall, Data };

struct ServiceConfig {
  std::size_t cc_size_threshold = 10;
  std::int64_t recompute_interval_s = 60;
  WindowConfig window;
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  ClockMode clock = ClockMode::Data;
  Exec exec = Exec::Serial;
  bool idle_priority_recompute = true;
  std::size_t http_threads = 16;

  void validate() const;
};

void from_json(const nlohmann::json& j, ServiceConfig& c);
void to_json(nlohmann::json& j, const ServiceConfig& c);
void from_json(const nlohmann::json& j, WindowConfig& w);
void to_json(nlohmann::json& j, const WindowConfig& w);

struct LookupResult {
  bool found = false;
  std::size_t cc_size = 0;
  Timestamp updated_at;
  bool risky = false;
  Timestamp computed_at;
  std::int64_t computed_at_ms = 0;
  std::uint64_t generation = 0;
};

/// Account ids accepted by the lookup endpoint: 1-128 chars of
/// [A-Za-z0-9._:@+-].
bool valid_account_id(std::string_view id);

/// Moves the calling thread to the idle scheduling class (Linux) so it only
/// runs when lookups leave the CPU free.
void demote_current_thread();

/// Serves per-account component sizes from an atomically swapped score
/// table while recomputes run beside it.
class RiskService {
 public:
  RiskService(std::shared_ptr<SharedGraph> graph, ServiceConfig config);
  ~RiskService();
  RiskService(const RiskService&) = delete;
  RiskService& operator=(const RiskService&) = delete;

  /// Builds a fresh table from the graph and publishes it. Recomputes are
  /// serialized; lookups keep reading the previous table meanwhile.
  std::shared_ptr<const ScoreTable> recompute_now();

  std::shared_ptr<const ScoreTable> current() const;

  /// Throws std::invalid_argument when the id is malformed.
  LookupResult lookup(std::string_view account) const;

  /// Recomputes every recompute_interval_s until stop().
  void start_scheduler();

  /// Binds and serves HTTP on a background thread; returns the bound port.
  /// Throws std::runtime_error when the port cannot be bound.
  int listen();

  void stop();

  nlohmann::ordered_json metrics_json() const;
  nlohmann::ordered_json lookup_json(std::string_view account, const LookupResult& r) const;
  const ServiceConfig& config() const { return config_; }
  std::uint64_t recompute_count() const { return recomputes_.load(); }
  SharedGraph& graph() { return *graph_; }

 private:
  void setup_routes();

  std::shared_ptr<SharedGraph> graph_;
  ServiceConfig config_;

  std::shared_ptr<const ScoreTable> table_;  // accessed with std::atomic_load/store
  std::mutex recompute_mutex_;
  std::deque<std::shared_ptr<const ScoreTable>> retired_;
  std::atomic<std::uint64_t> generation_{0};
  std::atomic<std::uint64_t> recomputes_{0};
  std::atomic<std::int64_t> last_recompute_us_{0};

  mutable LatencyHistogram latency_;
  std::atomic<std::uint64_t> lookups_{0};
  std::atomic<std::uint64_t> client_errors_{0};
  std::int64_t started_ms_ = 0;

  std::unique_ptr<httplib::Server> server_;
  std::thread server_thread_;

  std::mutex scheduler_mutex_;
  std::condition_variable scheduler_cv_;
  bool stopping_ = false;
  std::thread scheduler_thread_;
};

/// Feeds a replayed event stream through the co-context sweep into the
/// graph, one exclusive write per closed edge.
class EventStreamIngestor {
 public:
  EventStreamIngestor(std::shared_ptr<SharedGraph> graph, ContextSelector selector,
                      std::int64_t store_window_s);
  ~EventStreamIngestor();

  void start(std::vector<RiskEvent> events, double events_per_second);
  void stop();
  void join();
  std::size_t events_delivered() const { return delivered_.load(); }
  std::size_t edges_inserted() const { return inserted_.load(); }

 private:
  std::shared_ptr<SharedGraph> graph_;
  CoContextBuilder builder_;
  std::vector<RiskEvent> events_;
  std::atomic<std::size_t> delivered_{0};
  std::atomic<std::size_t> inserted_{0};
  std::jthread thread_;
};

}  // namespace fraudcc
