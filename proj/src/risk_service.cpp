#include "fraudcc/risk_service.hpp"

#include <chrono>
#include <stdexcept>

#include <httplib.h>
#include <pthread.h>
#include <sched.h>

namespace fraudcc {

void ServiceConfig::validate() const {
  if (cc_size_threshold < 2) throw std::invalid_argument("cc_size_threshold must be >= 2");
  if (recompute_interval_s < 1) throw std::invalid_argument("recompute_interval_s must be >= 1");
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
  if (http_threads < 1) throw std::invalid_argument("http_threads must be >= 1");
  window.validate();
}

void from_json(const nlohmann::json& j, WindowConfig& w) {
  const WindowConfig d;
  w.store_window_s = j.value("store_window_s", d.store_window_s);
  w.effective_window_s = j.value("effective_window_s", d.effective_window_s);
  w.recency_days = j.value("recency_days", d.recency_days);
}

void to_json(nlohmann::json& j, const WindowConfig& w) {
  j = nlohmann::json{{"store_window_s", w.store_window_s},
                     {"effective_window_s", w.effective_window_s},
                     {"recency_days", w.recency_days}};
}

void from_json(const nlohmann::json& j, ServiceConfig& c) {
  const ServiceConfig d;
  c.cc_size_threshold = j.value("cc_size_threshold", d.cc_size_threshold);
  c.recompute_interval_s = j.value("recompute_interval_s", d.recompute_interval_s);
  if (j.contains("window")) c.window = j.at("window").get<WindowConfig>();
  c.host = j.value("host", d.host);
  c.port = j.value("port", d.port);
  const std::string clock = j.value("clock", std::string("data"));
  if (clock == "wall") {
    c.clock = ClockMode::Wall;
  } else if (clock == "data") {
    c.clock = ClockMode::Data;
  } else {
    throw std::invalid_argument("clock must be wall or data");
  }
  c.exec = j.value("parallel", false) ? Exec::Parallel : Exec::Serial;
  c.idle_priority_recompute = j.value("idle_priority_recompute", d.idle_priority_recompute);
  c.http_threads = j.value("http_threads", d.http_threads);
}

void to_json(nlohmann::json& j, const ServiceConfig& c) {
  j = nlohmann::json{{"cc_size_threshold", c.cc_size_threshold},
                     {"recompute_interval_s", c.recompute_interval_s},
                     {"window", c.window},
                     {"host", c.host},
                     {"port", c.port},
                     {"clock", c.clock == ClockMode::Wall ? "wall" : "data"},
                     {"parallel", c.exec == Exec::Parallel},
                     {"idle_priority_recompute", c.idle_priority_recompute},
                     {"http_threads", c.http_threads}};
}

bool valid_account_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == ':' || c == '@' || c == '+' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void demote_current_thread() {
#ifdef SCHED_IDLE
  sched_param param{};
  param.sched_priority = 0;
  pthread_setschedparam(pthread_self(), SCHED_IDLE, &param);
#endif
}

RiskService::RiskService(std::shared_ptr<SharedGraph> graph, ServiceConfig config)
    : graph_(std::move(graph)), config_(std::move(config)) {
  config_.validate();
  auto empty = std::make_shared<ScoreTable>();
  empty->window = config_.window;
  empty->threshold = config_.cc_size_threshold;
  std::atomic_store(&table_, std::shared_ptr<const ScoreTable>(std::move(empty)));
  started_ms_ = wall_clock_millis();
}

RiskService::~RiskService() { stop(); }

std::shared_ptr<const ScoreTable> RiskService::recompute_now() {
  std::lock_guard lock(recompute_mutex_);
  const auto t0 = std::chrono::steady_clock::now();

  RecomputeOptions options;
  options.window = config_.window;
  options.threshold = config_.cc_size_threshold;
  options.exec = config_.exec;
  options.generation = generation_.load() + 1;
  options.computed_at_ms = wall_clock_millis();
  options.computed_at = Timestamp{options.computed_at_ms / 1000};

  auto table = graph_->read([&](const PropertyGraph& g) {
    options.now = options.computed_at;
    if (config_.clock == ClockMode::Data) {
      if (auto latest = latest_edge_time(g, options.edge_type)) options.now = *latest;
    }
    return std::make_shared<const ScoreTable>(recompute(g, options));
  });

  auto previous = std::atomic_exchange(&table_, std::shared_ptr<const ScoreTable>(table));
  generation_.store(options.generation);
  // Old tables are released here, a couple of publications later, rather
  // than by whichever lookup happens to drop the last reference.
  retired_.push_back(std::move(previous));
  while (retired_.size() > 2) retired_.pop_front();

  ++recomputes_;
  last_recompute_us_.store(std::chrono::duration_cast<std::chrono::microseconds>(
                               std::chrono::steady_clock::now() - t0)
                               .count());
  return table;
}

std::shared_ptr<const ScoreTable> RiskService::current() const { return std::atomic_load(&table_); }

LookupResult RiskService::lookup(std::string_view account) const {
  if (!valid_account_id(account)) throw std::invalid_argument("malformed account id");
  const auto table = std::atomic_load(&table_);
  LookupResult r;
  r.computed_at = table->computed_at;
  r.computed_at_ms = table->computed_at_ms;
  r.generation = table->generation;
  if (const RiskScoreRecord* rec = table->find(account)) {
    r.found = true;
    r.cc_size = rec->cc_size;
    r.updated_at = rec->updated_at;
    r.risky = rec->risky;
  }
  return r;
}

nlohmann::ordered_json RiskService::lookup_json(std::string_view account,
                                                const LookupResult& r) const {
  nlohmann::ordered_json j;
  j["account"] = account;
  j["found"] = r.found;
  j["cc_size"] = r.cc_size;
  if (r.found) {
    j["updated_at"] = r.updated_at.seconds;
  } else {
    j["updated_at"] = nullptr;
  }
  j["risky"] = r.risky;
  j["computed_at"] = r.computed_at.seconds;
  j["computed_at_ms"] = r.computed_at_ms;
  j["generation"] = r.generation;
  j["threshold"] = config_.cc_size_threshold;
  j["window"] = {{"store_window_s", config_.window.store_window_s},
                 {"effective_window_s", config_.window.effective_window_s},
                 {"recency_days", config_.window.recency_days}};
  return j;
}

nlohmann::ordered_json RiskService::metrics_json() const {
  const auto table = current();
  const double uptime_s = static_cast<double>(wall_clock_millis() - started_ms_) / 1000.0;
  nlohmann::ordered_json j;
  j["lookups_total"] = lookups_.load();
  j["client_errors"] = client_errors_.load();
  j["uptime_s"] = uptime_s;
  j["qps"] = uptime_s > 0 ? static_cast<double>(lookups_.load()) / uptime_s : 0.0;
  j["latency_us"] = {{"p50", latency_.percentile(0.50)},
                     {"p95", latency_.percentile(0.95)},
                     {"p99", latency_.percentile(0.99)}};
  j["recompute"] = {{"count", recomputes_.load()},
                    {"last_duration_ms", static_cast<double>(last_recompute_us_.load()) / 1000.0},
                    {"generation", table->generation},
                    {"computed_at", table->computed_at.seconds}};
  // Components bucketed by powers of two: [1,1], [2,3], [4,7], ...
  std::map<std::size_t, std::size_t> buckets;
  for (const auto& [size, count] : table->size_histogram) {
    std::size_t lo = 1;
    while (lo * 2 <= size) lo *= 2;
    buckets[lo] += count;
  }
  auto hist = nlohmann::ordered_json::array();
  for (const auto& [lo, count] : buckets) {
    hist.push_back({{"min", lo}, {"max", lo * 2 - 1}, {"count", count}});
  }
  j["components"] = {{"count", table->component_count},
                     {"accounts", table->records.size()},
                     {"size_histogram", std::move(hist)}};
  return j;
}

void RiskService::setup_routes() {
  auto& svr = *server_;
  svr.Get("/risk/:account", [this](const httplib::Request& req, httplib::Response& res) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string& account = req.path_params.at("account");
    if (!valid_account_id(account)) {
      ++client_errors_;
      res.status = 400;
      res.set_content(R"({"error":"malformed account id"})", "application/json");
      return;
    }
    const LookupResult r = lookup(account);
    res.set_content(lookup_json(account, r).dump(), "application/json");
    ++lookups_;
    latency_.record(static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0)
            .count()));
  });
  svr.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    const auto table = current();
    nlohmann::ordered_json j;
    j["status"] = "ok";
    j["generation"] = table->generation;
    j["computed_at"] = table->computed_at.seconds;
    j["accounts"] = table->records.size();
    res.set_content(j.dump(), "application/json");
  });
  svr.Post("/admin/recompute", [this](const httplib::Request&, httplib::Response& res) {
    const auto table = recompute_now();
    nlohmann::ordered_json j;
    j["generation"] = table->generation;
    j["computed_at"] = table->computed_at.seconds;
    j["computed_at_ms"] = table->computed_at_ms;
    j["accounts"] = table->records.size();
    j["components"] = table->component_count;
    j["duration_ms"] = static_cast<double>(last_recompute_us_.load()) / 1000.0;
    res.set_content(j.dump(), "application/json");
  });
  svr.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(metrics_json().dump(), "application/json");
  });
}

int RiskService::listen() {
  if (server_) throw std::logic_error("service already listening");
  server_ = std::make_unique<httplib::Server>();
  const std::size_t threads = config_.http_threads;
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  server_->set_keep_alive_max_count(1u << 30);
  server_->set_tcp_nodelay(true);
  // the library default adds SO_REUSEPORT, which lets a second server share the port silently
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  setup_routes();

  int port = config_.port;
  if (port == 0) {
    port = server_->bind_to_any_port(config_.host);
  } else if (!server_->bind_to_port(config_.host, port)) {
    port = -1;
  }
  if (port < 0) {
    server_.reset();
    throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  }
  server_thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void RiskService::start_scheduler() {
  if (scheduler_thread_.joinable()) return;
  scheduler_thread_ = std::thread([this] {
    if (config_.idle_priority_recompute) demote_current_thread();
    while (true) {
      {
        std::unique_lock lock(scheduler_mutex_);
        if (scheduler_cv_.wait_for(lock, std::chrono::seconds(config_.recompute_interval_s),
                                   [this] { return stopping_; })) {
          return;
        }
      }
      recompute_now();
    }
  });
}

void RiskService::stop() {
  {
    std::lock_guard lock(scheduler_mutex_);
    stopping_ = true;
  }
  scheduler_cv_.notify_all();
  if (scheduler_thread_.joinable()) scheduler_thread_.join();
  if (server_) {
    server_->stop();
    if (server_thread_.joinable()) server_thread_.join();
    server_.reset();
  }
}

EventStreamIngestor::EventStreamIngestor(std::shared_ptr<SharedGraph> graph,
                                         ContextSelector selector, std::int64_t store_window_s)
    : graph_(std::move(graph)), builder_(std::move(selector), store_window_s) {}

EventStreamIngestor::~EventStreamIngestor() { stop(); }

void EventStreamIngestor::start(std::vector<RiskEvent> events, double events_per_second) {
  if (thread_.joinable()) throw std::logic_error("ingestor already started");
  events_ = std::move(events);
  thread_ = std::jthread([this, events_per_second](std::stop_token stop) {
    replay_events(
        events_, events_per_second,
        [this](const RiskEvent& e) {
          if (auto edge = builder_.push(e)) {
            graph_->write([&](PropertyGraph& g) { materialize(g, std::span(&*edge, 1)); });
            ++inserted_;
          }
          ++delivered_;
        },
        stop);
  });
}

void EventStreamIngestor::stop() {
  if (thread_.joinable()) {
    thread_.request_stop();
    thread_.join();
  }
}

void EventStreamIngestor::join() {
  if (thread_.joinable()) thread_.join();
}

}  // namespace fraudcc
