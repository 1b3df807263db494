#include "fraudcc/bench_driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <random>
#include <stop_token>
#include <thread>

#include <httplib.h>

namespace fraudcc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

LoadResult run_load(const LoadOptions& options, const ResponseObserver& observer) {
  if (options.concurrency == 0) throw std::invalid_argument("concurrency must be >= 1");
  if (options.accounts.empty()) throw std::invalid_argument("no accounts to look up");

  std::vector<std::vector<double>> samples(options.concurrency);
  std::vector<std::size_t> errors(options.concurrency, 0);
  const auto start = Clock::now();
  const auto measure_from = start + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(options.warmup_s));
  const auto deadline = measure_from + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(options.duration_s));

  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < options.concurrency; ++w) {
    workers.emplace_back([&, w] {
      httplib::Client client(options.host, options.port);
      client.set_keep_alive(true);
      client.set_tcp_nodelay(true);
      std::mt19937_64 rng(options.seed * 1000003 + w);
      auto& mine = samples[w];
      mine.reserve(1 << 16);
      while (true) {
        const auto t0 = Clock::now();
        if (t0 >= deadline) break;
        const std::string& account = options.accounts[rng() % options.accounts.size()];
        auto res = client.Get("/risk/" + account);
        const auto t1 = Clock::now();
        if (t0 < measure_from) continue;
        mine.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        if (!res || res->status != 200) ++errors[w];
        if (observer) observer(account, res ? res->status : 0, res ? res->body : std::string());
      }
    });
  }
  for (auto& t : workers) t.join();
  const auto end = Clock::now();

  std::vector<double> all;
  for (auto& s : samples) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());

  LoadResult r;
  r.concurrency = options.concurrency;
  r.requests = all.size();
  for (std::size_t e : errors) r.errors += e;
  r.elapsed_s = std::max(seconds_between(measure_from, end), 1e-9);
  r.qps = static_cast<double>(r.requests) / r.elapsed_s;
  r.p50_ms = nearest_rank(all, 0.50);
  r.p95_ms = nearest_rank(all, 0.95);
  r.p99_ms = nearest_rank(all, 0.99);
  double sum = 0;
  for (double x : all) sum += x;
  r.mean_ms = all.empty() ? 0.0 : sum / static_cast<double>(all.size());
  return r;
}

std::vector<std::string> sample_accounts(const ScoreTable& table, std::size_t n, std::uint64_t seed) {
  std::vector<std::string> keys;
  keys.reserve(table.records.size());
  for (const auto& [key, rec] : table.records) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  if (keys.size() <= n) return keys;
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng() % (keys.size() - i);
    std::swap(keys[i], keys[j]);
  }
  keys.resize(n);
  return keys;
}

namespace {

template <typename Background>
std::vector<BenchRow> run_scenarios(const std::string& host, int port,
                                    const std::vector<std::string>& accounts,
                                    const BenchOptions& options, Background&& background) {
  std::vector<BenchRow> rows;
  for (const bool with_background : {false, true}) {
    for (std::size_t c : options.concurrency) {
      LoadOptions lo;
      lo.host = host;
      lo.port = port;
      lo.concurrency = c;
      lo.duration_s = options.duration_s;
      lo.warmup_s = options.warmup_s;
      lo.accounts = accounts;
      lo.seed = options.seed;

      BenchRow row;
      row.scenario = with_background ? "bkgrd_cc" : "no_bkgrd_cc";
      if (with_background) {
        std::atomic<std::uint64_t> done{0};
        std::jthread bg([&](std::stop_token stop) { background(stop, done); });
        row.result = run_load(lo);
        bg.request_stop();
        bg.join();
        row.recomputes = done.load();
      } else {
        row.result = run_load(lo);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<BenchRow> run_bench(RiskService& service, int port, const BenchOptions& options) {
  auto table = service.current();
  const auto accounts = sample_accounts(*table, options.sample_accounts, options.seed);
  return run_scenarios(service.config().host, port, accounts, options,
                       [&](std::stop_token stop, std::atomic<std::uint64_t>& done) {
                         if (options.idle_priority_recompute) demote_current_thread();
                         while (!stop.stop_requested()) {
                           service.recompute_now();
                           ++done;
                         }
                       });
}

std::vector<BenchRow> run_bench_external(const std::string& host, int port,
                                         std::vector<std::string> accounts,
                                         const BenchOptions& options) {
  std::sort(accounts.begin(), accounts.end());
  return run_scenarios(host, port, accounts, options,
                       [&](std::stop_token stop, std::atomic<std::uint64_t>& done) {
                         httplib::Client client(host, port);
                         client.set_keep_alive(true);
                         client.set_read_timeout(300, 0);
                         while (!stop.stop_requested()) {
                           auto res = client.Post("/admin/recompute");
                           if (!res || res->status != 200) break;
                           ++done;
                         }
                       });
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "scenario,concurrency,requests,errors,qps,p50_ms,p95_ms,p99_ms,mean_ms,recomputes\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out << row.scenario << ',' << r.concurrency << ',' << r.requests << ',' << r.errors << ','
        << r.qps << ',' << r.p50_ms << ',' << r.p95_ms << ',' << r.p99_ms << ',' << r.mean_ms << ','
        << row.recomputes << '\n';
  }
}

}  // namespace fraudcc
