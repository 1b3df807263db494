#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraudcc/risk_service.hpp"

namespace fraudcc {

struct LoadOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t concurrency = 1;
  double duration_s = 3.0;
  double warmup_s = 0.5;
  std::vector<std::string> accounts;  // looked up in a seeded random order
  std::uint64_t seed = 1;
};

/// Called from worker threads for every measured response.
using ResponseObserver =
    std::function<void(std::string_view account, int status, const std::string& body)>;

struct LoadResult {
  std::size_t concurrency = 0;
  std::size_t requests = 0;
  std::size_t errors = 0;  // transport failures and non-200 statuses
  double elapsed_s = 0.0;
  double qps = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double p99_ms = 0.0;
  double mean_ms = 0.0;
};

/// Closed-loop load: each worker keeps one keep-alive connection and sends
/// the next request as soon as the previous one returns.
LoadResult run_load(const LoadOptions& options, const ResponseObserver& observer = {});

/// Nearest-rank percentile of an ascending sample; 0 when empty.
double nearest_rank(const std::vector<double>& sorted, double q);

struct BenchOptions {
  std::vector<std::size_t> concurrency{1, 8};
  double duration_s = 3.0;
  double warmup_s = 0.5;
  std::size_t sample_accounts = 10000;
  std::uint64_t seed = 1;
  bool idle_priority_recompute = true;
};

struct BenchRow {
  std::string scenario;  // no_bkgrd_cc | bkgrd_cc
  LoadResult result;
  std::uint64_t recomputes = 0;  // completed during the measured run
};

/// Accounts to query: a deterministic sample of the published table.
std::vector<std::string> sample_accounts(const ScoreTable& table, std::size_t n, std::uint64_t seed);

/// Runs both scenarios against a listening in-process service. In the
/// background scenario a thread recomputes back to back for the whole run.
std::vector<BenchRow> run_bench(RiskService& service, int port, const BenchOptions& options);

/// Same scenarios against a service in another process; the background
/// scenario drives POST /admin/recompute in a loop.
std::vector<BenchRow> run_bench_external(const std::string& host, int port,
                                         std::vector<std::string> accounts,
                                         const BenchOptions& options);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace fraudcc
