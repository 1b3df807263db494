#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraudcc/bench_driver.hpp"
#include "fraudcc/components.hpp"
#include "fraudcc/config.hpp"
#include "fraudcc/evaluation.hpp"
#include "fraudcc/generator.hpp"
#include "fraudcc/pipeline.hpp"
#include "fraudcc/risk_service.hpp"
#include "fraudcc/schema.hpp"

namespace fraudcc::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string run_dir;
  std::string out_root = "runs";
  bool parallel = false;
  bool strict = false;

  std::optional<std::int64_t> store_window_s;
  std::optional<std::int64_t> effective_window_s;
  std::optional<std::int64_t> recency_days;
  std::optional<std::size_t> threshold;
  std::optional<std::int64_t> interval_s;
  std::optional<int> port;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> normal_accounts;

  std::string data;
  std::string events;
  bool snapshot = false;
  std::vector<std::size_t> concurrency;
  std::optional<double> duration_s;
  std::string external;
  std::optional<double> replay_rate;
  std::vector<std::int64_t> windows;
  std::vector<std::size_t> thresholds;
  std::string manifest;
};

// Flags whose values are paths; recorded absolute so a manifest replays
// from any working directory.
bool is_path_flag(std::string_view flag) {
  return flag == "--config" || flag == "--data" || flag == "--events";
}

std::vector<std::string> absolutize(std::vector<std::string> args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string& a = args[i];
    const auto eq = a.find('=');
    if (eq != std::string::npos && is_path_flag(std::string_view(a).substr(0, eq))) {
      a = a.substr(0, eq + 1) + fs::absolute(a.substr(eq + 1)).lexically_normal().string();
    } else if (is_path_flag(a) && i + 1 < args.size()) {
      args[i + 1] = fs::absolute(args[i + 1]).lexically_normal().string();
      ++i;
    }
  }
  return args;
}

// Drops flags that choose where outputs go; they are not part of a run's
// identity.
std::vector<std::string> replayable_args(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--run-dir" || a == "--out-root") {
      ++i;
      continue;
    }
    if (a.rfind("--run-dir=", 0) == 0 || a.rfind("--out-root=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

AppConfig resolve_config(const Options& o) {
  AppConfig c = o.config.empty() ? config_from_json(nlohmann::json::object()) : load_config(o.config);
  WindowConfig& w = c.service.window;
  if (o.store_window_s) w.store_window_s = *o.store_window_s;
  if (o.effective_window_s) w.effective_window_s = *o.effective_window_s;
  if (o.recency_days) w.recency_days = *o.recency_days;
  if (o.threshold) c.service.cc_size_threshold = *o.threshold;
  if (o.interval_s) c.service.recompute_interval_s = *o.interval_s;
  if (o.port) c.service.port = *o.port;
  if (o.seed) c.campaign.seed = *o.seed;
  if (o.normal_accounts) c.campaign.n_normal_accounts = *o.normal_accounts;
  if (!o.concurrency.empty()) c.bench.concurrency = o.concurrency;
  if (o.duration_s) c.bench.duration_s = *o.duration_s;
  if (!o.windows.empty()) c.sweep_windows = o.windows;
  if (!o.thresholds.empty()) c.sweep_thresholds = o.thresholds;
  if (o.parallel) {
    c.parallel = true;
    c.service.exec = Exec::Parallel;
  }
  c.service.validate();
  c.campaign.validate();
  return c;
}

std::string compact_stamp() {
  std::string s = format_iso8601(wall_clock_now());
  std::string out;
  for (char ch : s)
    if (ch != '-' && ch != ':') out.push_back(ch);
  return out;
}

class Run {
 public:
  Run(const Options& o, std::string subcommand, std::uint64_t seed, const AppConfig& config,
      const std::vector<std::string>& args)
      : seed_(seed) {
    if (!o.run_dir.empty()) {
      dir_ = o.run_dir;
    } else {
      const std::string base = compact_stamp() + "_seed" + std::to_string(seed) + "_" + subcommand;
      dir_ = fs::path(o.out_root) / base;
      for (int n = 2; fs::exists(dir_); ++n) dir_ = fs::path(o.out_root) / (base + "_" + std::to_string(n));
    }
    fs::create_directories(dir_);
    manifest_["subcommand"] = subcommand;
    manifest_["args"] = replayable_args(args);
    manifest_["config"] = to_json(config);
    manifest_["seed"] = seed;
    manifest_["inputs"] = nlohmann::ordered_json::object();
    manifest_["outputs"] = nlohmann::ordered_json::array();
    manifest_["started_at"] = format_iso8601(wall_clock_now());
  }

  const fs::path& dir() const { return dir_; }
  nlohmann::ordered_json& manifest() { return manifest_; }

  void input(const std::string& name, const std::string& path) { manifest_["inputs"][name] = path; }

  std::ofstream output(const std::string& name) {
    manifest_["outputs"].push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
    return out;
  }

  template <typename F>
  auto stage(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      timings_[name] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      finish();
    } else {
      auto r = f();
      finish();
      return r;
    }
  }

  void write_manifest() {
    manifest_["timings_ms"] = timings_;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << manifest_.dump(2) << '\n';
  }

 private:
  std::uint64_t seed_;
  fs::path dir_;
  nlohmann::ordered_json manifest_;
  nlohmann::ordered_json timings_ = nlohmann::ordered_json::object();
};

void warn_rejects(const LoadSummary& s, bool strict) {
  for (const auto& [name, report] : s.jobs) {
    if (report.rejected.empty()) continue;
    std::cerr << "warning: " << name << " rejected " << report.rejected.size() << " of "
              << report.records_read << " records (first at line " << report.rejected.front().line
              << ": " << report.rejected.front().reason << ")\n";
  }
  if (strict && !s.total.rejected.empty()) throw nlohmann::json::other_error::create(0, "rejected records under --strict", nullptr);
}

nlohmann::ordered_json report_json(const LoadReport& r) {
  nlohmann::ordered_json j;
  j["records_read"] = r.records_read;
  j["vertices_upserted"] = r.vertices_upserted;
  j["edges_inserted"] = r.edges_inserted;
  auto& rej = j["rejected"] = nlohmann::ordered_json::array();
  for (const auto& x : r.rejected) rej.push_back({{"line", x.line}, {"reason", x.reason}});
  return j;
}

nlohmann::ordered_json summary_json(const LoadSummary& s) {
  nlohmann::ordered_json j;
  for (const auto& [name, report] : s.jobs) j[name] = report_json(report);
  return j;
}

nlohmann::ordered_json pr_json(const PrecisionRecall& pr) {
  return {{"precision", pr.precision}, {"recall", pr.recall}, {"f1", pr.f1},
          {"tp", pr.tp},               {"fp", pr.fp},         {"fn", pr.fn}};
}

fs::path require_data(const Options& o) {
  if (o.data.empty()) throw std::invalid_argument("--data is required");
  return o.data;
}

EventParseResult load_events(const fs::path& path, const AppConfig& c) {
  EventParseOptions options;
  options.reorder_buffer = c.reorder_buffer;
  if (path.extension() == ".csv") options.format = SourceFormat::Csv;
  auto parsed = read_events(path, options);
  if (parsed.skipped > 0 || parsed.dropped_late > 0) {
    std::cerr << "warning: " << parsed.skipped << " unparseable and " << parsed.dropped_late
              << " late events skipped\n";
  }
  if (parsed.events.empty() && parsed.records_read > 0)
    throw nlohmann::json::other_error::create(0, "no parseable events in " + path.string(), nullptr);
  return parsed;
}

// --- subcommands ----------------------------------------------------------

int cmd_generate(const Options& o, const AppConfig& c, const std::vector<std::string>& args) {
  Run run(o, "generate", c.campaign.seed, c, args);
  const Campaign campaign = run.stage("generate", [&] { return generate(c.campaign); });
  run.stage("write", [&] { write_campaign(campaign, run.dir()); });
  for (const char* f : {"orders.jsonl", "devices.csv", "referrals.csv", "events.jsonl", "ground_truth.jsonl"})
    run.manifest()["outputs"].push_back(f);
  run.manifest()["counts"] = {{"accounts", campaign.accounts.size()},
                              {"referrals", campaign.referrals.size()},
                              {"orders", campaign.orders.size()},
                              {"events", campaign.events.size()},
                              {"fraud_accounts", campaign.truth.fraud_accounts.size()}};
  run.write_manifest();
  std::cout << run.dir().string() << '\n';
  return kOk;
}

int cmd_load(const Options& o, const AppConfig& c, const std::vector<std::string>& args) {
  const fs::path data = require_data(o);
  Run run(o, "load", 0, c, args);
  run.input("data", data.string());
  PropertyGraph g = register_schema(incentive_campaign_schema());
  const LoadSummary summary = run.stage("load", [&] { return load_logs(g, c.jobs, data); });
  warn_rejects(summary, o.strict);
  {
    auto out = run.output("load_report.json");
    out << summary_json(summary).dump(2) << '\n';
  }
  if (o.snapshot) {
    auto out = run.output("graph_snapshot.jsonl");
    run.stage("snapshot", [&] { export_snapshot(g, out); });
  }
  run.manifest()["counts"] = {{"vertices", g.vertex_count()}, {"edges", g.edge_count()}};
  run.write_manifest();
  std::cout << run.dir().string() << '\n';
  return kOk;
}

int cmd_build_edges(const Options& o, const AppConfig& c, const std::vector<std::string>& args) {
  if (o.events.empty()) throw std::invalid_argument("--events is required");
  Run run(o, "build-edges", 0, c, args);
  run.input("events", o.events);
  const auto parsed = run.stage("parse", [&] { return load_events(o.events, c); });
  const Exec exec = c.parallel ? Exec::Parallel : Exec::Serial;
  const auto edges = run.stage("sweep", [&] {
    return build_cocontext_edges(parsed.events, c.selector, c.service.window.store_window_s, exec);
  });
  {
    auto out = run.output("edges.jsonl");
    for (const auto& e : edges) {
      nlohmann::ordered_json j;
      j["a"] = e.a;
      j["b"] = e.b;
      j["context_type"] = e.context_type;
      j["context_value"] = e.context_value;
      j["created_at"] = e.created_at.seconds;
      j["delta"] = e.delta;
      out << j.dump() << '\n';
    }
  }
  run.manifest()["counts"] = {{"records_read", parsed.records_read},
                              {"events", parsed.events.size()},
                              {"skipped", parsed.skipped},
                              {"dropped_late", parsed.dropped_late},
                              {"edges", edges.size()}};
  run.write_manifest();
  std::cout << run.dir().string() << '\n';
  return kOk;
}

int cmd_detect(const Options& o, const AppConfig& c, const std::vector<std::string>& args,
               bool profiles_only) {
  const fs::path data = require_data(o);
  Run run(o, profiles_only ? "profile" : "detect", 0, c, args);
  run.input("data", data.string());
  const Exec exec = c.parallel ? Exec::Parallel : Exec::Serial;
  PropertyGraph g = register_schema(incentive_campaign_schema());
  const LoadSummary summary = run.stage("load", [&] { return load_logs(g, c.jobs, data); });
  warn_rejects(summary, o.strict);
  if (profiles_only) {
    const auto labeling = run.stage("dag_cc", [&] { return dag_cc(g, names::kInvite, exec); });
    const auto profiles = run.stage("profile", [&] { return profile_components(g, labeling, exec); });
    auto out = run.output("profiles.csv");
    write_profile_csv(out, profiles);
    run.manifest()["counts"] = {{"components", profiles.size()}};
  } else {
    const Detection d = run.stage("detect", [&] { return detect(g, c.rules, exec); });
    {
      auto out = run.output("rules.jsonl");
      write_rule_report(out, d.outcomes);
    }
    {
      auto out = run.output("profiles.csv");
      write_profile_csv(out, d.profiles);
    }
    nlohmann::ordered_json counts;
    counts["components"] = d.profiles.size();
    for (const auto& r : d.outcomes) counts[std::string(1, r.rule_id)] = r.accounts.size();
    run.manifest()["counts"] = counts;
  }
  run.write_manifest();
  std::cout << run.dir().string() << '\n';
  return kOk;
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

int cmd_serve(const Options& o, const AppConfig& c, const std::vector<std::string>& args) {
  if (o.events.empty()) throw std::invalid_argument("--events is required");
  Run run(o, "serve", 0, c, args);
  run.input("events", o.events);
  auto parsed = run.stage("parse", [&] { return load_events(o.events, c); });
  auto graph = std::make_shared<SharedGraph>(register_schema(cocontext_schema(c.selector.context_type)));

  std::unique_ptr<EventStreamIngestor> ingestor;
  if (o.replay_rate) {
    ingestor = std::make_unique<EventStreamIngestor>(graph, c.selector, c.service.window.store_window_s);
  } else {
    const Exec exec = c.parallel ? Exec::Parallel : Exec::Serial;
    run.stage("build", [&] {
      const auto edges = build_cocontext_edges(parsed.events, c.selector, c.service.window.store_window_s, exec);
      graph->write([&](PropertyGraph& g) { materialize(g, edges); });
    });
  }

  RiskService service(graph, c.service);
  run.stage("initial_recompute", [&] { service.recompute_now(); });
  const int port = service.listen();
  service.start_scheduler();
  if (ingestor) ingestor->start(std::move(parsed.events), *o.replay_rate);
  run.manifest()["port"] = port;
  run.write_manifest();
  std::cout << "listening on " << c.service.host << ':' << port << std::endl;

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const auto until = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(o.duration_s.value_or(1e9)));
  while (!g_interrupted && std::chrono::steady_clock::now() < until) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  if (ingestor) ingestor->stop();
  service.stop();
  return kOk;
}

int cmd_bench(const Options& o, const AppConfig& c, const std::vector<std::string>& args) {
  if (o.events.empty()) throw std::invalid_argument("--events is required");
  Run run(o, "bench", c.bench.seed, c, args);
  run.input("events", o.events);
  const auto parsed = run.stage("parse", [&] { return load_events(o.events, c); });
  const std::size_t max_conc = *std::max_element(c.bench.concurrency.begin(), c.bench.concurrency.end());
  const unsigned cores = std::thread::hardware_concurrency();
  run.manifest()["environment"] = {{"hardware_concurrency", cores},
                                   {"under_provisioned", cores < max_conc + 1}};

  std::vector<BenchRow> rows;
  if (!o.external.empty()) {
    const auto colon = o.external.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("--external expects host:port");
    std::set<std::string> accounts;
    for (const auto& e : parsed.events) accounts.insert(e.account);
    rows = run.stage("bench", [&] {
      return run_bench_external(o.external.substr(0, colon), std::stoi(o.external.substr(colon + 1)),
                                {accounts.begin(), accounts.end()}, c.bench);
    });
    run.manifest()["mode"] = "external";
  } else {
    auto graph = std::make_shared<SharedGraph>(register_schema(cocontext_schema(c.selector.context_type)));
    const Exec exec = c.parallel ? Exec::Parallel : Exec::Serial;
    run.stage("build", [&] {
      const auto edges = build_cocontext_edges(parsed.events, c.selector, c.service.window.store_window_s, exec);
      graph->write([&](PropertyGraph& g) { materialize(g, edges); });
    });
    ServiceConfig sc = c.service;
    if (!o.port) sc.port = 0;
    RiskService service(graph, sc);
    run.stage("initial_recompute", [&] { service.recompute_now(); });
    const int port = service.listen();
    BenchOptions bo = c.bench;
    bo.idle_priority_recompute = sc.idle_priority_recompute;
    rows = run.stage("bench", [&] { return run_bench(service, port, bo); });
    service.stop();
    run.manifest()["mode"] = "in_process";
  }
  {
    auto out = run.output("bench.csv");
    write_bench_csv(out, rows);
  }
  write_bench_csv(std::cout, rows);
  run.write_manifest();
  std::cout << run.dir().string() << '\n';
  return kOk;
}

int cmd_evaluate(const Options& o, const AppConfig& c, const std::vector<std::string>& args) {
  const fs::path data = require_data(o);
  Run run(o, "evaluate", 0, c, args);
  run.input("data", data.string());
  const Exec exec = c.parallel ? Exec::Parallel : Exec::Serial;
  PropertyGraph g = register_schema(incentive_campaign_schema());
  const LoadSummary summary = run.stage("load", [&] { return load_logs(g, c.jobs, data); });
  warn_rejects(summary, o.strict);
  const Detection d = run.stage("detect", [&] { return detect(g, c.rules, exec); });
  const auto parsed = run.stage("parse_events", [&] { return load_events(data / "events.jsonl", c); });
  const PropertyGraph ip = run.stage("build_edges", [&] {
    return build_cocontext_graph(parsed.events, c.selector, c.service.window.store_window_s, exec);
  });
  const ScoreTable table = run.stage("recompute", [&] {
    return score_snapshot(ip, c.service.window, c.service.cc_size_threshold, c.selector.context_type, exec);
  });
  const GroundTruth truth = read_ground_truth(data / "ground_truth.jsonl");

  const auto flagged = flagged_accounts(d.outcomes, table);
  nlohmann::ordered_json j;
  j["flagged"] = flagged.size();
  j["truth"] = truth.fraud_accounts.size();
  j["combined"] = pr_json(precision_recall(flagged, truth.fraud_accounts));
  j["cc_size"] = pr_json(precision_recall(risky_accounts(table), truth.fraud_accounts));
  for (const auto& r : d.outcomes)
    j["rules"][std::string(1, r.rule_id)] = pr_json(precision_recall(r.accounts, truth.fraud_accounts));
  for (const auto& grp : truth.groups) {
    std::size_t hit = 0;
    for (const auto& a : grp.accounts) hit += flagged.count(a);
    nlohmann::ordered_json gj;
    gj["group"] = grp.id;
    gj["pattern"] = pattern_name(grp.pattern);
    gj["accounts"] = grp.accounts.size();
    gj["recovered"] = hit;
    j["groups"].push_back(gj);
  }
  {
    auto out = run.output("evaluation.json");
    out << j.dump(2) << '\n';
  }
  run.write_manifest();
  std::cout << j["combined"].dump() << '\n' << run.dir().string() << '\n';
  return kOk;
}

int cmd_sweep(const Options& o, const AppConfig& c, const std::vector<std::string>& args) {
  Run run(o, "sweep", c.campaign.seed, c, args);
  const Campaign campaign = run.stage("generate", [&] { return generate(c.campaign); });
  SweepOptions so;
  so.windows = c.sweep_windows;
  so.thresholds = c.sweep_thresholds;
  so.recency_days = c.service.window.recency_days;
  so.rules = c.rules;
  so.selector = c.selector;
  so.exec = c.parallel ? Exec::Parallel : Exec::Serial;
  const auto rows = run.stage("sweep", [&] { return sweep(campaign, so); });
  {
    auto out = run.output("sweep.csv");
    write_sweep_csv(out, rows);
  }
  write_sweep_csv(std::cout, rows);
  run.write_manifest();
  std::cout << run.dir().string() << '\n';
  return kOk;
}

int cmd_rerun(const Options& o) {
  std::ifstream in(o.manifest);
  if (!in) throw IoError("cannot read manifest " + o.manifest);
  const auto m = nlohmann::json::parse(in);
  std::vector<std::string> args;
  const auto recorded = m.at("args").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    if (recorded[i] == "--config") {
      ++i;
      continue;
    }
    if (recorded[i].rfind("--config=", 0) == 0) continue;
    args.push_back(recorded[i]);
  }
  fs::path dir = o.run_dir;
  if (dir.empty()) {
    const std::string base = compact_stamp() + "_seed" + std::to_string(m.value("seed", 0ULL)) + "_rerun";
    dir = fs::path(o.out_root) / base;
    for (int n = 2; fs::exists(dir); ++n) dir = fs::path(o.out_root) / (base + "_" + std::to_string(n));
  }
  fs::create_directories(dir);
  const fs::path config = fs::absolute(dir / "replayed_config.json");
  {
    std::ofstream out(config);
    out << m.at("config").dump(2) << '\n';
  }
  args.push_back("--config");
  args.push_back(config.string());
  args.push_back("--run-dir");
  args.push_back(dir.string());
  return run(args);
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON configuration file");
  sub->add_option("--run-dir", o.run_dir, "write outputs here instead of a fresh run directory");
  sub->add_option("--out-root", o.out_root, "parent of generated run directories");
  sub->add_flag("--parallel", o.parallel, "use the OpenMP kernels");
}

void add_window(CLI::App* sub, Options& o) {
  sub->add_option("--store-window-s", o.store_window_s, "window used when building edges");
  sub->add_option("--effective-window-s", o.effective_window_s, "query-time delta cut");
  sub->add_option("--recency-days", o.recency_days, "query-time age cut");
}

}  // namespace

int run(std::vector<std::string> raw_args) {
  const std::vector<std::string> args = absolutize(raw_args);
  Options o;
  CLI::App app{"Collective-fraud detection: graph construction, component analytics, risk lookups"};
  app.require_subcommand(1);

  auto* generate_cmd = app.add_subcommand("generate", "write a labeled synthetic campaign");
  add_common(generate_cmd, o);
  generate_cmd->add_option("--seed", o.seed, "generator seed");
  generate_cmd->add_option("--normal-accounts", o.normal_accounts, "benign population size");

  auto* load_cmd = app.add_subcommand("load", "run the loading jobs over a log directory");
  add_common(load_cmd, o);
  load_cmd->add_option("--data", o.data, "directory holding the logs")->required();
  load_cmd->add_flag("--snapshot", o.snapshot, "also export the graph as canonical JSONL");
  load_cmd->add_flag("--strict", o.strict, "fail on any rejected record");

  auto* edges_cmd = app.add_subcommand("build-edges", "derive co-context edges from a risk-event log");
  add_common(edges_cmd, o);
  add_window(edges_cmd, o);
  edges_cmd->add_option("--events", o.events, "risk-event log (.jsonl or .csv)")->required();

  auto* detect_cmd = app.add_subcommand("detect", "load, label invitation components, profile, apply rules");
  add_common(detect_cmd, o);
  detect_cmd->add_option("--data", o.data, "directory holding the logs")->required();
  detect_cmd->add_flag("--strict", o.strict, "fail on any rejected record");

  auto* profile_cmd = app.add_subcommand("profile", "component statistics only");
  add_common(profile_cmd, o);
  profile_cmd->add_option("--data", o.data, "directory holding the logs")->required();
  profile_cmd->add_flag("--strict", o.strict, "fail on any rejected record");

  auto* serve_cmd = app.add_subcommand("serve", "serve risk lookups over HTTP");
  add_common(serve_cmd, o);
  add_window(serve_cmd, o);
  serve_cmd->add_option("--events", o.events, "risk-event log")->required();
  serve_cmd->add_option("--threshold", o.threshold, "component size marking an account risky");
  serve_cmd->add_option("--interval-s", o.interval_s, "seconds between background recomputes");
  serve_cmd->add_option("--port", o.port, "listen port, 0 for any");
  serve_cmd->add_option("--replay-rate", o.replay_rate, "stream events at this rate instead of bulk loading");
  serve_cmd->add_option("--duration-s", o.duration_s, "exit after this many seconds");

  auto* bench_cmd = app.add_subcommand("bench", "lookup latency and QPS with and without background recompute");
  add_common(bench_cmd, o);
  add_window(bench_cmd, o);
  bench_cmd->add_option("--events", o.events, "risk-event log")->required();
  bench_cmd->add_option("--threshold", o.threshold, "component size marking an account risky");
  bench_cmd->add_option("--port", o.port, "listen port for the in-process service");
  bench_cmd->add_option("--concurrency", o.concurrency, "client counts, e.g. 1,8")->delimiter(',');
  bench_cmd->add_option("--duration-s", o.duration_s, "measured seconds per level");
  bench_cmd->add_option("--external", o.external, "host:port of a running service");

  auto* eval_cmd = app.add_subcommand("evaluate", "score detections against the ground truth");
  add_common(eval_cmd, o);
  add_window(eval_cmd, o);
  eval_cmd->add_option("--data", o.data, "generated campaign directory")->required();
  eval_cmd->add_option("--threshold", o.threshold, "component size marking an account risky");
  eval_cmd->add_flag("--strict", o.strict, "fail on any rejected record");

  auto* sweep_cmd = app.add_subcommand("sweep", "precision/recall over windows and thresholds");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--seed", o.seed, "generator seed");
  sweep_cmd->add_option("--normal-accounts", o.normal_accounts, "benign population size");
  sweep_cmd->add_option("--recency-days", o.recency_days, "query-time age cut");
  sweep_cmd->add_option("--windows", o.windows, "effective windows in seconds")->delimiter(',');
  sweep_cmd->add_option("--thresholds", o.thresholds, "component size thresholds")->delimiter(',');

  auto* rerun_cmd = app.add_subcommand("rerun", "repeat the run recorded in a manifest");
  rerun_cmd->add_option("manifest", o.manifest, "manifest.json of an earlier run")->required();
  rerun_cmd->add_option("--run-dir", o.run_dir, "output directory");
  rerun_cmd->add_option("--out-root", o.out_root, "parent of generated run directories");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (rerun_cmd->parsed()) return cmd_rerun(o);
    const AppConfig c = resolve_config(o);
    if (generate_cmd->parsed()) return cmd_generate(o, c, args);
    if (load_cmd->parsed()) return cmd_load(o, c, args);
    if (edges_cmd->parsed()) return cmd_build_edges(o, c, args);
    if (detect_cmd->parsed()) return cmd_detect(o, c, args, false);
    if (profile_cmd->parsed()) return cmd_detect(o, c, args, true);
    if (serve_cmd->parsed()) return cmd_serve(o, c, args);
    if (bench_cmd->parsed()) return cmd_bench(o, c, args);
    if (eval_cmd->parsed()) return cmd_evaluate(o, c, args);
    if (sweep_cmd->parsed()) return cmd_sweep(o, c, args);
  } catch (const CycleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCycle;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace fraudcc::cli
