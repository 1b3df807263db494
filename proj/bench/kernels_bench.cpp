// Serial reference vs OpenMP kernels on generated inputs.
#include <benchmark/benchmark.h>

#include <random>

#include "fraudcc/cocontext.hpp"
#include "fraudcc/components.hpp"
#include "fraudcc/generator.hpp"
#include "fraudcc/pipeline.hpp"
#include "fraudcc/profile.hpp"
#include "fraudcc/schema.hpp"

using namespace fraudcc;

namespace {

std::vector<kernels::Edge> random_edges(std::uint32_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
  std::vector<kernels::Edge> out(m);
  for (auto& e : out) e = {pick(rng), pick(rng)};
  return out;
}

// forward edges only, so the graph is acyclic
std::vector<kernels::Edge> random_forest(std::uint32_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<kernels::Edge> out;
  for (std::uint32_t v = 1; v < n; ++v)
    if (rng() % 5) out.emplace_back(static_cast<std::uint32_t>(rng() % v), v);
  return out;
}

const Campaign& campaign(std::size_t normal) {
  static std::map<std::size_t, Campaign> cache;
  auto it = cache.find(normal);
  if (it == cache.end()) {
    CampaignSpec spec;
    spec.seed = 4;
    spec.n_normal_accounts = normal;
    spec.groups = default_fraud_groups();
    spec.normal.collision_rate = 0.5;
    it = cache.emplace(normal, generate(spec)).first;
  }
  return it->second;
}

void BM_Components(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto edges = random_edges(n, n, 1);
  for (auto _ : state) {
    auto roots = exec == Exec::Parallel ? kernels::components_parallel(n, edges) : kernels::components_serial(n, edges);
    benchmark::DoNotOptimize(roots.data());
  }
  state.SetItemsProcessed(state.iterations() * (n + edges.size()));
}

void BM_PropagateMax(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto edges = random_forest(n, 2);
  std::vector<std::int64_t> seed(n, kernels::kNoRank);
  for (std::uint32_t v = 0; v < n; v += 7) seed[v] = v;
  for (auto _ : state) {
    auto ranks = exec == Exec::Parallel ? kernels::propagate_max_parallel(n, edges, seed)
                                        : kernels::propagate_max_serial(n, edges, seed);
    benchmark::DoNotOptimize(ranks.data());
  }
  state.SetItemsProcessed(state.iterations() * (n + edges.size()));
}

void BM_CoContextSweep(benchmark::State& state, Exec exec) {
  const auto& c = campaign(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto edges = build_cocontext_edges(c.events, ContextSelector{}, 3600, exec);
    benchmark::DoNotOptimize(edges.data());
  }
  state.SetItemsProcessed(state.iterations() * c.events.size());
}

void BM_Profile(benchmark::State& state, Exec exec) {
  const auto& c = campaign(static_cast<std::size_t>(state.range(0)));
  auto g = register_schema(incentive_campaign_schema());
  load_campaign(g, c);
  const auto labeling = dag_cc(g);
  for (auto _ : state) {
    auto profiles = profile_components(g, labeling, exec);
    benchmark::DoNotOptimize(profiles.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Components, serial, Exec::Serial)->Range(1 << 12, 1 << 18);
BENCHMARK_CAPTURE(BM_Components, parallel, Exec::Parallel)->Range(1 << 12, 1 << 18);
BENCHMARK_CAPTURE(BM_PropagateMax, serial, Exec::Serial)->Range(1 << 12, 1 << 18);
BENCHMARK_CAPTURE(BM_PropagateMax, parallel, Exec::Parallel)->Range(1 << 12, 1 << 18);
BENCHMARK_CAPTURE(BM_CoContextSweep, serial, Exec::Serial)->Arg(10000)->Arg(50000);
BENCHMARK_CAPTURE(BM_CoContextSweep, parallel, Exec::Parallel)->Arg(10000)->Arg(50000);
BENCHMARK_CAPTURE(BM_Profile, serial, Exec::Serial)->Arg(10000)->Arg(50000);
BENCHMARK_CAPTURE(BM_Profile, parallel, Exec::Parallel)->Arg(10000)->Arg(50000);

BENCHMARK_MAIN();
