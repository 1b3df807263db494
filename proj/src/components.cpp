#include "fraudcc/components.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

namespace fraudcc {

std::size_t ComponentLabeling::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](VertexId l) { return l != kNoLabel; }));
}

std::map<VertexId, std::vector<VertexId>> ComponentLabeling::groups() const {
  std::map<VertexId, std::vector<VertexId>> out;
  for (VertexId v = 0; v < labels.size(); ++v) {
    if (labels[v] != kNoLabel) out[labels[v]].push_back(v);
  }
  return out;
}

namespace kernels {

std::vector<std::uint32_t> components_serial(std::uint32_t n, std::span<const Edge> edges) {
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [u, v] : edges) {
    std::uint32_t ru = find(u);
    std::uint32_t rv = find(v);
    if (ru == rv) continue;
    if (ru < rv) std::swap(ru, rv);
    parent[ru] = rv;  // the smaller index becomes the root
  }
  for (std::uint32_t i = 0; i < n; ++i) parent[i] = find(i);
  return parent;
}

std::vector<std::uint32_t> components_parallel(std::uint32_t n, std::span<const Edge> edges) {
  // Lock-free union-find: a root is only ever hooked under a smaller index,
  // so parent[x] <= x holds throughout and roots are component minima.
  std::vector<std::atomic<std::uint32_t>> parent(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    parent[i].store(static_cast<std::uint32_t>(i), std::memory_order_relaxed);
  }
  auto find = [&](std::uint32_t x) {
    while (true) {
      std::uint32_t p = parent[x].load(std::memory_order_relaxed);
      if (p == x) return x;
      std::uint32_t gp = parent[p].load(std::memory_order_relaxed);
      if (gp != p) parent[x].compare_exchange_weak(p, gp, std::memory_order_relaxed);
      x = gp;
    }
  };
  const auto m = static_cast<std::int64_t>(edges.size());
#pragma omp parallel for schedule(dynamic, 4096)
  for (std::int64_t i = 0; i < m; ++i) {
    std::uint32_t u = edges[i].first;
    std::uint32_t v = edges[i].second;
    while (true) {
      u = find(u);
      v = find(v);
      if (u == v) break;
      if (u < v) std::swap(u, v);
      std::uint32_t expected = u;
      if (parent[u].compare_exchange_strong(expected, v, std::memory_order_acq_rel)) break;
    }
  }
  std::vector<std::uint32_t> root(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    root[i] = find(static_cast<std::uint32_t>(i));
  }
  return root;
}

namespace {

struct Csr {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> targets;
};

Csr build_csr(std::uint32_t n, std::span<const Edge> edges, bool reverse) {
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++csr.offsets[(reverse ? e.second : e.first) + 1];
  std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
  csr.targets.resize(edges.size());
  std::vector<std::uint32_t> fill(csr.offsets.begin(), csr.offsets.end() - 1);
  for (const auto& e : edges) {
    const auto src = reverse ? e.second : e.first;
    const auto dst = reverse ? e.first : e.second;
    csr.targets[fill[src]++] = dst;
  }
  return csr;
}

/// Kahn's algorithm. Returns vertices grouped by level (longest distance
/// from a source); throws CycleAt when some vertices never drain.
std::vector<std::vector<std::uint32_t>> topo_levels(std::uint32_t n, const Csr& out,
                                                    const Csr& in) {
  std::vector<std::uint32_t> indeg(n);
  for (std::uint32_t v = 0; v < n; ++v) indeg[v] = in.offsets[v + 1] - in.offsets[v];
  std::vector<std::vector<std::uint32_t>> levels;
  std::vector<std::uint32_t> frontier;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (indeg[v] == 0) frontier.push_back(v);
  }
  std::size_t drained = 0;
  while (!frontier.empty()) {
    drained += frontier.size();
    std::vector<std::uint32_t> next;
    for (std::uint32_t v : frontier) {
      for (auto i = out.offsets[v]; i < out.offsets[v + 1]; ++i) {
        if (--indeg[out.targets[i]] == 0) next.push_back(out.targets[i]);
      }
    }
    levels.push_back(std::move(frontier));
    frontier = std::move(next);
  }
  if (drained != n) {
    // Every undrained vertex keeps an undrained predecessor; walking
    // predecessors must revisit a vertex, and that vertex is on a cycle.
    std::uint32_t v = 0;
    while (indeg[v] == 0) ++v;
    std::vector<char> seen(n, 0);
    while (!seen[v]) {
      seen[v] = 1;
      for (auto i = in.offsets[v]; i < in.offsets[v + 1]; ++i) {
        if (indeg[in.targets[i]] != 0) {
          v = in.targets[i];
          break;
        }
      }
    }
    throw CycleAt{v};
  }
  return levels;
}

}  // namespace

std::vector<std::int64_t> propagate_max_serial(std::uint32_t n, std::span<const Edge> edges,
                                               std::span<const std::int64_t> seed) {
  const Csr out = build_csr(n, edges, false);
  const Csr in = build_csr(n, edges, true);
  const auto levels = topo_levels(n, out, in);
  std::vector<std::int64_t> rank(seed.begin(), seed.end());
  for (const auto& level : levels) {
    for (std::uint32_t v : level) {
      for (auto i = out.offsets[v]; i < out.offsets[v + 1]; ++i) {
        auto& r = rank[out.targets[i]];
        r = std::max(r, rank[v]);
      }
    }
  }
  return rank;
}

std::vector<std::int64_t> propagate_max_parallel(std::uint32_t n, std::span<const Edge> edges,
                                                 std::span<const std::int64_t> seed) {
  const Csr out = build_csr(n, edges, false);
  const Csr in = build_csr(n, edges, true);
  const auto levels = topo_levels(n, out, in);
  std::vector<std::int64_t> rank(seed.begin(), seed.end());
  // All parents of a level-k vertex sit on levels < k, so a level can pull
  // in parallel once the previous ones are final.
  for (const auto& level : levels) {
    const auto size = static_cast<std::int64_t>(level.size());
#pragma omp parallel for schedule(static) if (size > 4096)
    for (std::int64_t j = 0; j < size; ++j) {
      const std::uint32_t v = level[j];
      std::int64_t best = rank[v];
      for (auto i = in.offsets[v]; i < in.offsets[v + 1]; ++i) best = std::max(best, rank[in.targets[i]]);
      rank[v] = best;
    }
  }
  return rank;
}

}  // namespace kernels

ComponentLabeling dag_cc(const PropertyGraph& g, std::string_view edge_type, Exec exec,
                         Timestamp computed_at) {
  const TypeId type = g.require_edge_type(edge_type);
  const auto n = static_cast<std::uint32_t>(g.vertex_count());

  std::vector<kernels::Edge> edges;
  edges.reserve(g.edge_count(type));
  std::vector<std::uint32_t> indeg(n, 0), outdeg(n, 0);
  for (EdgeId e : g.edges_of_type(type)) {
    const auto& ends = g.edge(e);
    edges.emplace_back(ends.from, ends.to);
    ++outdeg[ends.from];
    ++indeg[ends.to];
  }

  std::vector<VertexId> roots;
  for (VertexId v = 0; v < n; ++v) {
    if (indeg[v] == 0 && outdeg[v] > 0) roots.push_back(v);
  }
  std::sort(roots.begin(), roots.end(),
            [&](VertexId a, VertexId b) { return g.key(a) < g.key(b); });
  std::vector<std::int64_t> seed(n, kernels::kNoRank);
  for (std::size_t r = 0; r < roots.size(); ++r) seed[roots[r]] = static_cast<std::int64_t>(r);

  std::vector<std::int64_t> rank;
  try {
    rank = exec == Exec::Parallel ? kernels::propagate_max_parallel(n, edges, seed)
                                  : kernels::propagate_max_serial(n, edges, seed);
  } catch (const kernels::CycleAt& c) {
    throw CycleError(g.key(c.vertex));
  }

  ComponentLabeling out;
  out.computed_at = computed_at;
  out.labels.assign(n, kNoLabel);
  for (VertexId v = 0; v < n; ++v) {
    if (rank[v] != kernels::kNoRank) out.labels[v] = roots[static_cast<std::size_t>(rank[v])];
  }
  return out;
}

ComponentLabeling undirected_cc(const PropertyGraph& g, std::string_view edge_type,
                                const EdgePredicate& predicate, Exec exec, Timestamp computed_at) {
  const TypeId type = g.require_edge_type(edge_type);
  const auto n = static_cast<std::uint32_t>(g.vertex_count());

  std::vector<EdgeId> accepted;
  accepted.reserve(g.edge_count(type));
  for (EdgeId e : g.edges_of_type(type)) {
    if (!predicate || predicate(g, e)) accepted.push_back(e);
  }

  // Dense ids in key order, so the kernel's minimum-index root is the
  // minimum-key member.
  std::vector<char> touched(n, 0);
  for (EdgeId e : accepted) {
    touched[g.edge(e).from] = 1;
    touched[g.edge(e).to] = 1;
  }
  std::vector<VertexId> members;
  for (VertexId v = 0; v < n; ++v) {
    if (touched[v]) members.push_back(v);
  }
  std::sort(members.begin(), members.end(), [&](VertexId a, VertexId b) {
    const auto& ka = g.key(a);
    const auto& kb = g.key(b);
    return ka != kb ? ka < kb : a < b;
  });
  std::vector<std::uint32_t> dense(n, 0);
  for (std::uint32_t i = 0; i < members.size(); ++i) dense[members[i]] = i;

  std::vector<kernels::Edge> edges;
  edges.reserve(accepted.size());
  for (EdgeId e : accepted) edges.emplace_back(dense[g.edge(e).from], dense[g.edge(e).to]);

  const auto m = static_cast<std::uint32_t>(members.size());
  const auto root = exec == Exec::Parallel ? kernels::components_parallel(m, edges)
                                           : kernels::components_serial(m, edges);

  ComponentLabeling out;
  out.computed_at = computed_at;
  out.labels.assign(n, kNoLabel);
  for (std::uint32_t i = 0; i < m; ++i) out.labels[members[i]] = members[root[i]];
  return out;
}

}  // namespace fraudcc
