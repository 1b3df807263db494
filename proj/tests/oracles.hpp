#pragma once

// Slow reference computations the library is checked against. Nothing here
// calls into the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

/// Components by boolean transitive closure; each group as a sorted vector,
/// groups sorted. Vertices without edges are omitted.
inline std::vector<std::vector<int>> reachability_groups(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  std::vector<char> touched(n, 0);
  for (auto [a, b] : edges) {
    r[a][b] = r[b][a] = 1;
    touched[a] = touched[b] = 1;
  }
  for (int i = 0; i < n; ++i) r[i][i] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[i][k])
        for (int j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
  std::set<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    if (!touched[i]) continue;
    std::vector<int> g;
    for (int j = 0; j < n; ++j)
      if (r[i][j]) g.push_back(j);
    groups.insert(g);
  }
  return {groups.begin(), groups.end()};
}

/// Mean absolute difference over all ordered pairs divided by twice the mean.
inline double gini_pairwise(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double sum = 0, diff = 0;
  for (double a : x) {
    sum += a;
    for (double b : x) diff += std::fabs(a - b);
  }
  if (sum == 0) return 0.0;
  return diff / (2.0 * n * sum);
}

/// Longest directed path (in edges) by enumerating every path from every
/// vertex. Exponential; keep n small.
inline int longest_path(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> out(n);
  for (auto [a, b] : edges) out[a].push_back(b);
  int best = 0;
  std::vector<std::pair<int, int>> stack;  // (vertex, length)
  for (int s = 0; s < n; ++s) {
    stack.push_back({s, 0});
    while (!stack.empty()) {
      auto [v, len] = stack.back();
      stack.pop_back();
      best = std::max(best, len);
      for (int w : out[v]) stack.push_back({w, len + 1});
    }
  }
  return best;
}

struct Event {
  std::int64_t ts;
  std::string account;
  std::string context;
};

struct PairEdge {
  std::string a, b, context;
  std::int64_t created_at, delta;
  bool operator==(const PairEdge& o) const {
    return std::tie(a, b, context, created_at, delta) == std::tie(o.a, o.b, o.context, o.created_at, o.delta);
  }
};

/// For each event, scan back to the nearest earlier event on the same
/// context; link them when the accounts differ and the gap fits.
inline std::vector<PairEdge> adjacent_pairs(const std::vector<Event>& events, std::int64_t window) {
  std::vector<PairEdge> out;
  for (std::size_t j = 0; j < events.size(); ++j) {
    for (std::size_t i = j; i-- > 0;) {
      if (events[i].context != events[j].context) continue;
      const std::int64_t gap = events[j].ts - events[i].ts;
      if (events[i].account != events[j].account && gap <= window)
        out.push_back({events[i].account, events[j].account, events[j].context, events[j].ts, gap});
      break;
    }
  }
  return out;
}

/// Max-ancestor fixpoint: repeat label[v] = max(label[v], label[u]) over all
/// edges u->v until nothing changes. Roots seed with their rank.
inline std::vector<std::int64_t> max_fixpoint(int n, const std::vector<std::pair<int, int>>& edges,
                                              const std::vector<std::int64_t>& seed) {
  std::vector<std::int64_t> label = seed;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [u, v] : edges) {
      if (label[u] > label[v]) {
        label[v] = label[u];
        changed = true;
      }
    }
  }
  return label;
}

}  // namespace oracle
