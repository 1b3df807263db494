#include "fraudcc/cocontext.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace fraudcc {

const std::string* ContextSelector::select(const RiskEvent& e) const {
  if (field == "ip") return e.ip.empty() ? nullptr : &e.ip;
  if (field == "event_type") return e.event_type.empty() ? nullptr : &e.event_type;
  auto it = e.extra.find(field);
  if (it == e.extra.end() || it->second.empty()) return nullptr;
  return &it->second;
}

void WindowConfig::validate() const {
  if (store_window_s < 1) throw std::invalid_argument("store_window_s must be >= 1");
  if (effective_window_s < 1 || effective_window_s > store_window_s) {
    throw std::invalid_argument("effective_window_s must lie in [1, store_window_s]");
  }
  if (recency_days < 1) throw std::invalid_argument("recency_days must be >= 1");
}

WindowConfig WindowConfig::unfiltered(std::int64_t store_window_s) {
  // Large enough that now - recency never excludes anything, small enough
  // that the subtraction cannot overflow.
  return WindowConfig{store_window_s, store_window_s, std::numeric_limits<std::int32_t>::max()};
}

CoContextBuilder::CoContextBuilder(ContextSelector selector, std::int64_t window_s)
    : selector_(std::move(selector)), window_s_(window_s) {
  if (window_s_ < 0) throw std::invalid_argument("window must be >= 0");
}

std::optional<CoContextEdge> CoContextBuilder::push(const RiskEvent& e) {
  if (previous_ts_ && e.ts < *previous_ts_) {
    throw std::invalid_argument("co-context sweep needs events in non-decreasing ts order");
  }
  previous_ts_ = e.ts;
  const std::string* value = selector_.select(e);
  if (!value) return std::nullopt;

  auto [it, inserted] = last_.try_emplace(*value, LastSeen{e.account, e.ts});
  if (inserted) return std::nullopt;

  LastSeen& last = it->second;
  std::optional<CoContextEdge> edge;
  const std::int64_t gap = e.ts.seconds - last.ts.seconds;
  if (last.account != e.account && gap <= window_s_) {
    edge = CoContextEdge{last.account, e.account, selector_.context_type, *value, e.ts, gap};
  }
  // Same-account repeats refresh the slot too.
  last.account = e.account;
  last.ts = e.ts;
  return edge;
}

namespace {

std::vector<CoContextEdge> sweep_serial(std::span<const RiskEvent> events,
                                        const ContextSelector& selector, std::int64_t window_s) {
  CoContextBuilder builder(selector, window_s);
  std::vector<CoContextEdge> out;
  for (const auto& e : events) {
    if (auto edge = builder.push(e)) out.push_back(std::move(*edge));
  }
  return out;
}

std::vector<CoContextEdge> sweep_parallel(std::span<const RiskEvent> events,
                                          const ContextSelector& selector, std::int64_t window_s) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].ts < events[i - 1].ts) {
      throw std::invalid_argument("co-context sweep needs events in non-decreasing ts order");
    }
  }
  const auto n = static_cast<std::int64_t>(events.size());
  const int parts = std::max(1, omp_get_max_threads());

  // Partition by context value so each value's events stay in one sweep.
  std::vector<int> part(events.size(), -1);
  const std::hash<std::string> hasher;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    if (const std::string* v = selector.select(events[i])) {
      part[i] = static_cast<int>(hasher(*v) % static_cast<std::size_t>(parts));
    }
  }

  struct Tagged {
    std::size_t index;
    CoContextEdge edge;
  };
  std::vector<std::vector<Tagged>> per_part(parts);
#pragma omp parallel for schedule(dynamic, 1)
  for (int p = 0; p < parts; ++p) {
    CoContextBuilder builder(selector, window_s);
    auto& out = per_part[p];
    for (std::int64_t i = 0; i < n; ++i) {
      if (part[i] != p) continue;
      if (auto edge = builder.push(events[i])) out.push_back({static_cast<std::size_t>(i), std::move(*edge)});
    }
  }

  std::vector<Tagged> merged;
  for (auto& v : per_part) {
    std::move(v.begin(), v.end(), std::back_inserter(merged));
  }
  std::sort(merged.begin(), merged.end(),
            [](const Tagged& x, const Tagged& y) { return x.index < y.index; });
  std::vector<CoContextEdge> out;
  out.reserve(merged.size());
  for (auto& t : merged) out.push_back(std::move(t.edge));
  return out;
}

}  // namespace

std::vector<CoContextEdge> build_cocontext_edges(std::span<const RiskEvent> events,
                                                 const ContextSelector& selector,
                                                 std::int64_t window_s, Exec exec) {
  if (exec == Exec::Parallel) return sweep_parallel(events, selector, window_s);
  return sweep_serial(events, selector, window_s);
}

std::size_t materialize(PropertyGraph& g, std::span<const CoContextEdge> edges) {
  if (edges.empty()) return 0;
  const TypeId account = g.require_vertex_type(names::kAccount);
  std::size_t inserted = 0;
  std::string cached_type;
  TypeId edge_type = 0;
  for (const auto& e : edges) {
    if (e.context_type != cached_type) {
      edge_type = g.require_edge_type(e.context_type);
      cached_type = e.context_type;
    }
    const VertexId a = g.ensure_vertex(account, e.a);
    const VertexId b = g.ensure_vertex(account, e.b);
    g.insert_edge(edge_type, a, b,
                  {Scalar{e.created_at}, Scalar{e.delta}, Scalar{e.context_value}});
    ++inserted;
  }
  return inserted;
}

EdgeFilter filtered_view(const WindowConfig& cfg, Timestamp now) {
  cfg.validate();
  return EdgeFilter{Timestamp{now.seconds - cfg.recency_days * kSecondsPerDay},
                    cfg.effective_window_s};
}

EdgePredicate edge_predicate(const PropertyGraph& g, std::string_view edge_type, EdgeFilter filter) {
  const TypeId type = g.require_edge_type(edge_type);
  const auto& attrs = g.edge_type(type).attributes;
  const auto created_idx = attribute_index(attrs, "created_at");
  const auto delta_idx = attribute_index(attrs, "delta");
  if (!created_idx || !delta_idx) {
    throw SchemaError("edge type " + std::string(edge_type) + " lacks created_at/delta");
  }
  return [filter, c = *created_idx, d = *delta_idx](const PropertyGraph& graph, EdgeId e) {
    const Scalar* created = graph.edge_attribute(e, c);
    const Scalar* delta = graph.edge_attribute(e, d);
    if (!created || !delta) return false;
    return filter.accepts(std::get<Timestamp>(*created), std::get<std::int64_t>(*delta));
  };
}

std::size_t edge_strength(const PropertyGraph& g, std::string_view edge_type, std::string_view a,
                          std::string_view b) {
  const TypeId type = g.require_edge_type(edge_type);
  auto va = g.find_vertex(names::kAccount, a);
  auto vb = g.find_vertex(names::kAccount, b);
  if (!va || !vb) return 0;
  std::size_t n = 0;
  g.for_each_incident(*va, type, Direction::Any, [&](EdgeId, VertexId other) {
    if (other == *vb) ++n;
  });
  return n;
}

std::optional<Timestamp> latest_edge_time(const PropertyGraph& g, std::string_view edge_type) {
  const TypeId type = g.require_edge_type(edge_type);
  const auto idx = attribute_index(g.edge_type(type).attributes, "created_at");
  if (!idx) return std::nullopt;
  std::optional<Timestamp> latest;
  for (EdgeId e : g.edges_of_type(type)) {
    if (const Scalar* s = g.edge_attribute(e, *idx)) {
      const auto ts = std::get<Timestamp>(*s);
      if (!latest || ts > *latest) latest = ts;
    }
  }
  return latest;
}

}  // namespace fraudcc
