#include "fraudcc/profile.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace fraudcc {
namespace {

/// Longest path over edges whose endpoints are both members. Members must be
/// sorted ascending.
std::size_t longest_path_within(const PropertyGraph& g, TypeId invite,
                                std::span<const VertexId> members) {
  auto in_group = [&](VertexId v) { return std::binary_search(members.begin(), members.end(), v); };
  std::unordered_map<VertexId, std::size_t> indeg;
  for (VertexId v : members) indeg[v] = 0;
  for (VertexId v : members) {
    g.for_each_incident(v, invite, Direction::Out, [&](EdgeId, VertexId child) {
      if (in_group(child)) ++indeg[child];
    });
  }
  std::unordered_map<VertexId, std::size_t> dist;
  std::vector<VertexId> frontier;
  for (VertexId v : members) {
    if (indeg[v] == 0) {
      frontier.push_back(v);
      dist[v] = 0;
    }
  }
  std::size_t best = 0;
  while (!frontier.empty()) {
    VertexId v = frontier.back();
    frontier.pop_back();
    const std::size_t dv = dist[v];
    best = std::max(best, dv);
    g.for_each_incident(v, invite, Direction::Out, [&](EdgeId, VertexId child) {
      if (!in_group(child)) return;
      auto& dc = dist[child];
      dc = std::max(dc, dv + 1);
      if (--indeg[child] == 0) frontier.push_back(child);
    });
  }
  return best;
}

ComponentProfile build_profile(const PropertyGraph& g, TypeId invite, VertexId label,
                               std::vector<VertexId> members) {
  ComponentProfile p;
  p.label = label;
  p.label_key = g.key(label);
  p.members = std::move(members);
  p.size = p.members.size();
  p.depth = longest_path_within(g, invite, p.members);
  const auto orders = non_self_order_ratio(g, p.members);
  p.bonus_sent = orders.bonus_sent;
  p.non_self_order_ratio = orders.ratio;
  p.shared_device_ratio = shared_device_ratio(g, p.members);
  const auto counts = invitor_counts(g, p.members);
  p.gini = counts.empty() ? 0.0 : gini_index(counts);
  return p;
}

}  // namespace

std::size_t cc_depth(const PropertyGraph& g, const ComponentLabeling& labeling, VertexId label) {
  std::vector<VertexId> members;
  for (VertexId v = 0; v < labeling.labels.size(); ++v) {
    if (labeling.labels[v] == label) members.push_back(v);
  }
  if (members.empty()) throw std::out_of_range("unknown component label");
  return longest_path_within(g, g.require_edge_type(names::kInvite), members);
}

double shared_device_ratio(const PropertyGraph& g, std::span<const VertexId> members) {
  auto use_imei = g.edge_type_id(names::kUseImei);
  if (!use_imei || members.empty()) return 0.0;
  std::unordered_set<VertexId> imeis;
  for (VertexId v : members) {
    g.for_each_incident(v, *use_imei, Direction::Any,
                        [&](EdgeId, VertexId device) { imeis.insert(device); });
  }
  if (imeis.empty()) return 0.0;
  return static_cast<double>(members.size()) / static_cast<double>(imeis.size());
}

OrderRatio non_self_order_ratio(const PropertyGraph& g, std::span<const VertexId> members) {
  OrderRatio out;
  auto send = g.edge_type_id(names::kSendBonus);
  auto recv = g.edge_type_id(names::kRecvBonus);
  if (!send || !recv) return out;
  std::size_t with_receiver = 0;
  std::size_t to_others = 0;
  for (VertexId sender : members) {
    g.for_each_incident(sender, *send, Direction::Out, [&](EdgeId, VertexId order) {
      ++out.bonus_sent;
      bool any = false;
      bool other = false;
      g.for_each_incident(order, *recv, Direction::Out, [&](EdgeId, VertexId receiver) {
        any = true;
        if (receiver != sender) other = true;
      });
      if (any) {
        ++with_receiver;
        if (other) ++to_others;
      }
    });
  }
  if (with_receiver > 0) {
    out.ratio = static_cast<double>(to_others) / static_cast<double>(with_receiver);
  }
  return out;
}

double gini_index(std::span<const double> counts) {
  if (counts.empty()) throw std::invalid_argument("gini_index of an empty list");
  std::vector<double> x(counts.begin(), counts.end());
  for (double v : x) {
    if (!(v >= 0.0)) throw std::invalid_argument("gini_index needs non-negative counts");
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += x[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
  }
  if (total == 0.0) return 0.0;
  return weighted / (n * total);
}

std::vector<double> invitor_counts(const PropertyGraph& g, std::span<const VertexId> members) {
  std::vector<double> counts;
  auto invite = g.edge_type_id(names::kInvite);
  if (!invite) return counts;
  for (VertexId v : members) {
    const std::size_t d = g.degree(v, *invite, Direction::Out);
    if (d > 0) counts.push_back(static_cast<double>(d));
  }
  return counts;
}

std::vector<ComponentProfile> profile_components(const PropertyGraph& g,
                                                 const ComponentLabeling& labeling, Exec exec) {
  const TypeId invite = g.require_edge_type(names::kInvite);
  auto groups = labeling.groups();
  std::vector<std::pair<VertexId, std::vector<VertexId>>> work(
      std::make_move_iterator(groups.begin()), std::make_move_iterator(groups.end()));
  std::sort(work.begin(), work.end(),
            [&](const auto& a, const auto& b) { return g.key(a.first) < g.key(b.first); });

  std::vector<ComponentProfile> out(work.size());
  const auto count = static_cast<std::int64_t>(work.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
      out[i] = build_profile(g, invite, work[i].first, std::move(work[i].second));
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) {
      out[i] = build_profile(g, invite, work[i].first, std::move(work[i].second));
    }
  }
  return out;
}

std::map<VertexId, AccountStats> per_account_stats(const PropertyGraph& g) {
  std::map<VertexId, AccountStats> stats;
  auto account_type = g.vertex_type_id(names::kAccount);
  if (!account_type) return stats;
  for (VertexId a : g.vertices_of_type(*account_type)) stats[a];

  if (auto use_imei = g.edge_type_id(names::kUseImei)) {
    if (auto imei_type = g.vertex_type_id(names::kImei)) {
      for (VertexId device : g.vertices_of_type(*imei_type)) {
        std::set<VertexId> accounts;
        g.for_each_incident(device, *use_imei, Direction::Any,
                            [&](EdgeId, VertexId acct) { accounts.insert(acct); });
        for (VertexId acct : accounts) {
          auto& s = stats[acct];
          s.accounts_on_same_imei = std::max(s.accounts_on_same_imei, accounts.size());
        }
      }
    }
  }

  auto send = g.edge_type_id(names::kSendBonus);
  auto recv = g.edge_type_id(names::kRecvBonus);
  auto order_type = g.vertex_type_id(names::kOrder);
  if (send && recv && order_type) {
    std::map<VertexId, std::set<VertexId>> senders_of;
    for (VertexId order : g.vertices_of_type(*order_type)) {
      std::vector<VertexId> senders = g.neighbors(order, *send, Direction::In);
      if (senders.empty()) continue;
      g.for_each_incident(order, *recv, Direction::Out, [&](EdgeId, VertexId receiver) {
        senders_of[receiver].insert(senders.begin(), senders.end());
      });
    }
    for (const auto& [receiver, senders] : senders_of) stats[receiver].senders_to_me = senders.size();
  }
  return stats;
}

}  // namespace fraudcc
