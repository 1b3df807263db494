#include "fraudcc/rules.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace fraudcc {

void from_json(const nlohmann::json& j, RuleThresholds& t) {
  const RuleThresholds d;
  t.depth_gt = j.value("depth_gt", d.depth_gt);
  t.bonus_sent_gt = j.value("bonus_sent_gt", d.bonus_sent_gt);
  t.non_self_ratio_gt = j.value("non_self_ratio_gt", d.non_self_ratio_gt);
  t.min_cc_size = j.value("min_cc_size", d.min_cc_size);
  t.device_ratio_gt = j.value("device_ratio_gt", d.device_ratio_gt);
  t.gini_lt = j.value("gini_lt", d.gini_lt);
  t.accounts_per_imei_ge = j.value("accounts_per_imei_ge", d.accounts_per_imei_ge);
  t.senders_per_receiver_ge = j.value("senders_per_receiver_ge", d.senders_per_receiver_ge);
}

void to_json(nlohmann::json& j, const RuleThresholds& t) {
  j = nlohmann::json{{"depth_gt", t.depth_gt},
                     {"bonus_sent_gt", t.bonus_sent_gt},
                     {"non_self_ratio_gt", t.non_self_ratio_gt},
                     {"min_cc_size", t.min_cc_size},
                     {"device_ratio_gt", t.device_ratio_gt},
                     {"gini_lt", t.gini_lt},
                     {"accounts_per_imei_ge", t.accounts_per_imei_ge},
                     {"senders_per_receiver_ge", t.senders_per_receiver_ge}};
}

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::set<std::string> orders_of(const PropertyGraph& g, const std::set<std::string>& accounts) {
  std::set<std::string> orders;
  auto send = g.edge_type_id(names::kSendBonus);
  auto recv = g.edge_type_id(names::kRecvBonus);
  if (!send || !recv) return orders;
  for (const auto& key : accounts) {
    auto v = g.find_vertex(names::kAccount, key);
    if (!v) continue;
    g.for_each_incident(*v, *send, Direction::Out,
                        [&](EdgeId, VertexId order) { orders.insert(g.key(order)); });
    g.for_each_incident(*v, *recv, Direction::In,
                        [&](EdgeId, VertexId order) { orders.insert(g.key(order)); });
  }
  return orders;
}

std::set<std::string> set_union(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

}  // namespace

std::vector<RuleOutcome> evaluate_rules(const PropertyGraph& g,
                                        std::span<const ComponentProfile> profiles,
                                        const std::map<VertexId, AccountStats>& stats,
                                        const RuleThresholds& t) {
  using Pred = bool (*)(const ComponentProfile&, const RuleThresholds&);
  struct CcRule {
    char id;
    std::string description;
    Pred pred;
  };
  const std::vector<CcRule> cc_rules = {
      {'a', "cc_depth>" + std::to_string(t.depth_gt),
       [](const ComponentProfile& p, const RuleThresholds& r) { return p.depth > r.depth_gt; }},
      {'b',
       "cc_bonus_sent>" + std::to_string(t.bonus_sent_gt) + ", cc_non-self-receiver_ratio>" +
           fmt_num(t.non_self_ratio_gt),
       [](const ComponentProfile& p, const RuleThresholds& r) {
         return p.bonus_sent > r.bonus_sent_gt && p.non_self_order_ratio > r.non_self_ratio_gt;
       }},
      {'c',
       "cc_size>=" + std::to_string(t.min_cc_size) + ", cc_shared_device_ratio>" +
           fmt_num(t.device_ratio_gt),
       [](const ComponentProfile& p, const RuleThresholds& r) {
         return p.size >= r.min_cc_size && p.shared_device_ratio > r.device_ratio_gt;
       }},
      {'d', "cc_size>=" + std::to_string(t.min_cc_size) + ", gini_index<" + fmt_num(t.gini_lt),
       [](const ComponentProfile& p, const RuleThresholds& r) {
         return p.size >= r.min_cc_size && p.gini < r.gini_lt;
       }},
  };

  std::vector<RuleOutcome> out;
  std::set<VertexId> g_labels;
  for (const auto& rule : cc_rules) {
    RuleOutcome o;
    o.rule_id = rule.id;
    o.description = rule.description;
    std::size_t ccs = 0;
    for (const auto& p : profiles) {
      if (!rule.pred(p, t)) continue;
      ++ccs;
      g_labels.insert(p.label);
      for (VertexId m : p.members) o.accounts.insert(g.key(m));
    }
    o.cc_count = ccs;
    o.orders = orders_of(g, o.accounts);
    out.push_back(std::move(o));
  }

  RuleOutcome e;
  e.rule_id = 'e';
  e.description = "#account_per_imei>=" + std::to_string(t.accounts_per_imei_ge);
  RuleOutcome f;
  f.rule_id = 'f';
  f.description = "#senders_per_receiver>=" + std::to_string(t.senders_per_receiver_ge);
  for (const auto& [v, s] : stats) {
    if (s.accounts_on_same_imei >= t.accounts_per_imei_ge) e.accounts.insert(g.key(v));
    if (s.senders_to_me >= t.senders_per_receiver_ge) f.accounts.insert(g.key(v));
  }
  e.orders = orders_of(g, e.accounts);
  f.orders = orders_of(g, f.accounts);
  out.push_back(std::move(e));
  out.push_back(std::move(f));

  auto composite = [&](char id, std::string description, std::set<std::string> accounts,
                       std::optional<std::size_t> ccs) {
    RuleOutcome o;
    o.rule_id = id;
    o.description = std::move(description);
    o.accounts = std::move(accounts);
    o.orders = orders_of(g, o.accounts);
    o.cc_count = ccs;
    out.push_back(std::move(o));
  };
  const auto& a = out[0].accounts;
  const auto& b = out[1].accounts;
  const auto& c = out[2].accounts;
  const auto d = out[3].accounts;
  auto g_set = set_union(set_union(a, b), set_union(c, d));
  auto h_set = set_union(out[4].accounts, out[5].accounts);
  auto i_set = set_union(g_set, h_set);
  std::set<std::string> j_set;
  std::set_difference(i_set.begin(), i_set.end(), d.begin(), d.end(),
                      std::inserter(j_set, j_set.end()));
  composite('g', "a+b+c+d", std::move(g_set), g_labels.size());
  composite('h', "e+f", std::move(h_set), std::nullopt);
  composite('i', "g+h", std::move(i_set), std::nullopt);
  composite('j', "g+h-d", std::move(j_set), std::nullopt);
  return out;
}

const RuleOutcome& outcome(const std::vector<RuleOutcome>& outcomes, char rule_id) {
  for (const auto& o : outcomes) {
    if (o.rule_id == rule_id) return o;
  }
  throw std::out_of_range(std::string("no outcome for rule ") + rule_id);
}

nlohmann::ordered_json to_json(const RuleOutcome& o) {
  nlohmann::ordered_json j;
  j["rule"] = std::string(1, o.rule_id);
  j["description"] = o.description;
  j["account_count"] = o.accounts.size();
  j["order_count"] = o.orders.size();
  if (o.cc_count) {
    j["cc_count"] = *o.cc_count;
  } else {
    j["cc_count"] = nullptr;
  }
  j["accounts"] = o.accounts;
  j["orders"] = o.orders;
  return j;
}

}  // namespace fraudcc
