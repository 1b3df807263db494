#include "fraudcc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "fraudcc/csv.hpp"
#include "fraudcc/loading_job.hpp"
#include "fraudcc/profile.hpp"

namespace fraudcc {

std::string_view pattern_name(Pattern p) {
  switch (p) {
    case Pattern::LongChain: return "long_chain";
    case Pattern::DeviceFarm: return "device_farm";
    case Pattern::BonusAggregation: return "bonus_aggregation";
    case Pattern::HomogeneousFanout: return "homogeneous_fanout";
    case Pattern::IpBurst: return "ip_burst";
  }
  return "unknown";
}

Pattern parse_pattern(std::string_view name) {
  for (Pattern p : {Pattern::LongChain, Pattern::DeviceFarm, Pattern::BonusAggregation,
                    Pattern::HomogeneousFanout, Pattern::IpBurst}) {
    if (pattern_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown fraud pattern: " + std::string(name));
}

std::size_t FraudGroupSpec::account_count() const {
  switch (pattern) {
    case Pattern::LongChain: return depth + 1;
    case Pattern::DeviceFarm: return accounts;
    case Pattern::BonusAggregation: return senders + beneficiaries;
    case Pattern::HomogeneousFanout: return 1 + fanout * levels;
    case Pattern::IpBurst: return accounts;
  }
  return 0;
}

void CampaignSpec::validate() const {
  if (n_normal_accounts < 1) throw std::invalid_argument("n_normal_accounts must be >= 1");
  if (invitees_per_bonus < 1) throw std::invalid_argument("invitees_per_bonus must be >= 1");
  if (duration_s < kSecondsPerDay) throw std::invalid_argument("duration_s must be >= 1 day");
  const NormalTraffic& n = normal;
  if (n.max_depth > 5) throw std::invalid_argument("normal max_depth must be <= 5");
  if (n.max_fanout < 1 || n.spike_at < 1) throw std::invalid_argument("fanout bounds must be >= 1");
  if (n.collision_group_min < 2 || n.collision_group_max < n.collision_group_min)
    throw std::invalid_argument("bad collision group size range");
  if (n.collision_gap_min_s < 1 || n.collision_gap_max_s < n.collision_gap_min_s)
    throw std::invalid_argument("bad collision gap range");
  if (static_cast<std::int64_t>(n.collision_group_max) * n.collision_gap_max_s >= duration_s)
    throw std::invalid_argument("collision groups do not fit in the time range");
  if (n.events_min < 1 || n.events_max < n.events_min)
    throw std::invalid_argument("bad events per account range");
  for (double p : {n.p_no_invite, n.spike_mass, n.shared_imei_rate, n.gift_rate, n.collision_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("rates must lie in [0, 1]");
  }
  for (const auto& g : groups) {
    switch (g.pattern) {
      case Pattern::LongChain:
        if (g.depth < 1) throw std::invalid_argument("long_chain depth must be >= 1");
        break;
      case Pattern::DeviceFarm:
        if (g.accounts < 1 || g.imeis < 1) throw std::invalid_argument("device_farm counts must be >= 1");
        if (g.imeis > g.accounts) throw std::invalid_argument("device_farm has more imeis than accounts");
        break;
      case Pattern::BonusAggregation:
        if (g.senders < 1 || g.beneficiaries < 1)
          throw std::invalid_argument("bonus_aggregation counts must be >= 1");
        break;
      case Pattern::HomogeneousFanout:
        if (g.fanout < 1 || g.levels < 1)
          throw std::invalid_argument("homogeneous_fanout counts must be >= 1");
        break;
      case Pattern::IpBurst:
        if (g.accounts < 2 || g.ips < 1 || g.intra_gap_s < 1)
          throw std::invalid_argument("ip_burst needs >= 2 accounts, >= 1 ip, gap >= 1");
        if (g.ips > g.accounts) throw std::invalid_argument("ip_burst has more ips than accounts");
        if (g.intra_gap_s >= n.collision_gap_min_s)
          throw std::invalid_argument("ip_burst gap overlaps the normal collision gaps");
        if (static_cast<std::int64_t>(g.accounts + g.ips) * g.intra_gap_s >= duration_s)
          throw std::invalid_argument("ip_burst does not fit in the time range");
        break;
    }
  }
}

void from_json(const nlohmann::json& j, FraudGroupSpec& g) {
  const FraudGroupSpec d;
  g.pattern = parse_pattern(j.at("pattern").get<std::string>());
  g.depth = j.value("depth", d.depth);
  g.accounts = j.value("accounts", d.accounts);
  g.imeis = j.value("imeis", d.imeis);
  g.senders = j.value("senders", d.senders);
  g.beneficiaries = j.value("beneficiaries", d.beneficiaries);
  g.fanout = j.value("fanout", d.fanout);
  g.levels = j.value("levels", d.levels);
  g.ips = j.value("ips", d.ips);
  g.intra_gap_s = j.value("intra_gap_s", d.intra_gap_s);
}

void to_json(nlohmann::json& j, const FraudGroupSpec& g) {
  j = nlohmann::json{{"pattern", pattern_name(g.pattern)}};
  switch (g.pattern) {
    case Pattern::LongChain: j["depth"] = g.depth; break;
    case Pattern::DeviceFarm: j["accounts"] = g.accounts; j["imeis"] = g.imeis; break;
    case Pattern::BonusAggregation:
      j["senders"] = g.senders;
      j["beneficiaries"] = g.beneficiaries;
      break;
    case Pattern::HomogeneousFanout: j["fanout"] = g.fanout; j["levels"] = g.levels; break;
    case Pattern::IpBurst:
      j["accounts"] = g.accounts;
      j["ips"] = g.ips;
      j["intra_gap_s"] = g.intra_gap_s;
      break;
  }
}

void from_json(const nlohmann::json& j, NormalTraffic& n) {
  const NormalTraffic d;
  n.p_no_invite = j.value("p_no_invite", d.p_no_invite);
  n.fanout_alpha = j.value("fanout_alpha", d.fanout_alpha);
  n.max_fanout = j.value("max_fanout", d.max_fanout);
  n.spike_at = j.value("spike_at", d.spike_at);
  n.spike_mass = j.value("spike_mass", d.spike_mass);
  n.max_depth = j.value("max_depth", d.max_depth);
  n.shared_imei_rate = j.value("shared_imei_rate", d.shared_imei_rate);
  n.gift_rate = j.value("gift_rate", d.gift_rate);
  n.collision_rate = j.value("collision_rate", d.collision_rate);
  n.collision_group_min = j.value("collision_group_min", d.collision_group_min);
  n.collision_group_max = j.value("collision_group_max", d.collision_group_max);
  n.collision_gap_min_s = j.value("collision_gap_min_s", d.collision_gap_min_s);
  n.collision_gap_max_s = j.value("collision_gap_max_s", d.collision_gap_max_s);
  n.events_min = j.value("events_min", d.events_min);
  n.events_max = j.value("events_max", d.events_max);
}

void to_json(nlohmann::json& j, const NormalTraffic& n) {
  j = nlohmann::json{{"p_no_invite", n.p_no_invite},
                     {"fanout_alpha", n.fanout_alpha},
                     {"max_fanout", n.max_fanout},
                     {"spike_at", n.spike_at},
                     {"spike_mass", n.spike_mass},
                     {"max_depth", n.max_depth},
                     {"shared_imei_rate", n.shared_imei_rate},
                     {"gift_rate", n.gift_rate},
                     {"collision_rate", n.collision_rate},
                     {"collision_group_min", n.collision_group_min},
                     {"collision_group_max", n.collision_group_max},
                     {"collision_gap_min_s", n.collision_gap_min_s},
                     {"collision_gap_max_s", n.collision_gap_max_s},
                     {"events_min", n.events_min},
                     {"events_max", n.events_max}};
}

void from_json(const nlohmann::json& j, CampaignSpec& s) {
  const CampaignSpec d;
  s.seed = j.value("seed", d.seed);
  s.n_normal_accounts = j.value("n_normal_accounts", d.n_normal_accounts);
  if (j.contains("groups")) {
    s.groups = j.at("groups").get<std::vector<FraudGroupSpec>>();
  } else {
    s.groups = default_fraud_groups();
  }
  s.invitees_per_bonus = j.value("invitees_per_bonus", d.invitees_per_bonus);
  if (j.contains("start")) {
    const auto& v = j.at("start");
    std::optional<Timestamp> ts =
        v.is_number_integer() ? Timestamp{v.get<std::int64_t>()} : parse_timestamp(v.get<std::string>());
    if (!ts) throw std::invalid_argument("campaign start is not a timestamp");
    s.start = *ts;
  } else {
    s.start = d.start;
  }
  s.duration_s = j.value("duration_s", d.duration_s);
  s.normal = j.contains("normal") ? j.at("normal").get<NormalTraffic>() : d.normal;
}

void to_json(nlohmann::json& j, const CampaignSpec& s) {
  j = nlohmann::json{{"seed", s.seed},
                     {"n_normal_accounts", s.n_normal_accounts},
                     {"groups", s.groups},
                     {"invitees_per_bonus", s.invitees_per_bonus},
                     {"start", format_iso8601(s.start)},
                     {"duration_s", s.duration_s},
                     {"normal", s.normal}};
}

std::vector<FraudGroupSpec> default_fraud_groups() {
  std::vector<FraudGroupSpec> groups;
  for (int copy = 0; copy < 2; ++copy) {
    FraudGroupSpec g;
    g.pattern = Pattern::LongChain;
    groups.push_back(g);
    g.pattern = Pattern::DeviceFarm;
    groups.push_back(g);
    g.pattern = Pattern::BonusAggregation;
    groups.push_back(g);
    g.pattern = Pattern::HomogeneousFanout;
    groups.push_back(g);
    g.pattern = Pattern::IpBurst;
    g.accounts = 20;
    groups.push_back(g);
  }
  return groups;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  // Lemire's multiply-shift with rejection
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::between: empty range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

namespace {

struct Account {
  std::string key;
  Timestamp reg;
  std::string imei;
  std::string ip;
};

class Builder {
 public:
  Builder(const CampaignSpec& spec) : spec_(spec), rng_(spec.seed), key_offset_(rng_.below(10'000'000'000ULL)) {
    const NormalTraffic& n = spec.normal;
    // Cumulative weights for k^-alpha on 1..max_fanout.
    double total = 0;
    for (std::size_t k = 1; k <= n.max_fanout; ++k) {
      total += std::pow(static_cast<double>(k), -n.fanout_alpha);
      fanout_cdf_.push_back(total);
    }
    for (double& c : fanout_cdf_) c /= total;
  }

  Campaign run();

 private:
  struct Tree {
    std::vector<int> parent;
    std::vector<std::size_t> depth;
    std::vector<std::size_t> invitees;
  };

  std::size_t add_account(Timestamp reg) {
    const std::size_t idx = accounts_.size();
    char key[16];
    std::snprintf(key, sizeof key, "1%010llu",
                  static_cast<unsigned long long>((idx * 2654435761ULL + key_offset_) % 10'000'000'000ULL));
    char imei[20];
    std::snprintf(imei, sizeof imei, "86%013llu",
                  static_cast<unsigned long long>((idx * 1000003ULL + key_offset_) % 10'000'000'000'000ULL));
    char ip[48];
    std::snprintf(ip, sizeof ip, "10.%zu.%zu.%zu", (idx >> 16) & 255, (idx >> 8) & 255, idx & 255);
    accounts_.push_back({key, reg, imei, ip});
    return idx;
  }

  Timestamp random_time(std::int64_t margin_end = 0) {
    return Timestamp{spec_.start.seconds + rng_.between(0, spec_.duration_s - 1 - margin_end)};
  }

  void invite(std::size_t sender, std::size_t receiver) {
    referrals_.push_back({receiver, sender});
  }

  void order(std::size_t sender, std::size_t receiver, Timestamp when) {
    char id[16];
    std::snprintf(id, sizeof id, "o%09zu", orders_.size() + 1);
    orders_.push_back({id, when, "invite_bonus", accounts_[sender].key, accounts_[receiver].key});
  }

  void event(std::size_t account, const std::string& ip, Timestamp ts) {
    static constexpr const char* kTypes[] = {"login", "pay", "redeem"};
    events_.push_back({ts, kTypes[rng_.below(3)], accounts_[account].key, ip, {}});
  }

  void own_events(std::size_t account, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) event(account, accounts_[account].ip, random_time());
  }

  std::size_t draw_fanout() {
    const NormalTraffic& n = spec_.normal;
    if (rng_.chance(n.p_no_invite)) return 0;
    if (rng_.chance(n.spike_mass)) return n.spike_at;
    const double u = rng_.unit();
    return static_cast<std::size_t>(std::lower_bound(fanout_cdf_.begin(), fanout_cdf_.end(), u) -
                                    fanout_cdf_.begin()) +
           1;
  }

  Tree draw_tree(std::size_t budget) {
    Tree t{{-1}, {0}, {0}};
    for (std::size_t i = 0; i < t.parent.size() && t.parent.size() < budget; ++i) {
      if (t.depth[i] >= spec_.normal.max_depth) continue;
      const std::size_t k = draw_fanout();
      for (std::size_t c = 0; c < k && t.parent.size() < budget; ++c) {
        t.parent.push_back(static_cast<int>(i));
        t.depth.push_back(t.depth[i] + 1);
        t.invitees.push_back(0);
        ++t.invitees[i];
      }
    }
    return t;
  }

  // Rules a-d evaluated on the generator's own view of a benign tree.
  bool benign(const Tree& t, std::size_t bonus_sent, std::size_t non_self) const {
    const std::size_t size = t.parent.size();
    if (*std::max_element(t.depth.begin(), t.depth.end()) > 5) return false;
    if (bonus_sent > 10 && static_cast<double>(non_self) > 0.5 * static_cast<double>(bonus_sent))
      return false;
    if (size >= 30) {
      std::vector<double> counts;
      for (std::size_t k : t.invitees)
        if (k > 0) counts.push_back(static_cast<double>(k));
      if (gini_index(counts) < 0.1) return false;
    }
    return true;
  }

  void normal_population();
  void fraud_group(std::size_t id, const FraudGroupSpec& g);
  void collisions(const std::vector<std::size_t>& normals);

  const CampaignSpec& spec_;
  Rng rng_;
  std::uint64_t key_offset_;
  std::vector<double> fanout_cdf_;
  std::vector<Account> accounts_;
  std::vector<std::pair<std::size_t, std::size_t>> referrals_;  // (receiver, sender)
  std::vector<OrderRow> orders_;
  std::vector<RiskEvent> events_;
  GroundTruth truth_;
};

void Builder::normal_population() {
  const NormalTraffic& n = spec_.normal;
  const std::size_t ipb = spec_.invitees_per_bonus;
  std::size_t remaining = spec_.n_normal_accounts;
  std::vector<std::size_t> normals;
  normals.reserve(remaining);

  while (remaining > 0) {
    Tree tree;
    std::vector<std::pair<std::size_t, std::size_t>> bonus;  // (sender, receiver) local
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw std::logic_error("cannot draw a benign invitation tree");
      tree = draw_tree(remaining);
      bonus.clear();
      std::vector<std::vector<std::size_t>> children(tree.parent.size());
      for (std::size_t i = 1; i < tree.parent.size(); ++i) children[tree.parent[i]].push_back(i);
      std::size_t non_self = 0;
      for (std::size_t i = 0; i < tree.parent.size(); ++i) {
        for (std::size_t b = 0; b < tree.invitees[i] / ipb; ++b) {
          std::size_t receiver = i;
          if (rng_.chance(n.gift_rate)) {
            receiver = children[i][rng_.below(children[i].size())];
            ++non_self;
          }
          bonus.emplace_back(i, receiver);
        }
      }
      if (benign(tree, bonus.size(), non_self)) break;
    }

    std::vector<std::size_t> ids(tree.parent.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      Timestamp reg = i == 0 ? random_time(spec_.duration_s / 2)
                             : Timestamp{accounts_[ids[tree.parent[i]]].reg.seconds + rng_.between(60, 86400)};
      ids[i] = add_account(reg);
      if (i > 0) invite(ids[tree.parent[i]], ids[i]);
      normals.push_back(ids[i]);
    }
    for (auto [s, r] : bonus) {
      order(ids[s], ids[r], Timestamp{accounts_[ids[s]].reg.seconds + rng_.between(3600, 2 * 86400)});
    }
    remaining -= tree.parent.size();
  }

  for (std::size_t a : normals) own_events(a, static_cast<std::size_t>(rng_.between(n.events_min, n.events_max)));

  // Benign device sharing: disjoint pairs, so no IMEI holds more than two.
  std::vector<std::size_t> order = normals;
  rng_.shuffle(order);
  const auto pairs = static_cast<std::size_t>(n.shared_imei_rate * static_cast<double>(normals.size()) / 2);
  for (std::size_t p = 0; p < pairs && 2 * p + 1 < order.size(); ++p) {
    accounts_[order[2 * p + 1]].imei = accounts_[order[2 * p]].imei;
  }

  collisions(normals);
}

// Neighborhood IP sharing: members take turns on one IP at gaps wider than
// any planted burst, so they only link under wide windows.
void Builder::collisions(const std::vector<std::size_t>& normals) {
  const NormalTraffic& n = spec_.normal;
  std::vector<std::size_t> order = normals;
  rng_.shuffle(order);
  const auto budget = static_cast<std::size_t>(n.collision_rate * static_cast<double>(normals.size()));
  std::size_t used = 0;
  std::size_t group = 0;
  while (true) {
    const auto size = static_cast<std::size_t>(
        rng_.between(static_cast<std::int64_t>(n.collision_group_min), static_cast<std::int64_t>(n.collision_group_max)));
    if (used + size > budget) break;
    char ip[48];
    std::snprintf(ip, sizeof ip, "172.%zu.%zu.%zu", 16 + (group >> 16), (group >> 8) & 255, group & 255);
    std::int64_t t = random_time(static_cast<std::int64_t>(size) * n.collision_gap_max_s).seconds;
    for (std::size_t i = 0; i < size; ++i) {
      event(order[used + i], ip, Timestamp{t});
      t += rng_.between(n.collision_gap_min_s, n.collision_gap_max_s);
    }
    used += size;
    ++group;
  }
}

void Builder::fraud_group(std::size_t id, const FraudGroupSpec& g) {
  const std::size_t first = accounts_.size();
  const std::size_t ipb = spec_.invitees_per_bonus;
  Timestamp base = random_time(spec_.duration_s / 2);
  auto next_reg = [&] { return Timestamp{base.seconds += rng_.between(1, 120)}; };

  std::vector<std::size_t> invitees;  // per local account, for self bonuses
  auto tree_edge = [&](std::size_t parent, std::size_t child) {
    invite(first + parent, first + child);
    ++invitees[parent];
  };
  const std::size_t count = g.account_count();
  for (std::size_t i = 0; i < count; ++i) add_account(next_reg());
  invitees.assign(count, 0);

  switch (g.pattern) {
    case Pattern::LongChain:
      for (std::size_t i = 1; i < count; ++i) tree_edge(i - 1, i);
      break;
    case Pattern::DeviceFarm:
      for (std::size_t i = 1; i < count; ++i) tree_edge((i - 1) / 4, i);
      for (std::size_t i = 0; i < count; ++i) accounts_[first + i].imei = accounts_[first + i % g.imeis].imei;
      break;
    case Pattern::BonusAggregation: {
      // beneficiaries come first; beneficiary 0 invites the others, and each
      // sender is invited by the beneficiary it feeds
      const std::size_t nb = g.beneficiaries;
      for (std::size_t b = 1; b < nb; ++b) tree_edge(0, b);
      for (std::size_t s = 0; s < g.senders; ++s) {
        tree_edge(s % nb, nb + s);
        order(first + nb + s, first + s % nb, Timestamp{base.seconds + rng_.between(3600, 86400)});
      }
      break;
    }
    case Pattern::HomogeneousFanout: {
      std::size_t spine = 0;
      std::size_t next = 1;
      for (std::size_t level = 0; level < g.levels; ++level) {
        const std::size_t first_child = next;
        for (std::size_t c = 0; c < g.fanout; ++c) tree_edge(spine, next++);
        spine = first_child;
      }
      break;
    }
    case Pattern::IpBurst: {
      const std::size_t per_ip = (count + g.ips - 1) / g.ips;
      std::int64_t t = random_time(static_cast<std::int64_t>(count + g.ips) * g.intra_gap_s).seconds;
      for (std::size_t c = 0; c < g.ips; ++c) {
        char ip[48];
        std::snprintf(ip, sizeof ip, "100.64.%zu.%zu", id, c);
        std::vector<std::size_t> seq;
        if (c > 0) seq.push_back(std::min(c * per_ip, count) - 1);  // bridge from the previous IP
        for (std::size_t i = c * per_ip; i < std::min((c + 1) * per_ip, count); ++i) seq.push_back(i);
        for (std::size_t i : seq) {
          event(first + i, ip, Timestamp{t});
          t += rng_.between(1, g.intra_gap_s);
        }
      }
      break;
    }
  }

  if (g.pattern != Pattern::BonusAggregation) {
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t b = 0; b < invitees[i] / ipb; ++b)
        order(first + i, first + i, Timestamp{accounts_[first + i].reg.seconds + rng_.between(3600, 86400)});
    }
  }
  for (std::size_t i = 0; i < count; ++i) own_events(first + i, 1);

  GroundTruthGroup group{id, g.pattern, {}};
  for (std::size_t i = 0; i < count; ++i) group.accounts.push_back(accounts_[first + i].key);
  std::sort(group.accounts.begin(), group.accounts.end());
  truth_.fraud_accounts.insert(group.accounts.begin(), group.accounts.end());
  truth_.groups.push_back(std::move(group));
}

Campaign Builder::run() {
  normal_population();
  for (std::size_t i = 0; i < spec_.groups.size(); ++i) fraud_group(i, spec_.groups[i]);

  Campaign c;
  for (const auto& a : accounts_) {
    c.accounts.push_back(a.key);
    c.devices.push_back({a.key, a.imei});
  }
  std::sort(c.accounts.begin(), c.accounts.end());
  for (auto [r, s] : referrals_) {
    c.referrals.push_back({accounts_[r].key, accounts_[r].reg, accounts_[s].key, accounts_[s].reg});
  }
  c.orders = std::move(orders_);
  std::stable_sort(events_.begin(), events_.end(), [](const RiskEvent& a, const RiskEvent& b) {
    return std::tie(a.ts, a.account, a.ip) < std::tie(b.ts, b.account, b.ip);
  });
  c.events = std::move(events_);
  c.truth = std::move(truth_);
  return c;
}

}  // namespace

Campaign generate(const CampaignSpec& spec) {
  spec.validate();
  return Builder(spec).run();
}

void write_orders(std::ostream& out, const std::vector<OrderRow>& rows) {
  for (const auto& o : rows) {
    nlohmann::ordered_json j;
    j["order_id"] = o.order_id;
    j["order_date"] = format_iso8601(o.order_date);
    j["bonus_name"] = o.bonus_name;
    j["sendr_phone"] = o.sender;
    j["recvr_phone"] = o.receiver;
    out << j.dump() << '\n';
  }
}

void write_devices(std::ostream& out, const std::vector<DeviceRow>& rows) {
  out << "phone_number,imei\n";
  for (const auto& d : rows) out << csv_escape(d.phone) << ',' << csv_escape(d.imei) << '\n';
}

void write_referrals(std::ostream& out, const std::vector<ReferralRow>& rows) {
  out << "recv_phone,recv_reg_date,sender_phone,sender_reg_date\n";
  for (const auto& r : rows) {
    out << csv_escape(r.recv_phone) << ',' << format_iso8601(r.recv_reg_date) << ','
        << csv_escape(r.sender_phone) << ',' << format_iso8601(r.sender_reg_date) << '\n';
  }
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  for (const auto& g : truth.groups) {
    nlohmann::ordered_json j;
    j["group"] = g.id;
    j["pattern"] = pattern_name(g.pattern);
    j["accounts"] = g.accounts;
    out << j.dump() << '\n';
  }
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

}  // namespace

void write_campaign(const Campaign& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "orders.jsonl");
    write_orders(out, c.orders);
  }
  {
    auto out = open_out(dir / "devices.csv");
    write_devices(out, c.devices);
  }
  {
    auto out = open_out(dir / "referrals.csv");
    write_referrals(out, c.referrals);
  }
  {
    auto out = open_out(dir / "events.jsonl");
    for (const auto& e : c.events) write_event_jsonl(out, e);
  }
  {
    auto out = open_out(dir / "ground_truth.jsonl");
    write_ground_truth(out, c.truth);
  }
}

GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth truth;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line);
    GroundTruthGroup g;
    g.id = j.at("group").get<std::size_t>();
    g.pattern = parse_pattern(j.at("pattern").get<std::string>());
    g.accounts = j.at("accounts").get<std::vector<std::string>>();
    truth.fraud_accounts.insert(g.accounts.begin(), g.accounts.end());
    truth.groups.push_back(std::move(g));
  }
  return truth;
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_ground_truth(in);
}

std::vector<ReferralRow> read_referrals(std::istream& in) {
  std::vector<ReferralRow> rows;
  CsvReader reader(in);
  CsvRecord rec;
  bool header = true;
  while (reader.next(rec)) {
    if (header) {
      header = false;
      continue;
    }
    if (!rec.error.empty() || rec.fields.size() != 4)
      throw std::runtime_error("bad referral record at line " + std::to_string(rec.line));
    auto recv_reg = parse_timestamp(rec.fields[1]);
    auto send_reg = parse_timestamp(rec.fields[3]);
    if (!recv_reg || !send_reg)
      throw std::runtime_error("bad referral date at line " + std::to_string(rec.line));
    rows.push_back({rec.fields[0], *recv_reg, rec.fields[2], *send_reg});
  }
  return rows;
}

Campaign strategy_campaign(int strategy, std::uint64_t seed) {
  // (parent, child) pairs over local ids 0..9; 0 is the ring's root
  std::vector<std::pair<int, int>> edges;
  switch (strategy) {
    case 1:
      for (int c = 1; c <= 4; ++c) edges.emplace_back(0, c);
      for (int c = 5; c <= 9; ++c) edges.emplace_back(1, c);
      break;
    case 2:
      for (int c = 1; c <= 9; ++c) edges.emplace_back(0, c);
      break;
    case 3:
      for (int c = 1; c <= 3; ++c) edges.emplace_back(0, c);
      for (int c = 4; c <= 6; ++c) edges.emplace_back(1, c);
      for (int c = 7; c <= 9; ++c) edges.emplace_back(4, c);
      break;
    default:
      throw std::invalid_argument("strategy must be 1, 2 or 3");
  }
  constexpr std::size_t kInviteesPerBonus = 3;
  Rng rng(seed);
  const Timestamp start{1605830400};
  Campaign c;
  std::vector<std::string> keys;
  std::vector<Timestamp> reg;
  for (int i = 0; i < 10; ++i) {
    char key[16];
    std::snprintf(key, sizeof key, "1380000%04d", i);
    keys.emplace_back(key);
    reg.push_back(Timestamp{start.seconds + i * 600 + rng.between(0, 59)});
    c.devices.push_back({key, "8600000000000" + std::to_string(10 + i)});
  }
  std::vector<std::size_t> invitees(10, 0);
  for (auto [p, ch] : edges) {
    c.referrals.push_back({keys[ch], reg[ch], keys[p], reg[p]});
    ++invitees[p];
  }
  for (int i = 0; i < 10; ++i) {
    for (std::size_t b = 0; b < invitees[i] / kInviteesPerBonus; ++b) {
      char id[16];
      std::snprintf(id, sizeof id, "o%09zu", c.orders.size() + 1);
      c.orders.push_back({id, Timestamp{reg[i].seconds + 7200}, "invite_bonus", keys[i], keys[i]});
    }
  }
  c.accounts = keys;
  return c;
}

std::size_t claimable_bonuses(const std::vector<ReferralRow>& referrals,
                              std::size_t invitees_per_bonus) {
  if (invitees_per_bonus == 0) throw std::invalid_argument("invitees_per_bonus must be >= 1");
  std::map<std::string, std::size_t> per_sender;
  for (const auto& r : referrals) ++per_sender[r.sender_phone];
  std::size_t total = 0;
  for (const auto& [sender, n] : per_sender) total += n / invitees_per_bonus;
  return total;
}

}  // namespace fraudcc
