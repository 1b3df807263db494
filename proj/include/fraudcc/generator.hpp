#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fraudcc/risk_event.hpp"
#include "fraudcc/timeutil.hpp"

namespace fraudcc {

enum class Pattern { LongChain, DeviceFarm, BonusAggregation, HomogeneousFanout, IpBurst };

std::string_view pattern_name(Pattern p);
Pattern parse_pattern(std::string_view name);

struct FraudGroupSpec {
  Pattern pattern = Pattern::LongChain;
  std::size_t depth = 60;          // long_chain: hops, so depth + 1 accounts
  std::size_t accounts = 40;       // device_farm, ip_burst
  std::size_t imeis = 8;           // device_farm
  std::size_t senders = 20;        // bonus_aggregation
  std::size_t beneficiaries = 2;   // bonus_aggregation
  std::size_t fanout = 10;         // homogeneous_fanout
  std::size_t levels = 3;          // homogeneous_fanout
  std::size_t ips = 2;             // ip_burst
  std::int64_t intra_gap_s = 5;    // ip_burst

  std::size_t account_count() const;
};

/// Knobs for the benign population. None of these are calibrated to real
/// traffic.
struct NormalTraffic {
  double p_no_invite = 0.55;       // share of accounts inviting nobody
  double fanout_alpha = 2.0;       // power-law exponent on 1..max_fanout
  std::size_t max_fanout = 40;
  std::size_t spike_at = 10;
  double spike_mass = 0.05;        // extra mass at spike_at among inviters
  std::size_t max_depth = 4;
  double shared_imei_rate = 0.01;  // share of accounts in an IMEI-sharing pair
  double gift_rate = 0.1;          // bonus sent to an invitee instead of self
  double collision_rate = 0.02;    // share of accounts in a neighborhood IP group
  std::size_t collision_group_min = 10;
  std::size_t collision_group_max = 20;
  std::int64_t collision_gap_min_s = 101;
  std::int64_t collision_gap_max_s = 1800;
  std::size_t events_min = 1;
  std::size_t events_max = 3;
};

struct CampaignSpec {
  std::uint64_t seed = 1;
  std::size_t n_normal_accounts = 50000;
  std::vector<FraudGroupSpec> groups;
  std::size_t invitees_per_bonus = 10;
  Timestamp start{1605830400};  // 2020-11-20T00:00:00Z
  std::int64_t duration_s = 5 * kSecondsPerDay;
  NormalTraffic normal;

  /// Throws std::invalid_argument for infeasible specs.
  void validate() const;
};

void from_json(const nlohmann::json& j, FraudGroupSpec& g);
void to_json(nlohmann::json& j, const FraudGroupSpec& g);
void from_json(const nlohmann::json& j, NormalTraffic& n);
void to_json(nlohmann::json& j, const NormalTraffic& n);
void from_json(const nlohmann::json& j, CampaignSpec& s);
void to_json(nlohmann::json& j, const CampaignSpec& s);

/// Two groups per pattern with default parameters.
std::vector<FraudGroupSpec> default_fraud_groups();

struct GroundTruthGroup {
  std::size_t id = 0;
  Pattern pattern = Pattern::LongChain;
  std::vector<std::string> accounts;  // ascending
};

struct GroundTruth {
  std::set<std::string> fraud_accounts;
  std::vector<GroundTruthGroup> groups;
};

struct ReferralRow {
  std::string recv_phone;
  Timestamp recv_reg_date;
  std::string sender_phone;
  Timestamp sender_reg_date;
};

struct DeviceRow {
  std::string phone;
  std::string imei;
};

struct OrderRow {
  std::string order_id;
  Timestamp order_date;
  std::string bonus_name;
  std::string sender;
  std::string receiver;
};

struct Campaign {
  std::vector<std::string> accounts;  // every generated account, ascending
  std::vector<ReferralRow> referrals;
  std::vector<DeviceRow> devices;
  std::vector<OrderRow> orders;
  std::vector<RiskEvent> events;  // non-decreasing ts
  GroundTruth truth;
};

Campaign generate(const CampaignSpec& spec);

/// Writes orders.jsonl, devices.csv, referrals.csv, events.jsonl and
/// ground_truth.jsonl into dir.
void write_campaign(const Campaign& c, const std::filesystem::path& dir);

void write_orders(std::ostream& out, const std::vector<OrderRow>& rows);
void write_devices(std::ostream& out, const std::vector<DeviceRow>& rows);
void write_referrals(std::ostream& out, const std::vector<ReferralRow>& rows);
void write_ground_truth(std::ostream& out, const GroundTruth& truth);

GroundTruth read_ground_truth(std::istream& in);
GroundTruth read_ground_truth(const std::filesystem::path& path);
std::vector<ReferralRow> read_referrals(std::istream& in);

/// The three invitation strategies of a 10-account ring: 1 = root invites 4
/// and one of them invites 5; 2 = star of 9; 3 = comb of fanout 3 over three
/// levels.
Campaign strategy_campaign(int strategy, std::uint64_t seed = 1);

/// Sum over invitors of floor(invitees / invitees_per_bonus).
std::size_t claimable_bonuses(const std::vector<ReferralRow>& referrals,
                              std::size_t invitees_per_bonus);

/// Deterministic across standard libraries: only the engine is taken from
/// <random>, never a distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fraudcc
