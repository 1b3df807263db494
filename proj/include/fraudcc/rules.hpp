#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraudcc/profile.hpp"

namespace fraudcc {

/// Rule cut-offs. Strict vs inclusive comparisons are fixed per rule:
/// a depth >; b bonus_sent > and ratio >; c size >= and device ratio >;
/// d size >= and gini <; e >=; f >=.
struct RuleThresholds {
  std::size_t depth_gt = 5;
  std::size_t bonus_sent_gt = 10;
  double non_self_ratio_gt = 0.5;
  std::size_t min_cc_size = 30;
  double device_ratio_gt = 2.0;
  double gini_lt = 0.1;
  std::size_t accounts_per_imei_ge = 3;
  std::size_t senders_per_receiver_ge = 3;
};

void from_json(const nlohmann::json& j, RuleThresholds& t);
void to_json(nlohmann::json& j, const RuleThresholds& t);

struct RuleOutcome {
  char rule_id = 'a';
  std::string description;
  std::set<std::string> accounts;
  std::set<std::string> orders;
  std::optional<std::size_t> cc_count;  // not applicable to one-step rules
};

/// Rules a..j in order. a-d flag whole components; e and f flag single
/// accounts; g = a|b|c|d, h = e|f, i = g|h, j = (g|h) minus d. Orders of a
/// row are the orders sent or received by its accounts.
std::vector<RuleOutcome> evaluate_rules(const PropertyGraph& g,
                                        std::span<const ComponentProfile> profiles,
                                        const std::map<VertexId, AccountStats>& stats,
                                        const RuleThresholds& thresholds = {});

const RuleOutcome& outcome(const std::vector<RuleOutcome>& outcomes, char rule_id);

nlohmann::ordered_json to_json(const RuleOutcome& o);

}  // namespace fraudcc
