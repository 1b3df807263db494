#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fraudcc/components.hpp"
#include "fraudcc/exec.hpp"
#include "fraudcc/graph.hpp"

namespace fraudcc {

struct ComponentProfile {
  VertexId label = kNoLabel;
  std::string label_key;
  std::vector<VertexId> members;  // ascending id
  std::size_t size = 0;
  std::size_t depth = 0;
  std::size_t bonus_sent = 0;
  double non_self_order_ratio = 0.0;
  double shared_device_ratio = 0.0;
  double gini = 0.0;

  friend bool operator==(const ComponentProfile&, const ComponentProfile&) = default;
};

/// Longest directed invite path (in edges) inside the labeled component.
/// Throws std::out_of_range for a label no vertex carries.
std::size_t cc_depth(const PropertyGraph& g, const ComponentLabeling& labeling, VertexId label);

/// |members| / |distinct IMEIs used by members|, or 0 without device edges.
double shared_device_ratio(const PropertyGraph& g, std::span<const VertexId> members);

struct OrderRatio {
  std::size_t bonus_sent = 0;  // send_bonus edges leaving members
  double ratio = 0.0;          // share of those orders received by someone else
};

/// Orders with no recv_bonus edge count toward bonus_sent but are left out
/// of the ratio.
OrderRatio non_self_order_ratio(const PropertyGraph& g, std::span<const VertexId> members);

/// Sum_i Sum_j |x_i - x_j| / (2 n^2 mean); 0 when the mean is 0. Throws
/// std::invalid_argument on an empty list or a negative count.
double gini_index(std::span<const double> counts);

/// Invitee counts of members that invited at least one account.
std::vector<double> invitor_counts(const PropertyGraph& g, std::span<const VertexId> members);

/// One profile per labeled component, ordered by label key.
std::vector<ComponentProfile> profile_components(const PropertyGraph& g,
                                                 const ComponentLabeling& labeling,
                                                 Exec exec = Exec::Serial);

/// One-step account statistics; no components involved.
struct AccountStats {
  std::size_t accounts_on_same_imei = 0;  // max over the account's IMEIs
  std::size_t senders_to_me = 0;          // distinct senders of orders I receive

  friend bool operator==(const AccountStats&, const AccountStats&) = default;
};

/// Entry for every Account vertex.
std::map<VertexId, AccountStats> per_account_stats(const PropertyGraph& g);

}  // namespace fraudcc
