#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fraudcc/scalar.hpp"

namespace fraudcc {

/// Type and edge names shared by the two account graphs.
namespace names {
inline constexpr std::string_view kAccount = "Account";
inline constexpr std::string_view kImei = "IMEI";
inline constexpr std::string_view kOrder = "Order";
inline constexpr std::string_view kInvite = "invite";
inline constexpr std::string_view kUseImei = "use_imei";
inline constexpr std::string_view kSendBonus = "send_bonus";
inline constexpr std::string_view kRecvBonus = "recv_bonus";
inline constexpr std::string_view kSharedIp = "shared_ip";
}  // namespace names

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AttributeDecl {
  std::string name;
  ScalarKind kind = ScalarKind::String;
};

struct VertexTypeDecl {
  std::string name;
  /// Non-key attributes. The primary key is the vertex key itself.
  std::vector<AttributeDecl> attributes;
};

struct EdgeTypeDecl {
  std::string name;
  std::string from_type;
  std::string to_type;
  bool directed = true;
  std::vector<AttributeDecl> attributes;
};

struct GraphSchema {
  std::string name;
  std::vector<VertexTypeDecl> vertex_types;
  std::vector<EdgeTypeDecl> edge_types;
  /// Alternate spellings of vertex type names (e.g. BonusOrder -> Order).
  std::map<std::string, std::string> vertex_aliases;

  /// Throws SchemaError on duplicate names or dangling edge endpoints.
  void validate() const;

  std::size_t type_count() const { return vertex_types.size() + edge_types.size(); }
};

/// Account / IMEI / Order with use_imei, invite, send_bonus, recv_bonus.
GraphSchema incentive_campaign_schema();

/// Account vertices joined by one undirected co-context edge type carrying
/// created_at, delta and context_value.
GraphSchema cocontext_schema(std::string_view edge_type = names::kSharedIp);

std::optional<std::size_t> attribute_index(const std::vector<AttributeDecl>& decls,
                                           std::string_view name);

}  // namespace fraudcc
