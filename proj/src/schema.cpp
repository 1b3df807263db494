#include "fraudcc/schema.hpp"

#include <set>

namespace fraudcc {

void GraphSchema::validate() const {
  std::set<std::string, std::less<>> type_names;
  std::set<std::string, std::less<>> vertex_names;
  for (const auto& v : vertex_types) {
    if (v.name.empty()) throw SchemaError("vertex type with empty name");
    if (!type_names.insert(v.name).second) throw SchemaError("duplicate type name: " + v.name);
    vertex_names.insert(v.name);
    std::set<std::string> attrs;
    for (const auto& a : v.attributes) {
      if (!attrs.insert(a.name).second) {
        throw SchemaError("duplicate attribute " + a.name + " on " + v.name);
      }
    }
  }
  for (const auto& [alias, target] : vertex_aliases) {
    if (!vertex_names.count(target)) throw SchemaError("alias " + alias + " -> unknown " + target);
    if (type_names.count(alias)) throw SchemaError("alias shadows type: " + alias);
  }
  auto known = [&](const std::string& name) {
    if (vertex_names.count(name)) return true;
    auto it = vertex_aliases.find(name);
    return it != vertex_aliases.end();
  };
  for (const auto& e : edge_types) {
    if (e.name.empty()) throw SchemaError("edge type with empty name");
    if (!type_names.insert(e.name).second) throw SchemaError("duplicate type name: " + e.name);
    if (!known(e.from_type)) {
      throw SchemaError("edge " + e.name + " references unknown vertex type " + e.from_type);
    }
    if (!known(e.to_type)) {
      throw SchemaError("edge " + e.name + " references unknown vertex type " + e.to_type);
    }
    std::set<std::string> attrs;
    for (const auto& a : e.attributes) {
      if (!attrs.insert(a.name).second) {
        throw SchemaError("duplicate attribute " + a.name + " on " + e.name);
      }
    }
  }
}

GraphSchema incentive_campaign_schema() {
  GraphSchema s;
  s.name = "IncentiveCampaignGraph";
  s.vertex_types = {
      {std::string(names::kAccount),
       {{"phone", ScalarKind::String}, {"reg_time", ScalarKind::Timestamp}}},
      {std::string(names::kImei), {{"imei", ScalarKind::String}}},
      {std::string(names::kOrder), {{"order_date", ScalarKind::Timestamp}}},
  };
  const std::string account(names::kAccount);
  s.edge_types = {
      {std::string(names::kUseImei), account, std::string(names::kImei), false, {}},
      {std::string(names::kInvite), account, account, true, {}},
      {std::string(names::kSendBonus), account, std::string(names::kOrder), true, {}},
      {std::string(names::kRecvBonus), std::string(names::kOrder), account, true, {}},
  };
  // Loading jobs written against the order log call the type BonusOrder.
  s.vertex_aliases = {{"BonusOrder", std::string(names::kOrder)}};
  return s;
}

GraphSchema cocontext_schema(std::string_view edge_type) {
  GraphSchema s;
  s.name = "CoContextGraph";
  const std::string account(names::kAccount);
  s.vertex_types = {{account, {}}};
  s.edge_types = {{std::string(edge_type),
                   account,
                   account,
                   false,
                   {{"created_at", ScalarKind::Timestamp},
                    {"delta", ScalarKind::Integer},
                    {"context_value", ScalarKind::String}}}};
  return s;
}

std::optional<std::size_t> attribute_index(const std::vector<AttributeDecl>& decls,
                                           std::string_view name) {
  for (std::size_t i = 0; i < decls.size(); ++i) {
    if (decls[i].name == name) return i;
  }
  return std::nullopt;
}

}  // namespace fraudcc
