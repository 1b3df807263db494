#include "fraudcc/graph.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace fraudcc {

PropertyGraph::PropertyGraph(GraphSchema schema) : schema_(std::move(schema)) {
  schema_.validate();
  if (schema_.vertex_types.size() > std::numeric_limits<TypeId>::max() ||
      schema_.edge_types.size() > std::numeric_limits<TypeId>::max()) {
    throw SchemaError("too many types");
  }
  keys_.resize(schema_.vertex_types.size());
  by_type_.resize(schema_.vertex_types.size());
  edges_by_type_.resize(schema_.edge_types.size());
}

PropertyGraph register_schema(GraphSchema schema) { return PropertyGraph(std::move(schema)); }

std::optional<TypeId> PropertyGraph::vertex_type_id(std::string_view name) const {
  if (auto it = schema_.vertex_aliases.find(std::string(name)); it != schema_.vertex_aliases.end()) {
    name = it->second;
  }
  for (std::size_t i = 0; i < schema_.vertex_types.size(); ++i) {
    if (schema_.vertex_types[i].name == name) return static_cast<TypeId>(i);
  }
  return std::nullopt;
}

std::optional<TypeId> PropertyGraph::edge_type_id(std::string_view name) const {
  for (std::size_t i = 0; i < schema_.edge_types.size(); ++i) {
    if (schema_.edge_types[i].name == name) return static_cast<TypeId>(i);
  }
  return std::nullopt;
}

TypeId PropertyGraph::require_vertex_type(std::string_view name) const {
  auto t = vertex_type_id(name);
  if (!t) throw SchemaError("unknown vertex type: " + std::string(name));
  return *t;
}

TypeId PropertyGraph::require_edge_type(std::string_view name) const {
  auto t = edge_type_id(name);
  if (!t) throw SchemaError("unknown edge type: " + std::string(name));
  return *t;
}

std::vector<std::optional<Scalar>> PropertyGraph::bind_attributes(
    const std::vector<AttributeDecl>& decls, const std::map<std::string, Scalar>& attrs,
    std::string_view owner) const {
  std::vector<std::optional<Scalar>> bound(decls.size());
  for (const auto& [name, value] : attrs) {
    auto idx = attribute_index(decls, name);
    if (!idx) throw SchemaError("unknown attribute " + name + " on " + std::string(owner));
    const ScalarKind want = decls[*idx].kind;
    const ScalarKind have = kind_of(value);
    if (want == have) {
      bound[*idx] = value;
    } else if (want == ScalarKind::Float && have == ScalarKind::Integer) {
      bound[*idx] = Scalar{static_cast<double>(std::get<std::int64_t>(value))};
    } else {
      throw SchemaError("attribute " + name + " on " + std::string(owner) + " expects " +
                        std::string(kind_name(want)) + ", got " + std::string(kind_name(have)));
    }
  }
  return bound;
}

VertexId PropertyGraph::ensure_vertex(TypeId type, std::string_view key, bool* created) {
  auto& index = keys_[type];
  if (auto it = index.find(std::string(key)); it != index.end()) {
    if (created) *created = false;
    return it->second;
  }
  if (vertices_.size() >= std::numeric_limits<VertexId>::max()) {
    throw std::length_error("vertex id space exhausted");
  }
  const auto id = static_cast<VertexId>(vertices_.size());
  VertexSlot slot;
  slot.type = type;
  slot.key = std::string(key);
  slot.attributes.resize(schema_.vertex_types[type].attributes.size());
  vertices_.push_back(std::move(slot));
  index.emplace(std::string(key), id);
  by_type_[type].push_back(id);
  if (created) *created = true;
  return id;
}

VertexRef PropertyGraph::upsert_vertex(const VertexRecord& v) {
  const TypeId type = require_vertex_type(v.ref.type_name);
  if (v.ref.key.empty()) throw SchemaError("empty primary key for " + v.ref.type_name);
  // Validate before touching the graph so a bad record leaves no trace.
  auto bound = bind_attributes(schema_.vertex_types[type].attributes, v.attributes,
                               schema_.vertex_types[type].name);
  const VertexId id = ensure_vertex(type, v.ref.key);
  auto& slot = vertices_[id];
  for (std::size_t i = 0; i < bound.size(); ++i) {
    if (bound[i]) slot.attributes[i] = std::move(bound[i]);
  }
  return VertexRef{schema_.vertex_types[type].name, v.ref.key};
}

EdgeId PropertyGraph::insert_edge(const EdgeRecord& e) {
  const TypeId type = require_edge_type(e.edge_type);
  const auto& decl = schema_.edge_types[type];
  auto bound = bind_attributes(decl.attributes, e.attributes, decl.name);
  // Type-check both endpoints before creating either.
  for (const auto* ref : {&e.from, &e.to}) {
    const auto& want = ref == &e.from ? decl.from_type : decl.to_type;
    auto given = vertex_type_id(ref->type_name);
    if (!given || *given != require_vertex_type(want)) {
      throw SchemaError("edge " + decl.name + " expects endpoint of type " + want + ", got " +
                        ref->type_name);
    }
    if (ref->key.empty()) throw SchemaError("empty endpoint key on edge " + decl.name);
  }
  const VertexId from = ensure_vertex(require_vertex_type(decl.from_type), e.from.key);
  const VertexId to = ensure_vertex(require_vertex_type(decl.to_type), e.to.key);
  return insert_edge(type, from, to, std::move(bound));
}

EdgeId PropertyGraph::insert_edge(TypeId type, VertexId from, VertexId to,
                                  std::vector<std::optional<Scalar>> attributes) {
  if (edges_.size() >= std::numeric_limits<EdgeId>::max()) {
    throw std::length_error("edge id space exhausted");
  }
  attributes.resize(schema_.edge_types[type].attributes.size());
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back(EdgeSlot{EdgeEnds{type, from, to}, std::move(attributes)});
  vertices_[from].out.push_back(id);
  vertices_[to].in.push_back(id);
  edges_by_type_[type].push_back(id);
  return id;
}

std::optional<VertexId> PropertyGraph::find_vertex(std::string_view type_name,
                                                   std::string_view key) const {
  auto type = vertex_type_id(type_name);
  if (!type) return std::nullopt;
  const auto& index = keys_[*type];
  if (auto it = index.find(std::string(key)); it != index.end()) return it->second;
  return std::nullopt;
}

std::size_t PropertyGraph::degree(const VertexRef& v, std::string_view edge_type,
                                  Direction dir) const {
  auto id = find_vertex(v);
  if (!id) throw UnknownVertex("unknown vertex " + v.type_name + ":" + v.key);
  return degree(*id, require_edge_type(edge_type), dir);
}

std::size_t PropertyGraph::degree(VertexId v, TypeId edge_type, Direction dir) const {
  std::size_t n = 0;
  for_each_incident(v, edge_type, dir, [&](EdgeId, VertexId) { ++n; });
  return n;
}

std::vector<VertexId> PropertyGraph::neighbors(VertexId v, TypeId edge_type, Direction dir) const {
  std::vector<VertexId> out;
  for_each_incident(v, edge_type, dir, [&](EdgeId, VertexId other) { out.push_back(other); });
  return out;
}

VertexRef PropertyGraph::ref(VertexId v) const {
  return VertexRef{schema_.vertex_types[vertices_[v].type].name, vertices_[v].key};
}

const Scalar* PropertyGraph::vertex_attribute(VertexId v, std::string_view name) const {
  const auto& slot = vertices_[v];
  auto idx = attribute_index(schema_.vertex_types[slot.type].attributes, name);
  if (!idx || !slot.attributes[*idx]) return nullptr;
  return &*slot.attributes[*idx];
}

const Scalar* PropertyGraph::edge_attribute(EdgeId e, std::size_t index) const {
  const auto& attrs = edges_[e].attributes;
  if (index >= attrs.size() || !attrs[index]) return nullptr;
  return &*attrs[index];
}

const Scalar* PropertyGraph::edge_attribute(EdgeId e, std::string_view name) const {
  auto idx = attribute_index(schema_.edge_types[edges_[e].ends.type].attributes, name);
  if (!idx) return nullptr;
  return edge_attribute(e, *idx);
}

namespace {

nlohmann::json scalar_json(const Scalar& s) {
  switch (s.index()) {
    case 0: return std::get<std::string>(s);
    case 1: return std::get<std::int64_t>(s);
    case 2: return std::get<double>(s);
    default: return std::get<Timestamp>(s).seconds;
  }
}

}  // namespace

void export_snapshot(const PropertyGraph& g, std::ostream& out) {
  using nlohmann::json;
  const auto& schema = g.schema();
  std::vector<std::string> lines;
  for (TypeId t = 0; t < schema.vertex_types.size(); ++t) {
    const auto& decl = schema.vertex_types[t];
    lines.clear();
    for (VertexId v : g.vertices_of_type(t)) {
      json j;
      j["vertex"] = decl.name;
      j["key"] = g.key(v);
      json attrs = json::object();
      for (const auto& a : decl.attributes) {
        if (const Scalar* s = g.vertex_attribute(v, a.name)) attrs[a.name] = scalar_json(*s);
      }
      j["attrs"] = std::move(attrs);
      lines.push_back(j.dump());
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out << l << '\n';
  }
  for (TypeId t = 0; t < schema.edge_types.size(); ++t) {
    const auto& decl = schema.edge_types[t];
    lines.clear();
    for (EdgeId e : g.edges_of_type(t)) {
      const auto& ends = g.edge(e);
      std::string from = g.key(ends.from);
      std::string to = g.key(ends.to);
      if (!decl.directed && decl.from_type == decl.to_type && to < from) std::swap(from, to);
      json j;
      j["edge"] = decl.name;
      j["from"] = from;
      j["to"] = to;
      json attrs = json::object();
      for (std::size_t i = 0; i < decl.attributes.size(); ++i) {
        if (const Scalar* s = g.edge_attribute(e, i)) attrs[decl.attributes[i].name] = scalar_json(*s);
      }
      j["attrs"] = std::move(attrs);
      lines.push_back(j.dump());
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out << l << '\n';
  }
}

}  // namespace fraudcc
