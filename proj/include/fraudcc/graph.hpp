#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fraudcc/scalar.hpp"
#include "fraudcc/schema.hpp"

namespace fraudcc {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using TypeId = std::uint16_t;

enum class Direction { In, Out, Any };

struct VertexRef {
  std::string type_name;
  std::string key;

  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

struct VertexRecord {
  VertexRef ref;
  std::map<std::string, Scalar> attributes;
};

struct EdgeRecord {
  std::string edge_type;
  VertexRef from;
  VertexRef to;
  std::map<std::string, Scalar> attributes;
};

class UnknownVertex : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct EdgeEnds {
  TypeId type;
  VertexId from;
  VertexId to;
};

/// Typed property graph. Vertices are identified by (type, key); edges are
/// append-only and parallel edges are kept as distinct edge ids. Not
/// synchronized; see SharedGraph.
class PropertyGraph {
 public:
  explicit PropertyGraph(GraphSchema schema);

  const GraphSchema& schema() const { return schema_; }

  std::optional<TypeId> vertex_type_id(std::string_view name) const;
  std::optional<TypeId> edge_type_id(std::string_view name) const;
  TypeId require_vertex_type(std::string_view name) const;
  TypeId require_edge_type(std::string_view name) const;
  const VertexTypeDecl& vertex_type(TypeId t) const { return schema_.vertex_types[t]; }
  const EdgeTypeDecl& edge_type(TypeId t) const { return schema_.edge_types[t]; }

  /// Inserts or overwrites the listed attributes (last writer wins).
  VertexRef upsert_vertex(const VertexRecord& v);

  /// Endpoints that do not exist yet are created as bare vertices.
  EdgeId insert_edge(const EdgeRecord& e);

  /// Lower-level forms used by bulk paths; attributes are positional and
  /// must already match the declared kinds.
  VertexId ensure_vertex(TypeId type, std::string_view key, bool* created = nullptr);
  EdgeId insert_edge(TypeId type, VertexId from, VertexId to,
                     std::vector<std::optional<Scalar>> attributes);

  std::optional<VertexId> find_vertex(std::string_view type_name, std::string_view key) const;
  std::optional<VertexId> find_vertex(const VertexRef& ref) const {
    return find_vertex(ref.type_name, ref.key);
  }

  /// Undirected edge types report the same count for every direction.
  std::size_t degree(const VertexRef& v, std::string_view edge_type, Direction dir) const;
  std::size_t degree(VertexId v, TypeId edge_type, Direction dir) const;

  std::vector<VertexId> neighbors(VertexId v, TypeId edge_type, Direction dir) const;

  /// Calls fn(EdgeId, VertexId other) for each incident edge of the type.
  template <class Fn>
  void for_each_incident(VertexId v, TypeId edge_type, Direction dir, Fn&& fn) const;

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t vertex_count(TypeId type) const { return by_type_[type].size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t edge_count(TypeId type) const { return edges_by_type_[type].size(); }

  std::span<const VertexId> vertices_of_type(TypeId type) const { return by_type_[type]; }
  std::span<const EdgeId> edges_of_type(TypeId type) const { return edges_by_type_[type]; }

  TypeId vertex_type_of(VertexId v) const { return vertices_[v].type; }
  const std::string& key(VertexId v) const { return vertices_[v].key; }
  VertexRef ref(VertexId v) const;

  const Scalar* vertex_attribute(VertexId v, std::string_view name) const;
  const EdgeEnds& edge(EdgeId e) const { return edges_[e].ends; }
  const Scalar* edge_attribute(EdgeId e, std::size_t index) const;
  const Scalar* edge_attribute(EdgeId e, std::string_view name) const;

 private:
  struct VertexSlot {
    TypeId type;
    std::string key;
    std::vector<std::optional<Scalar>> attributes;
    std::vector<EdgeId> out;
    std::vector<EdgeId> in;
  };
  struct EdgeSlot {
    EdgeEnds ends;
    std::vector<std::optional<Scalar>> attributes;
  };

  std::vector<std::optional<Scalar>> bind_attributes(const std::vector<AttributeDecl>& decls,
                                                     const std::map<std::string, Scalar>& attrs,
                                                     std::string_view owner) const;

  GraphSchema schema_;
  std::vector<VertexSlot> vertices_;
  std::vector<EdgeSlot> edges_;
  std::vector<std::unordered_map<std::string, VertexId>> keys_;  // per vertex type
  std::vector<std::vector<VertexId>> by_type_;
  std::vector<std::vector<EdgeId>> edges_by_type_;
};

/// Validates the schema and returns an empty graph over it.
PropertyGraph register_schema(GraphSchema schema);

/// Canonical JSONL dump: vertices sorted by (type, key), then edges sorted by
/// (type, from, to, attributes). Equal graphs produce identical bytes.
void export_snapshot(const PropertyGraph& g, std::ostream& out);

/// Single-writer / multi-reader wrapper. Writers hold an exclusive lock for
/// the whole mutation, so readers never see a partially inserted edge.
class SharedGraph {
 public:
  explicit SharedGraph(PropertyGraph g) : graph_(std::move(g)) {}

  template <class Fn>
  decltype(auto) read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(static_cast<const PropertyGraph&>(graph_));
  }

  template <class Fn>
  decltype(auto) write(Fn&& fn) {
    std::unique_lock lock(mutex_);
    ++version_;
    return fn(graph_);
  }

  std::uint64_t version() const {
    std::shared_lock lock(mutex_);
    return version_;
  }

 private:
  mutable std::shared_mutex mutex_;
  PropertyGraph graph_;
  std::uint64_t version_ = 0;
};

template <class Fn>
void PropertyGraph::for_each_incident(VertexId v, TypeId edge_type, Direction dir,
                                      Fn&& fn) const {
  const auto& slot = vertices_[v];
  const bool directed = schema_.edge_types[edge_type].directed;
  if (!directed || dir != Direction::In) {
    for (EdgeId e : slot.out) {
      const auto& ends = edges_[e].ends;
      if (ends.type == edge_type) fn(e, ends.to);
    }
  }
  if (!directed || dir != Direction::Out) {
    for (EdgeId e : slot.in) {
      const auto& ends = edges_[e].ends;
      if (ends.type == edge_type) fn(e, ends.from);
    }
  }
}

}  // namespace fraudcc
