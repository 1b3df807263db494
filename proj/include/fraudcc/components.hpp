#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fraudcc/cocontext.hpp"
#include "fraudcc/exec.hpp"
#include "fraudcc/graph.hpp"

namespace fraudcc {

inline constexpr VertexId kNoLabel = std::numeric_limits<VertexId>::max();

/// Component label per vertex (the label is itself a vertex id).
struct ComponentLabeling {
  std::vector<VertexId> labels;  // indexed by VertexId
  Timestamp computed_at;

  bool labeled(VertexId v) const { return v < labels.size() && labels[v] != kNoLabel; }
  std::optional<VertexId> label(VertexId v) const {
    if (!labeled(v)) return std::nullopt;
    return labels[v];
  }
  std::size_t labeled_count() const;
  /// label -> members, members ascending by id.
  std::map<VertexId, std::vector<VertexId>> groups() const;
};

class CycleError : public std::runtime_error {
 public:
  CycleError(std::string vertex_key)
      : std::runtime_error("cycle through vertex " + vertex_key), vertex_key_(std::move(vertex_key)) {}
  const std::string& vertex_key() const { return vertex_key_; }

 private:
  std::string vertex_key_;
};

/// Max-ancestor propagation over a directed acyclic edge type. Roots
/// (in-degree 0, out-degree > 0) seed their own id; every descendant keeps
/// the root with the greatest key among those reaching it. Vertices with no
/// edge of the type stay unlabeled. Throws CycleError naming a vertex on a
/// cycle.
ComponentLabeling dag_cc(const PropertyGraph& g, std::string_view edge_type = names::kInvite,
                         Exec exec = Exec::Serial, Timestamp computed_at = {});

/// Undirected components over edges of the type that pass the predicate
/// (all edges when empty). Label = member with the smallest key. Vertices
/// with no accepted edge stay unlabeled.
ComponentLabeling undirected_cc(const PropertyGraph& g, std::string_view edge_type,
                                const EdgePredicate& predicate = {}, Exec exec = Exec::Serial,
                                Timestamp computed_at = {});

namespace kernels {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Root per vertex; the root is the smallest index in the component.
std::vector<std::uint32_t> components_serial(std::uint32_t n, std::span<const Edge> edges);
std::vector<std::uint32_t> components_parallel(std::uint32_t n, std::span<const Edge> edges);

inline constexpr std::int64_t kNoRank = -1;

/// Thrown with the index of a vertex lying on a directed cycle.
struct CycleAt {
  std::uint32_t vertex;
};

/// For every vertex the greatest seed rank among its ancestors (itself
/// included); kNoRank when none. Throws CycleAt.
std::vector<std::int64_t> propagate_max_serial(std::uint32_t n, std::span<const Edge> edges,
                                               std::span<const std::int64_t> seed);
std::vector<std::int64_t> propagate_max_parallel(std::uint32_t n, std::span<const Edge> edges,
                                                 std::span<const std::int64_t> seed);

}  // namespace kernels

}  // namespace fraudcc
