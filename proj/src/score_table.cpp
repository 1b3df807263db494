#include "fraudcc/score_table.hpp"

#include "fraudcc/components.hpp"

namespace fraudcc {

ScoreTable recompute(const PropertyGraph& g, const RecomputeOptions& options) {
  const EdgeFilter filter = filtered_view(options.window, options.now);
  const auto labeling = undirected_cc(g, options.edge_type, edge_predicate(g, options.edge_type, filter),
                                      options.exec, options.computed_at);

  std::unordered_map<VertexId, std::size_t> sizes;
  for (VertexId l : labeling.labels) {
    if (l != kNoLabel) ++sizes[l];
  }

  ScoreTable table;
  table.computed_at = options.computed_at;
  table.computed_at_ms = options.computed_at_ms;
  table.generation = options.generation;
  table.reference_now = options.now;
  table.window = options.window;
  table.threshold = options.threshold;
  table.component_count = sizes.size();
  for (const auto& [label, size] : sizes) ++table.size_histogram[size];

  table.records.reserve(labeling.labeled_count());
  for (VertexId v = 0; v < labeling.labels.size(); ++v) {
    const VertexId l = labeling.labels[v];
    if (l == kNoLabel) continue;
    const std::size_t size = sizes[l];
    table.records.emplace(g.key(v), RiskScoreRecord{g.key(v), size, options.computed_at,
                                                    size >= options.threshold});
  }
  return table;
}

}  // namespace fraudcc
