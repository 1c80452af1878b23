#pragma once

#include <utility>
#include <vector>

#include "lazysearch/graph.hpp"
#include "lazysearch/search.hpp"

namespace lazysearch {

/// Result of a reference shortest-path computation. evaluated_edges
/// records the edge-evaluation order where the oracle evaluates lazily.
struct OracleResult {
  bool found = false;
  std::vector<VertexId> path;
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::pair<VertexId, VertexId>> evaluated_edges;
};

/// Evaluates every edge up front, then runs Dijkstra over the Free
/// subgraph. The gold standard for optimality checks.
OracleResult dijkstra_full_eval(RoadmapGraph& graph, VertexId source,
                                VertexId target);

/// LazySP with the forward edge selector: repeatedly A*-search the lazy
/// graph (Blocked edges removed) and evaluate the first Unknown edge on
/// the candidate path, until a fully evaluated path survives.
/// Tie-breaking matches the lookahead searcher: queue keys (f, vertex
/// id); equal-cost relaxations prefer the smaller parent id.
OracleResult lazysp_forward(RoadmapGraph& graph, VertexId source,
                            VertexId target,
                            const HeuristicSpec& heuristic = {});

/// One simple path with both cost measures: lazy_cost sums the lazy
/// weights over every edge; true_cost is infinite when any edge on the
/// path evaluates Blocked, and equals the evaluated cost otherwise.
struct EnumeratedPath {
  std::vector<VertexId> vertices;
  double lazy_cost = 0.0;
  double true_cost = std::numeric_limits<double>::infinity();
};

/// Brute force: evaluates every edge and enumerates every simple
/// source-target path in the graph, reporting lazy and true costs for
/// each. Throws if the graph has more than max_vertices vertices.
std::vector<EnumeratedPath> enumerate_paths(RoadmapGraph& graph,
                                            VertexId source, VertexId target,
                                            std::size_t max_vertices = 12);

/// Minimum-true-cost path from enumerate_paths, as an OracleResult
/// (Failure when no enumerated path is collision-free).
OracleResult enumerate_shortest(RoadmapGraph& graph, VertexId source,
                                VertexId target,
                                std::size_t max_vertices = 12);

}  // namespace lazysearch
