#include "lazysearch/oracles.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace lazysearch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AStarOutcome {
  bool found = false;
  std::vector<VertexId> path;
  double cost = kInf;
};

/// A* over the graph treating Blocked edges as absent and every other
/// edge at its lazy weight. Tie-breaks: pop order (key, vertex id);
/// equal-g relaxations keep the smaller parent id.
AStarOutcome lazy_astar(const RoadmapGraph& graph, VertexId source,
                        VertexId target,
                        const std::function<double(VertexId)>& h) {
  const std::size_t n = graph.vertex_count();
  std::vector<double> g(n, kInf);
  std::vector<VertexId> parent(n, kInvalidVertex);
  std::vector<char> closed(n, 0);
  std::set<std::pair<double, VertexId>> open;

  g[source] = 0.0;
  open.emplace(h(source), source);
  while (!open.empty()) {
    const VertexId u = open.begin()->second;
    open.erase(open.begin());
    if (closed[u]) continue;
    closed[u] = 1;
    if (u == target) break;
    for (EdgeId e : graph.incident_edges(u)) {
      if (graph.status(e) == EdgeStatus::Blocked) continue;
      const VertexId v = graph.opposite(e, u);
      if (closed[v]) continue;
      const double cand = g[u] + graph.lazy_weight(e);
      if (cand > g[v]) continue;
      if (cand == g[v] && parent[v] <= u) continue;
      if (g[v] != kInf) {
        open.erase({g[v] + h(v), v});
      }
      g[v] = cand;
      parent[v] = u;
      open.emplace(cand + h(v), v);
    }
  }

  AStarOutcome out;
  if (g[target] == kInf || !closed[target]) {
    return out;
  }
  out.found = true;
  out.cost = g[target];
  for (VertexId v = target; v != kInvalidVertex; v = parent[v]) {
    out.path.push_back(v);
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

}  // namespace

OracleResult dijkstra_full_eval(RoadmapGraph& graph, VertexId source,
                                VertexId target) {
  OracleResult result;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    if (graph.status(e) == EdgeStatus::Unknown) {
      graph.evaluate_edge(e);
      result.evaluated_edges.emplace_back(graph.edge(e).a, graph.edge(e).b);
    }
  }
  const auto zero = [](VertexId) { return 0.0; };
  const AStarOutcome out = lazy_astar(graph, source, target, zero);
  result.found = out.found;
  result.path = out.path;
  result.cost = out.cost;
  return result;
}

OracleResult lazysp_forward(RoadmapGraph& graph, VertexId source,
                            VertexId target, const HeuristicSpec& heuristic) {
  OracleResult result;
  if (source == target) {
    result.found = true;
    result.path = {source};
    result.cost = 0.0;
    return result;
  }
  const auto h = make_heuristic(graph, target, heuristic);
  for (;;) {
    const AStarOutcome out = lazy_astar(graph, source, target, h);
    if (!out.found) {
      return result;  // no candidate survives: failure
    }
    bool fully_evaluated = true;
    for (std::size_t i = 0; i + 1 < out.path.size(); ++i) {
      const VertexId a = out.path[i];
      const VertexId b = out.path[i + 1];
      const EdgeId e = *graph.find_edge(a, b);
      if (graph.status(e) != EdgeStatus::Unknown) continue;
      graph.evaluate_edge(e);
      result.evaluated_edges.emplace_back(a, b);
      fully_evaluated = false;
      break;  // forward selector: first unevaluated edge only
    }
    if (fully_evaluated) {
      result.found = true;
      result.path = out.path;
      result.cost = out.cost;
      return result;
    }
  }
}

namespace {

void enumerate_recurse(const RoadmapGraph& graph, VertexId current,
                       VertexId target, std::vector<VertexId>& path,
                       std::vector<char>& visited, double lazy_cost,
                       bool blocked, std::vector<EnumeratedPath>& out) {
  if (current == target) {
    EnumeratedPath p;
    p.vertices = path;
    p.lazy_cost = lazy_cost;
    p.true_cost = blocked ? kInf : lazy_cost;
    out.push_back(std::move(p));
    return;
  }
  for (EdgeId e : graph.incident_edges(current)) {
    const VertexId next = graph.opposite(e, current);
    if (visited[next]) continue;
    visited[next] = 1;
    path.push_back(next);
    enumerate_recurse(graph, next, target, path, visited,
                      lazy_cost + graph.lazy_weight(e),
                      blocked || graph.status(e) == EdgeStatus::Blocked, out);
    path.pop_back();
    visited[next] = 0;
  }
}

}  // namespace

std::vector<EnumeratedPath> enumerate_paths(RoadmapGraph& graph,
                                            VertexId source, VertexId target,
                                            std::size_t max_vertices) {
  if (graph.vertex_count() > max_vertices) {
    throw std::invalid_argument("graph too large for path enumeration");
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    if (graph.status(e) == EdgeStatus::Unknown) {
      graph.evaluate_edge(e);
    }
  }
  std::vector<EnumeratedPath> paths;
  if (source == target) {
    EnumeratedPath p;
    p.vertices = {source};
    p.true_cost = 0.0;
    paths.push_back(std::move(p));
    return paths;
  }
  std::vector<VertexId> path{source};
  std::vector<char> visited(graph.vertex_count(), 0);
  visited[source] = 1;
  enumerate_recurse(graph, source, target, path, visited, 0.0, false, paths);
  return paths;
}

OracleResult enumerate_shortest(RoadmapGraph& graph, VertexId source,
                                VertexId target, std::size_t max_vertices) {
  OracleResult result;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    if (graph.status(e) == EdgeStatus::Unknown) {
      result.evaluated_edges.emplace_back(graph.edge(e).a, graph.edge(e).b);
    }
  }
  for (const EnumeratedPath& p :
       enumerate_paths(graph, source, target, max_vertices)) {
    if (p.true_cost < result.cost) {
      result.found = true;
      result.cost = p.true_cost;
      result.path = p.vertices;
    }
  }
  return result;
}

}  // namespace lazysearch
