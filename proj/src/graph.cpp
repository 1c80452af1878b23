#include "lazysearch/graph.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lazysearch {

namespace {

std::uint64_t pair_key(VertexId a, VertexId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

RoadmapGraph::RoadmapGraph(std::size_t vertex_count, std::size_t dimension)
    : dimension_(dimension),
      coordinates_(vertex_count * dimension, 0.0),
      adjacency_(vertex_count) {}

void RoadmapGraph::check_vertex(VertexId v) const {
  if (v >= vertex_count()) {
    throw std::out_of_range("invalid vertex id " + std::to_string(v));
  }
}

void RoadmapGraph::check_edge(EdgeId e) const {
  if (e >= edges_.size()) {
    throw std::out_of_range("invalid edge index " + std::to_string(e));
  }
}

void RoadmapGraph::set_coordinates(VertexId v, std::span<const double> coords) {
  check_vertex(v);
  if (coords.size() != dimension_) {
    throw std::invalid_argument("coordinate dimension mismatch");
  }
  std::copy(coords.begin(), coords.end(),
            coordinates_.begin() + static_cast<std::ptrdiff_t>(v * dimension_));
}

std::span<const double> RoadmapGraph::coordinates(VertexId v) const {
  check_vertex(v);
  return {coordinates_.data() + v * dimension_, dimension_};
}

EdgeId RoadmapGraph::add_edge(VertexId a, VertexId b, double lazy_weight) {
  check_vertex(a);
  check_vertex(b);
  if (a == b) {
    throw std::invalid_argument("self-loop edge");
  }
  if (!(lazy_weight > 0.0) || !std::isfinite(lazy_weight)) {
    throw std::invalid_argument("lazy weight must be positive and finite");
  }
  if (a > b) {
    std::swap(a, b);
  }
  if (edge_index_.count(pair_key(a, b)) != 0) {
    throw std::invalid_argument("duplicate edge");
  }
  const EdgeId e = edges_.size();
  edges_.push_back(EdgeRecord{a, b, lazy_weight, EdgeStatus::Unknown});
  seeded_.push_back(-1);
  invocations_.push_back(0);
  adjacency_[a].push_back(e);
  adjacency_[b].push_back(e);
  edge_index_.emplace(pair_key(a, b), e);
  return e;
}

const EdgeRecord& RoadmapGraph::edge(EdgeId e) const {
  check_edge(e);
  return edges_[e];
}

const std::vector<EdgeId>& RoadmapGraph::incident_edges(VertexId v) const {
  check_vertex(v);
  return adjacency_[v];
}

VertexId RoadmapGraph::opposite(EdgeId e, VertexId v) const {
  const EdgeRecord& rec = edge(e);
  if (rec.a == v) return rec.b;
  if (rec.b == v) return rec.a;
  throw std::invalid_argument("vertex not incident to edge");
}

std::optional<EdgeId> RoadmapGraph::find_edge(VertexId a, VertexId b) const {
  check_vertex(a);
  check_vertex(b);
  if (a > b) std::swap(a, b);
  auto it = edge_index_.find(pair_key(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

double RoadmapGraph::lazy_weight(EdgeId e) const { return edge(e).lazy_weight; }

EdgeStatus RoadmapGraph::status(EdgeId e) const { return edge(e).status; }

EdgeStatus RoadmapGraph::evaluate_edge(EdgeId e) {
  check_edge(e);
  EdgeRecord& rec = edges_[e];
  if (rec.status != EdgeStatus::Unknown) {
    return rec.status;
  }
  if (!evaluator_) {
    throw std::logic_error("no evaluator bound to graph");
  }
  const auto t0 = std::chrono::steady_clock::now();
  ++invocations_[e];
  const bool free = evaluator_(*this, e);
  const auto t1 = std::chrono::steady_clock::now();
  evaluation_time_us_ +=
      std::chrono::duration<double, std::micro>(t1 - t0).count();
  rec.status = free ? EdgeStatus::Free : EdgeStatus::Blocked;
  ++evaluation_count_;
  return rec.status;
}

void RoadmapGraph::seed_outcome(EdgeId e, bool free) {
  check_edge(e);
  seeded_[e] = free ? 1 : 0;
}

std::optional<bool> RoadmapGraph::seeded(EdgeId e) const {
  check_edge(e);
  if (seeded_[e] < 0) return std::nullopt;
  return seeded_[e] != 0;
}

void RoadmapGraph::use_seeded_evaluator() {
  set_evaluator([](const RoadmapGraph& g, EdgeId e) {
    const auto seed = g.seeded(e);
    return !seed || *seed;  // unseeded edges evaluate Free
  });
}

std::size_t RoadmapGraph::evaluator_invocations(EdgeId e) const {
  check_edge(e);
  return invocations_[e];
}

std::size_t RoadmapGraph::max_invocations_per_edge() const {
  std::uint32_t worst = 0;
  for (std::uint32_t count : invocations_) {
    worst = std::max(worst, count);
  }
  return worst;
}

PathCosts path_costs(const RoadmapGraph& graph, const PathView& path) {
  PathCosts costs;
  if (path.vertices.empty()) {
    throw std::invalid_argument("empty path");
  }
  const std::size_t edge_total = path.vertices.size() - 1;
  if (path.split_index > edge_total) {
    throw std::invalid_argument("split index beyond path length");
  }
  for (std::size_t i = 0; i < edge_total; ++i) {
    const auto e = graph.find_edge(path.vertices[i], path.vertices[i + 1]);
    if (!e) {
      throw std::invalid_argument("consecutive path vertices not adjacent");
    }
    const EdgeStatus status = graph.status(*e);
    if (i < path.split_index) {
      if (status != EdgeStatus::Free) {
        throw std::invalid_argument("head edge not evaluated Free");
      }
      costs.evaluated_cost += graph.lazy_weight(*e);
    } else {
      if (status != EdgeStatus::Unknown) {
        throw std::invalid_argument("tail edge already evaluated");
      }
      costs.lazy_tail_cost += graph.lazy_weight(*e);
    }
  }
  costs.estimated_total = costs.evaluated_cost + costs.lazy_tail_cost;
  return costs;
}

void write_graph(const RoadmapGraph& graph, std::ostream& out) {
  out << std::setprecision(17);
  out << graph.dimension() << ' ' << graph.vertex_count() << ' '
      << graph.edge_count() << '\n';
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    out << "v " << v;
    for (double c : graph.coordinates(v)) {
      out << ' ' << c;
    }
    out << '\n';
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const EdgeRecord& rec = graph.edge(e);
    // Evaluated edges write their status; unevaluated edges keep any
    // seeded outcome so a written graph replays identically.
    char flag = 'U';
    if (rec.status == EdgeStatus::Free) {
      flag = 'F';
    } else if (rec.status == EdgeStatus::Blocked) {
      flag = 'B';
    } else if (auto seed = graph.seeded(e)) {
      flag = *seed ? 'F' : 'B';
    }
    out << "e " << rec.a << ' ' << rec.b << ' ' << rec.lazy_weight;
    out << ' ' << flag << '\n';
  }
}

RoadmapGraph read_graph(std::istream& in) {
  std::size_t dim = 0, n = 0, m = 0;
  if (!(in >> dim >> n >> m)) {
    throw std::runtime_error("graph file: bad header");
  }
  RoadmapGraph graph(n, dim);
  std::vector<double> coords(dim);
  for (std::size_t i = 0; i < n; ++i) {
    char tag = 0;
    VertexId id = 0;
    if (!(in >> tag >> id) || tag != 'v') {
      throw std::runtime_error("graph file: bad vertex line");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      if (!(in >> coords[k])) {
        throw std::runtime_error("graph file: bad vertex coordinates");
      }
    }
    graph.set_coordinates(id, coords);
  }
  std::string line;
  std::getline(in, line);  // consume rest of last vertex line
  std::size_t edges_read = 0;
  while (edges_read < m && std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    char tag = 0;
    VertexId a = 0, b = 0;
    double w = 0.0;
    if (!(row >> tag >> a >> b >> w) || tag != 'e') {
      throw std::runtime_error("graph file: bad edge line");
    }
    const EdgeId e = graph.add_edge(a, b, w);
    char flag = 'U';
    if (row >> flag) {
      if (flag == 'F') {
        graph.seed_outcome(e, true);
      } else if (flag == 'B') {
        graph.seed_outcome(e, false);
      } else if (flag != 'U') {
        throw std::runtime_error("graph file: bad status flag");
      }
    }
    ++edges_read;
  }
  if (edges_read != m) {
    throw std::runtime_error("graph file: truncated edge list");
  }
  graph.use_seeded_evaluator();
  return graph;
}

RoadmapGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open graph file: " + path);
  }
  return read_graph(in);
}

}  // namespace lazysearch
