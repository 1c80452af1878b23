#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lazysearch {

/// Dense vertex identifier, contiguous in [0, n).
using VertexId = std::uint32_t;
using EdgeId = std::size_t;

inline constexpr VertexId kInvalidVertex = static_cast<VertexId>(-1);

enum class EdgeStatus : std::uint8_t { Unknown, Free, Blocked };

/// Undirected edge with a lazy weight estimate and a memoized
/// evaluation status. The true weight equals the lazy weight for Free
/// edges and is infinite for Blocked ones.
struct EdgeRecord {
  VertexId a = kInvalidVertex;  // a < b
  VertexId b = kInvalidVertex;
  double lazy_weight = 0.0;
  EdgeStatus status = EdgeStatus::Unknown;
};

/// A path with the boundary between its evaluated head and lazy tail.
/// Edges before split_index must be Free, edges at/after it Unknown.
struct PathView {
  std::vector<VertexId> vertices;
  std::size_t split_index = 0;  // number of leading evaluated edges
};

struct PathCosts {
  double evaluated_cost = 0.0;
  double lazy_tail_cost = 0.0;
  double estimated_total = 0.0;
};

/// Undirected roadmap with lazily weighted edges and a memoized
/// edge-evaluation callback. Single-writer: evaluation mutates status.
class RoadmapGraph {
 public:
  /// Returns true if the edge is free, false if blocked. The graph is
  /// passed in so evaluators stay valid across graph copies.
  using Evaluator = std::function<bool(const RoadmapGraph&, EdgeId)>;

  RoadmapGraph() = default;
  RoadmapGraph(std::size_t vertex_count, std::size_t dimension = 0);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t dimension() const { return dimension_; }

  void set_coordinates(VertexId v, std::span<const double> coords);
  std::span<const double> coordinates(VertexId v) const;

  /// Adds an undirected edge. Throws on self-loops, duplicates, or a
  /// non-positive or non-finite lazy weight.
  EdgeId add_edge(VertexId a, VertexId b, double lazy_weight);

  const EdgeRecord& edge(EdgeId e) const;
  const std::vector<EdgeId>& incident_edges(VertexId v) const;
  VertexId opposite(EdgeId e, VertexId v) const;
  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

  double lazy_weight(EdgeId e) const;
  EdgeStatus status(EdgeId e) const;

  /// Evaluates the edge through the evaluator callback, memoizing the
  /// result. Repeated calls return the memoized status without
  /// re-invoking the evaluator.
  EdgeStatus evaluate_edge(EdgeId e);

  void set_evaluator(Evaluator evaluator) { evaluator_ = std::move(evaluator); }
  const Evaluator& evaluator() const { return evaluator_; }

  /// Seeds the outcome an abstract-graph evaluator will report for this
  /// edge. Edges without a seed evaluate Free.
  void seed_outcome(EdgeId e, bool free);
  std::optional<bool> seeded(EdgeId e) const;
  void use_seeded_evaluator();

  // Instrumentation.
  std::size_t evaluation_count() const { return evaluation_count_; }
  std::size_t evaluator_invocations(EdgeId e) const;
  std::size_t max_invocations_per_edge() const;
  double evaluation_time_us() const { return evaluation_time_us_; }

 private:
  void check_vertex(VertexId v) const;
  void check_edge(EdgeId e) const;

  std::size_t dimension_ = 0;
  std::vector<double> coordinates_;  // vertex-major, dimension_ per vertex
  std::vector<std::vector<EdgeId>> adjacency_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::int8_t> seeded_;  // -1 none, 0 blocked, 1 free
  std::unordered_map<std::uint64_t, EdgeId> edge_index_;
  Evaluator evaluator_;
  std::vector<std::uint32_t> invocations_;
  std::size_t evaluation_count_ = 0;
  double evaluation_time_us_ = 0.0;
};

/// Splits a path's cost into its evaluated head and lazy tail.
/// Validates the PathView invariants and throws on violation.
PathCosts path_costs(const RoadmapGraph& graph, const PathView& path);

/// Line-oriented text format:
///   d n m
///   v <id> <coord_0> ... <coord_{d-1}>     (n lines)
///   e <id_a> <id_b> <lazy_weight> [F|B|U]  (m lines)
/// Decimal output round-trips doubles exactly.
void write_graph(const RoadmapGraph& graph, std::ostream& out);
RoadmapGraph read_graph(std::istream& in);
RoadmapGraph read_graph_file(const std::string& path);

}  // namespace lazysearch
