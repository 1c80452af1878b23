#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lazysearch/graph.hpp"

namespace lazysearch {

enum class HeuristicKind { Zero, Euclidean, ScaledEuclidean, Custom };

struct HeuristicSpec {
  HeuristicKind kind = HeuristicKind::Zero;
  double scale = 1.0;  // for ScaledEuclidean, must be in (0, 1]
  std::function<double(VertexId)> custom;
};

/// Lookahead-bounded lazy search configuration. alpha == nullopt means
/// an unbounded lookahead, operationally alpha = n.
struct SearchConfig {
  std::optional<std::uint32_t> alpha = 1;
  std::uint32_t beta = 1;
  HeuristicSpec heuristic;
  bool lazy_band_extension = true;
  /// Deep structural validation of the tree and queues each iteration.
  bool check_invariants = false;
  /// Optional replay log: POP/EVAL/REWIRE/UPDATE lines.
  std::ostream* replay_log = nullptr;
};

struct TrialStats {
  std::vector<std::pair<VertexId, VertexId>> evaluated_edges;
  std::size_t blocked_count = 0;
  std::size_t rewired_node_count = 0;
  std::size_t node_update_count = 0;
  std::size_t queue_op_count = 0;
  std::vector<double> popped_f_trace;
  double eval_time_us = 0.0;
  double graph_time_us = 0.0;
  double total_time_us = 0.0;
  std::optional<double> result_cost;
  std::size_t budget_violations = 0;
};

struct SearchResult {
  bool found = false;
  std::vector<VertexId> path;
  double cost = std::numeric_limits<double>::infinity();
  TrialStats stats;
};

/// Addressable min-priority queue over vertex ids. Keys are snapshotted
/// at push time; push on a present member updates its key.
class VertexQueue {
 public:
  explicit VertexQueue(std::size_t vertex_count, std::size_t* op_counter)
      : keys_(vertex_count, kAbsent), ops_(op_counter) {}

  bool empty() const { return ordered_.empty(); }
  std::size_t size() const { return ordered_.size(); }
  bool contains(VertexId v) const { return keys_[v] != kAbsent; }
  double min_key() const { return ordered_.begin()->first; }
  VertexId min_vertex() const { return ordered_.begin()->second; }

  void push(VertexId v, double key);
  void erase(VertexId v);
  VertexId pop();
  void clear();

 private:
  static constexpr double kAbsent = -std::numeric_limits<double>::infinity();
  std::set<std::pair<double, VertexId>> ordered_;
  std::vector<double> keys_;
  std::size_t* ops_;
};

/// The receding-horizon lazy searcher: a lazy shortest-path tree whose
/// paths carry at most alpha unevaluated edges, with frontier / extend
/// / update / rewire queues. Public phase methods mirror one iteration
/// of the main loop; run() drives them to completion.
class LookaheadSearch {
 public:
  LookaheadSearch(RoadmapGraph& graph, VertexId source, VertexId target,
                  SearchConfig config);

  SearchResult run();

  struct StepResult {
    enum Kind { TargetReached, EdgeFree, EdgeBlocked, Exhausted } kind;
    VertexId vertex = kInvalidVertex;  // head vertex of the last edge
  };

  // Phase methods, in main-loop order.
  void extend_band();
  StepResult select_and_evaluate();
  void update_band();
  void rewire_band();

  // Inspection for tests and tracing.
  struct NodeView {
    bool in_tree = false;
    VertexId parent = kInvalidVertex;
    double evaluated_cost = std::numeric_limits<double>::infinity();
    double lazy_cost = std::numeric_limits<double>::infinity();
    std::uint32_t budget = 0;
  };
  NodeView node(VertexId v) const;
  std::vector<VertexId> frontier_contents() const;
  std::vector<VertexId> extend_contents() const;
  std::vector<VertexId> path_to(VertexId v) const;
  bool frontier_empty() const { return q_frontier_.empty(); }
  std::uint32_t effective_alpha() const { return alpha_; }
  TrialStats& stats() { return stats_; }
  const TrialStats& stats() const { return stats_; }

  void validate_invariants() const;

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double heuristic(VertexId v);
  double g_value(VertexId v) const { return cost_[v] + lazy_[v]; }
  double f_key(VertexId v);
  void write_node(VertexId v, VertexId parent, double cost, double lazy,
                  std::uint32_t budget);
  void reset_node(VertexId v);
  void detach_from_parent(VertexId v);
  void collect_subtree(VertexId root, std::vector<VertexId>& out) const;
  void purge_subtree(VertexId root);
  std::vector<VertexId> tail_path(VertexId v) const;

  RoadmapGraph& graph_;
  VertexId source_;
  VertexId target_;
  SearchConfig config_;
  std::uint32_t alpha_;

  // Tree storage, one slot per vertex.
  std::vector<VertexId> parent_;
  std::vector<double> cost_;
  std::vector<double> lazy_;
  std::vector<std::uint32_t> budget_;
  std::vector<char> in_tree_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<double> h_cache_;

  TrialStats stats_;
  VertexQueue q_frontier_;
  VertexQueue q_extend_;
  VertexQueue q_update_;
  VertexQueue q_rewire_;
  std::vector<VertexId> rewire_roots_;
};

inline double frontier_key(double evaluated_cost, double lazy_cost,
                           double heuristic) {
  return evaluated_cost + lazy_cost + heuristic;
}

/// Runs a full search; the graph accumulates evaluation results.
SearchResult search(RoadmapGraph& graph, VertexId source, VertexId target,
                    const SearchConfig& config);

/// Builds the heuristic callback for a graph/target pair. Euclidean
/// variants require vertex coordinates.
std::function<double(VertexId)> make_heuristic(const RoadmapGraph& graph,
                                               VertexId target,
                                               const HeuristicSpec& spec);

}  // namespace lazysearch
