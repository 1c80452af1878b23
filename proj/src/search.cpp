#include "lazysearch/search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace lazysearch {

namespace {

constexpr std::uint32_t kNoBudget = std::numeric_limits<std::uint32_t>::max();

double euclidean(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = p[k] - q[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

void VertexQueue::push(VertexId v, double key) {
  if (keys_[v] != kAbsent) {
    ordered_.erase({keys_[v], v});
  }
  keys_[v] = key;
  ordered_.emplace(key, v);
  if (ops_) ++*ops_;
}

void VertexQueue::erase(VertexId v) {
  if (keys_[v] == kAbsent) return;
  ordered_.erase({keys_[v], v});
  keys_[v] = kAbsent;
  if (ops_) ++*ops_;
}

VertexId VertexQueue::pop() {
  const VertexId v = ordered_.begin()->second;
  ordered_.erase(ordered_.begin());
  keys_[v] = kAbsent;
  if (ops_) ++*ops_;
  return v;
}

void VertexQueue::clear() {
  for (const auto& [key, v] : ordered_) {
    keys_[v] = kAbsent;
  }
  ordered_.clear();
}

std::function<double(VertexId)> make_heuristic(const RoadmapGraph& graph,
                                               VertexId target,
                                               const HeuristicSpec& spec) {
  switch (spec.kind) {
    case HeuristicKind::Zero:
      return [](VertexId) { return 0.0; };
    case HeuristicKind::Euclidean:
    case HeuristicKind::ScaledEuclidean: {
      if (graph.dimension() == 0) {
        throw std::invalid_argument(
            "Euclidean heuristic requires vertex coordinates");
      }
      const double scale =
          spec.kind == HeuristicKind::ScaledEuclidean ? spec.scale : 1.0;
      if (!(scale > 0.0) || scale > 1.0) {
        throw std::invalid_argument("heuristic scale must be in (0, 1]");
      }
      return [&graph, target, scale](VertexId v) {
        return scale * euclidean(graph.coordinates(v),
                                 graph.coordinates(target));
      };
    }
    case HeuristicKind::Custom:
      if (!spec.custom) {
        throw std::invalid_argument("custom heuristic not provided");
      }
      return spec.custom;
  }
  throw std::logic_error("unreachable heuristic kind");
}

LookaheadSearch::LookaheadSearch(RoadmapGraph& graph, VertexId source,
                                 VertexId target, SearchConfig config)
    : graph_(graph),
      source_(source),
      target_(target),
      config_(std::move(config)),
      alpha_(config_.alpha ? *config_.alpha
                           : static_cast<std::uint32_t>(graph.vertex_count())),
      parent_(graph.vertex_count(), kInvalidVertex),
      cost_(graph.vertex_count(), kInf),
      lazy_(graph.vertex_count(), kInf),
      budget_(graph.vertex_count(), kNoBudget),
      in_tree_(graph.vertex_count(), 0),
      children_(graph.vertex_count()),
      h_cache_(graph.vertex_count(), std::numeric_limits<double>::quiet_NaN()),
      q_frontier_(graph.vertex_count(), &stats_.queue_op_count),
      q_extend_(graph.vertex_count(), &stats_.queue_op_count),
      q_update_(graph.vertex_count(), &stats_.queue_op_count),
      q_rewire_(graph.vertex_count(), &stats_.queue_op_count) {
  if (source_ >= graph.vertex_count() || target_ >= graph.vertex_count()) {
    throw std::out_of_range("source or target vertex out of range");
  }
  if (alpha_ == 0) {
    throw std::invalid_argument("lookahead must be at least 1");
  }
  if (config_.beta == 0 || config_.beta > alpha_) {
    throw std::invalid_argument("greediness must satisfy 1 <= beta <= alpha");
  }
  if ((config_.heuristic.kind == HeuristicKind::Euclidean ||
       config_.heuristic.kind == HeuristicKind::ScaledEuclidean) &&
      graph.dimension() == 0) {
    throw std::invalid_argument(
        "Euclidean heuristic requires vertex coordinates");
  }
  if (config_.heuristic.kind == HeuristicKind::ScaledEuclidean &&
      (!(config_.heuristic.scale > 0.0) || config_.heuristic.scale > 1.0)) {
    throw std::invalid_argument("heuristic scale must be in (0, 1]");
  }
  if (config_.heuristic.kind == HeuristicKind::Custom &&
      !config_.heuristic.custom) {
    throw std::invalid_argument("custom heuristic not provided");
  }
  if (source_ != target_) {
    write_node(source_, kInvalidVertex, 0.0, 0.0, 0);
    q_extend_.push(source_, f_key(source_));
  }
}

double LookaheadSearch::heuristic(VertexId v) {
  double& h = h_cache_[v];
  if (std::isnan(h)) {
    switch (config_.heuristic.kind) {
      case HeuristicKind::Zero:
        h = 0.0;
        break;
      case HeuristicKind::Euclidean:
        h = euclidean(graph_.coordinates(v), graph_.coordinates(target_));
        break;
      case HeuristicKind::ScaledEuclidean:
        h = config_.heuristic.scale *
            euclidean(graph_.coordinates(v), graph_.coordinates(target_));
        break;
      case HeuristicKind::Custom:
        h = config_.heuristic.custom(v);
        break;
    }
  }
  return h;
}

double LookaheadSearch::f_key(VertexId v) {
  return cost_[v] + lazy_[v] + heuristic(v);
}

void LookaheadSearch::detach_from_parent(VertexId v) {
  const VertexId p = parent_[v];
  if (p == kInvalidVertex) return;
  auto& siblings = children_[p];
  const auto it = std::find(siblings.begin(), siblings.end(), v);
  if (it != siblings.end()) {
    siblings.erase(it);
  }
}

void LookaheadSearch::write_node(VertexId v, VertexId parent, double cost,
                                 double lazy, std::uint32_t budget) {
  if (budget != kNoBudget && budget > alpha_) {
    ++stats_.budget_violations;
  }
  if (parent_[v] != parent) {
    detach_from_parent(v);
    parent_[v] = parent;
    if (parent != kInvalidVertex) {
      children_[parent].push_back(v);
    }
  }
  cost_[v] = cost;
  lazy_[v] = lazy;
  budget_[v] = budget;
  in_tree_[v] = 1;
  ++stats_.node_update_count;
}

void LookaheadSearch::reset_node(VertexId v) {
  parent_[v] = kInvalidVertex;
  cost_[v] = kInf;
  lazy_[v] = kInf;
  budget_[v] = kNoBudget;
  in_tree_[v] = 0;
}

void LookaheadSearch::collect_subtree(VertexId root,
                                      std::vector<VertexId>& out) const {
  out.push_back(root);
  for (std::size_t i = out.size() - 1; i < out.size(); ++i) {
    for (VertexId child : children_[out[i]]) {
      out.push_back(child);
    }
  }
}

void LookaheadSearch::purge_subtree(VertexId root) {
  std::vector<VertexId> members;
  collect_subtree(root, members);
  detach_from_parent(root);
  for (VertexId v : members) {
    q_frontier_.erase(v);
    q_extend_.erase(v);
    children_[v].clear();
    reset_node(v);
  }
}

std::vector<VertexId> LookaheadSearch::tail_path(VertexId v) const {
  std::vector<VertexId> path{v};
  while (budget_[v] > 0) {
    v = parent_[v];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<VertexId> LookaheadSearch::path_to(VertexId v) const {
  std::vector<VertexId> path{v};
  while (parent_[v] != kInvalidVertex) {
    v = parent_[v];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void LookaheadSearch::extend_band() {
  while (!q_extend_.empty()) {
    if (config_.lazy_band_extension && !q_frontier_.empty() &&
        q_extend_.min_key() >= q_frontier_.min_key()) {
      break;
    }
    const VertexId u = q_extend_.pop();
    assert(in_tree_[u]);
    if (u == target_) {
      q_frontier_.push(u, f_key(u));
      continue;
    }
    assert(budget_[u] < alpha_);

    for (EdgeId e : graph_.incident_edges(u)) {
      if (graph_.status(e) == EdgeStatus::Blocked) continue;
      const VertexId v = graph_.opposite(e, u);
      if (v == parent_[u]) continue;

      const double weight = graph_.lazy_weight(e);
      const double candidate_g = g_value(u) + weight;
      const double current_g = in_tree_[v] ? g_value(v) : kInf;
      if (candidate_g > current_g) continue;
      if (candidate_g == current_g && parent_[v] <= u) continue;

      if (in_tree_[v]) {
        purge_subtree(v);
      }
      write_node(v, u, cost_[u], lazy_[u] + weight, budget_[u] + 1);
      if (budget_[v] == alpha_) {
        q_frontier_.push(v, f_key(v));
      } else {
        q_extend_.push(v, f_key(v));
      }
    }
  }
}

LookaheadSearch::StepResult LookaheadSearch::select_and_evaluate() {
  if (q_frontier_.empty()) {
    return {StepResult::Exhausted, kInvalidVertex};
  }
  const double popped_f = q_frontier_.min_key();
  const VertexId top = q_frontier_.pop();
  stats_.popped_f_trace.push_back(popped_f);
  if (config_.replay_log) {
    *config_.replay_log << "POP " << top << ' ' << std::setprecision(17)
                        << popped_f << '\n';
  }
  assert(budget_[top] == alpha_ || top == target_);
  assert(budget_[top] > 0);

  const std::vector<VertexId> tail = tail_path(top);
  std::uint32_t evaluations = 0;
  StepResult result{StepResult::EdgeFree, top};

  for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
    const VertexId u = tail[i];
    const VertexId v = tail[i + 1];
    const auto e = graph_.find_edge(u, v);
    assert(e);
    const EdgeStatus before = graph_.status(*e);
    assert(before != EdgeStatus::Blocked);
    const EdgeStatus status = graph_.evaluate_edge(*e);
    const bool fresh = before == EdgeStatus::Unknown;
    if (fresh) {
      ++evaluations;
      stats_.evaluated_edges.emplace_back(u, v);
      if (config_.replay_log) {
        *config_.replay_log << "EVAL " << u << ' ' << v << ' '
                            << (status == EdgeStatus::Free ? 'F' : 'B')
                            << '\n';
      }
    }

    if (status == EdgeStatus::Free) {
      q_frontier_.erase(v);
      q_extend_.erase(v);
      write_node(v, u, cost_[u] + graph_.lazy_weight(*e), 0.0, 0);
      q_update_.push(v, g_value(v));
      result = {StepResult::EdgeFree, v};
      if (v == target_) {
        return {StepResult::TargetReached, v};
      }
      if (evaluations >= config_.beta) {
        break;
      }
    } else {
      ++stats_.blocked_count;
      detach_from_parent(v);
      parent_[v] = kInvalidVertex;
      collect_subtree(v, rewire_roots_);
      return {StepResult::EdgeBlocked, v};
    }
  }
  return result;
}

void LookaheadSearch::update_band() {
  std::size_t pops = 0;
  while (!q_update_.empty()) {
    const VertexId u = q_update_.pop();
    ++pops;
    assert(budget_[u] < alpha_);

    if (children_[u].empty()) {
      q_extend_.push(u, f_key(u));
      continue;
    }
    const std::vector<VertexId> kids = children_[u];
    for (VertexId v : kids) {
      if (budget_[v] == 0) continue;  // refreshed by this iteration's batch
      const std::uint32_t new_budget = budget_[u] + 1;
      if (new_budget > alpha_) {
        // Cannot arise with tight estimates; kept as the safe fallback.
        purge_subtree(v);
        continue;
      }
      const auto e = graph_.find_edge(u, v);
      assert(e);
      // A node that sat in a work queue keeps its right to extend:
      // its budget just dropped below the lookahead, so its lazy
      // offers to non-child neighbours may now be feasible.
      const bool was_queued =
          q_frontier_.contains(v) || q_extend_.contains(v);
      q_frontier_.erase(v);
      q_extend_.erase(v);
      write_node(v, u, cost_[u], lazy_[u] + graph_.lazy_weight(*e),
                 new_budget);
      if (was_queued || v == target_) {
        q_extend_.push(v, f_key(v));
      }
      q_update_.push(v, g_value(v));
    }
    if (children_[u].empty()) {
      q_extend_.push(u, f_key(u));
    }
  }
  if (pops > 0 && config_.replay_log) {
    *config_.replay_log << "UPDATE " << pops << '\n';
  }
}

void LookaheadSearch::rewire_band() {
  if (rewire_roots_.empty()) return;
  const std::vector<VertexId> members = std::move(rewire_roots_);
  rewire_roots_.clear();
  stats_.rewired_node_count += members.size();
  if (config_.replay_log) {
    *config_.replay_log << "REWIRE " << members.size() << '\n';
  }

  // Phase 1: detach and reset every member, then seed each with its
  // best surviving parent outside the detached set.
  for (VertexId v : members) {
    q_frontier_.erase(v);
    q_extend_.erase(v);
    children_[v].clear();
    reset_node(v);
  }
  for (VertexId v : members) {
    VertexId best_parent = kInvalidVertex;
    double best_g = kInf;
    EdgeId best_edge = 0;
    for (EdgeId e : graph_.incident_edges(v)) {
      if (graph_.status(e) == EdgeStatus::Blocked) continue;
      const VertexId u = graph_.opposite(e, v);
      if (!in_tree_[u]) continue;
      if (budget_[u] >= alpha_) continue;
      if (u == target_) continue;
      if (q_extend_.contains(u)) continue;
      const double g = g_value(u) + graph_.lazy_weight(e);
      if (g < best_g || (g == best_g && u < best_parent)) {
        best_g = g;
        best_parent = u;
        best_edge = e;
      }
    }
    if (best_parent != kInvalidVertex) {
      parent_[v] = best_parent;
      cost_[v] = cost_[best_parent];
      lazy_[v] = lazy_[best_parent] + graph_.lazy_weight(best_edge);
      budget_[v] = budget_[best_parent] + 1;
      ++stats_.node_update_count;
    }
    q_rewire_.push(v, cost_[v] + lazy_[v]);
  }

  // Phase 2: re-attach in key order; attached nodes below the budget
  // cap offer themselves to neighbours still waiting in the queue.
  while (!q_rewire_.empty()) {
    const VertexId v = q_rewire_.pop();
    if (parent_[v] == kInvalidVertex) {
      continue;  // orphaned; may be re-adopted by a later extension
    }
    in_tree_[v] = 1;
    children_[parent_[v]].push_back(v);
    if (budget_[v] == alpha_ || v == target_) {
      q_frontier_.push(v, f_key(v));
      continue;
    }
    q_extend_.push(v, f_key(v));

    for (EdgeId e : graph_.incident_edges(v)) {
      if (graph_.status(e) == EdgeStatus::Blocked) continue;
      const VertexId w = graph_.opposite(e, v);
      if (!q_rewire_.contains(w)) continue;
      const double g = g_value(v) + graph_.lazy_weight(e);
      const double current = cost_[w] + lazy_[w];
      if (g < current ||
          (g == current &&
           (parent_[w] == kInvalidVertex || v < parent_[w]))) {
        parent_[w] = v;
        cost_[w] = cost_[v];
        lazy_[w] = lazy_[v] + graph_.lazy_weight(e);
        budget_[w] = budget_[v] + 1;
        ++stats_.node_update_count;
        q_rewire_.push(w, cost_[w] + lazy_[w]);
      }
    }
  }
}

SearchResult LookaheadSearch::run() {
  SearchResult result;
  if (source_ == target_) {
    result.found = true;
    result.path = {source_};
    result.cost = 0.0;
    result.stats.result_cost = 0.0;
    return result;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const double eval_us_before = graph_.evaluation_time_us();

  for (;;) {
    extend_band();
    if (config_.check_invariants) {
      validate_invariants();
    }
    if (q_frontier_.empty()) {
      break;  // extension exhausted; no path survives
    }
    const StepResult step = select_and_evaluate();
    if (step.kind == StepResult::TargetReached) {
      result.found = true;
      break;
    }
    update_band();
    rewire_band();
  }

  const auto t1 = std::chrono::steady_clock::now();
  stats_.eval_time_us = graph_.evaluation_time_us() - eval_us_before;
  stats_.total_time_us =
      std::chrono::duration<double, std::micro>(t1 - t0).count();
  stats_.graph_time_us = stats_.total_time_us - stats_.eval_time_us;

  if (result.found) {
    result.path = path_to(target_);
    result.cost = cost_[target_];
    stats_.result_cost = result.cost;
  }
  result.stats = stats_;
  return result;
}

LookaheadSearch::NodeView LookaheadSearch::node(VertexId v) const {
  NodeView view;
  view.in_tree = in_tree_[v] != 0;
  view.parent = parent_[v];
  view.evaluated_cost = cost_[v];
  view.lazy_cost = lazy_[v];
  view.budget = budget_[v];
  return view;
}

std::vector<VertexId> LookaheadSearch::frontier_contents() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < graph_.vertex_count(); ++v) {
    if (q_frontier_.contains(v)) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> LookaheadSearch::extend_contents() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < graph_.vertex_count(); ++v) {
    if (q_extend_.contains(v)) out.push_back(v);
  }
  return out;
}

void LookaheadSearch::validate_invariants() const {
  auto fail = [](const std::string& what) {
    throw std::logic_error("invariant violation: " + what);
  };
  for (VertexId v = 0; v < graph_.vertex_count(); ++v) {
    if (!in_tree_[v]) continue;
    if (budget_[v] > alpha_) fail("budget exceeds lookahead");
    if ((budget_[v] == 0) != (lazy_[v] == 0.0)) {
      fail("budget / lazy-cost mismatch");
    }
    const VertexId p = parent_[v];
    if (p == kInvalidVertex) {
      if (v != source_) fail("non-source root");
      continue;
    }
    if (!in_tree_[p]) fail("parent not in tree");
    const auto& siblings = children_[p];
    if (std::find(siblings.begin(), siblings.end(), v) == siblings.end()) {
      fail("child missing from parent list");
    }
    const auto e = graph_.find_edge(p, v);
    if (!e) fail("tree edge missing from graph");
    const double w = graph_.lazy_weight(*e);
    if (budget_[v] == 0) {
      if (graph_.status(*e) != EdgeStatus::Free) fail("evaluated hop not Free");
      if (budget_[p] != 0) fail("evaluated node under lazy parent");
      if (cost_[v] != cost_[p] + w) fail("evaluated cost mismatch");
    } else {
      if (graph_.status(*e) == EdgeStatus::Blocked) fail("blocked tree edge");
      if (budget_[v] != budget_[p] + 1) fail("budget chain broken");
      if (cost_[v] != cost_[p]) fail("lazy hop changed evaluated cost");
      if (lazy_[v] != lazy_[p] + w) fail("lazy cost chain broken");
    }
  }
  for (VertexId v = 0; v < graph_.vertex_count(); ++v) {
    if (q_frontier_.contains(v)) {
      if (!in_tree_[v]) fail("frontier member outside tree");
      if (budget_[v] != alpha_ && v != target_) fail("frontier budget wrong");
      if (q_extend_.contains(v)) fail("vertex in frontier and extend");
    }
    if (q_extend_.contains(v)) {
      if (!in_tree_[v]) fail("extend member outside tree");
      if (budget_[v] >= alpha_ && v != target_) fail("extend budget wrong");
    }
  }
  if (!q_update_.empty() || !q_rewire_.empty()) {
    fail("update/rewire queue not drained at loop top");
  }
}

SearchResult search(RoadmapGraph& graph, VertexId source, VertexId target,
                    const SearchConfig& config) {
  LookaheadSearch searcher(graph, source, target, config);
  return searcher.run();
}

}  // namespace lazysearch
