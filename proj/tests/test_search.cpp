#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "lazysearch/search.hpp"
#include "test_util.hpp"

using namespace lazysearch;
using testutil::make_diamond;

namespace {

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

SearchConfig config_with(std::optional<std::uint32_t> alpha,
                         std::uint32_t beta = 1) {
  SearchConfig config;
  config.alpha = alpha;
  config.beta = beta;
  config.check_invariants = true;
  return config;
}

}  // namespace

TEST_CASE("diamond trace, alpha=2: detour found after block") {
  RoadmapGraph g = make_diamond();
  const SearchResult r = search(g, 0, 3, config_with(2));
  REQUIRE(r.found);
  CHECK(r.path == std::vector<VertexId>{0, 2, 3});
  CHECK(r.cost == 2.4);
  // Hand-derived evaluation order: the lazily cheaper route 0-1-3 is
  // tried first, its last edge blocks, then the detour is certified.
  CHECK(r.stats.evaluated_edges ==
        EdgeList{{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  CHECK(r.stats.blocked_count == 1);
  CHECK(r.stats.budget_violations == 0);
}

TEST_CASE("diamond all-free: only the optimal route is evaluated") {
  RoadmapGraph g = make_diamond(/*block_upper=*/false);
  for (const auto alpha :
       std::vector<std::optional<std::uint32_t>>{2u, std::nullopt}) {
    RoadmapGraph copy = g;
    const SearchResult r = search(copy, 0, 3, config_with(alpha));
    REQUIRE(r.found);
    CHECK(r.path == std::vector<VertexId>{0, 1, 3});
    CHECK(r.cost == 2.0);
    CHECK(r.stats.evaluated_edges == EdgeList{{0, 1}, {1, 3}});
  }
  // alpha=1 certifies vertices one hop at a time, so the short edge
  // 0-2 is also popped (f=1.2 < 2) before the target is certified.
  RoadmapGraph copy = g;
  const SearchResult r = search(copy, 0, 3, config_with(1));
  REQUIRE(r.found);
  CHECK(r.cost == 2.0);
  CHECK(r.stats.evaluated_edges == EdgeList{{0, 1}, {0, 2}, {1, 3}});
}

TEST_CASE("band extension stops at the lookahead") {
  // Chain 0-1-2-3 with alpha=2: after the initial extension the tree
  // holds 0,1,2; vertex 2 sits on the frontier with two lazy edges.
  RoadmapGraph g(4, 0);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  g.add_edge(2, 3, 1.0);
  g.use_seeded_evaluator();

  LookaheadSearch s(g, 0, 3, config_with(2));
  s.extend_band();
  CHECK(s.node(0).in_tree);
  CHECK(s.node(1).in_tree);
  CHECK(s.node(2).in_tree);
  CHECK_FALSE(s.node(3).in_tree);

  const auto view = s.node(2);
  CHECK(view.parent == 1);
  CHECK(view.evaluated_cost == 0.0);
  CHECK(view.lazy_cost == 2.0);
  CHECK(view.budget == 2);
  CHECK(s.frontier_contents() == std::vector<VertexId>{2});

  const SearchResult r = s.run();
  REQUIRE(r.found);
  CHECK(r.cost == 3.0);
}

TEST_CASE("single blocked edge yields Failure") {
  RoadmapGraph g(2, 0);
  g.seed_outcome(g.add_edge(0, 1, 1.0), false);
  g.use_seeded_evaluator();
  const SearchResult r = search(g, 0, 1, config_with(1));
  CHECK_FALSE(r.found);
  CHECK(r.path.empty());
  CHECK(r.stats.evaluated_edges.size() == 1);
  CHECK(r.stats.blocked_count == 1);
}

TEST_CASE("source equals target") {
  RoadmapGraph g(2, 0);
  g.add_edge(0, 1, 1.0);
  g.use_seeded_evaluator();
  const SearchResult r = search(g, 1, 1, config_with(1));
  REQUIRE(r.found);
  CHECK(r.path == std::vector<VertexId>{1});
  CHECK(r.cost == 0.0);
  CHECK(r.stats.evaluated_edges.empty());
  CHECK(r.stats.popped_f_trace.empty());
}

TEST_CASE("configuration validation") {
  RoadmapGraph g(3, 0);
  g.add_edge(0, 1, 1.0);
  g.use_seeded_evaluator();
  SearchConfig bad;
  bad.alpha = 2;
  bad.beta = 3;  // beta must not exceed alpha
  CHECK_THROWS_AS(LookaheadSearch(g, 0, 1, bad), std::invalid_argument);
  bad.beta = 0;
  CHECK_THROWS_AS(LookaheadSearch(g, 0, 1, bad), std::invalid_argument);
  bad.beta = 1;
  bad.alpha = 0;
  CHECK_THROWS_AS(LookaheadSearch(g, 0, 1, bad), std::invalid_argument);
  SearchConfig euclid;
  euclid.heuristic.kind = HeuristicKind::Euclidean;
  CHECK_THROWS_AS(search(g, 0, 1, euclid), std::invalid_argument);
  SearchConfig fine;
  CHECK_THROWS_AS(LookaheadSearch(g, 0, 5, fine), std::out_of_range);
}

TEST_CASE("search terminates immediately when the target edge is Free") {
  // Two parallel chains; once the target is certified through one of
  // them no further evaluation happens even though edges remain.
  RoadmapGraph g = make_diamond(/*block_upper=*/false);
  const SearchResult r = search(g, 0, 3, config_with(std::nullopt));
  REQUIRE(r.found);
  CHECK(r.stats.evaluated_edges.size() == 2);
  CHECK(g.evaluation_count() == 2);
}

TEST_CASE("greedy batches evaluate beta edges per selection") {
  // Chain of three unknown edges, alpha=3 beta=2: the first frontier
  // pop must evaluate exactly two edges, the second finishes the path.
  RoadmapGraph g(4, 0);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  g.add_edge(2, 3, 1.0);
  g.use_seeded_evaluator();
  LookaheadSearch s(g, 0, 3, config_with(3, 2));
  s.extend_band();
  const auto step = s.select_and_evaluate();
  CHECK(step.kind == LookaheadSearch::StepResult::EdgeFree);
  CHECK(s.stats().evaluated_edges == EdgeList{{0, 1}, {1, 2}});
  s.update_band();
  s.rewire_band();
  const SearchResult r = s.run();
  REQUIRE(r.found);
  CHECK(r.cost == 3.0);
  CHECK(r.stats.evaluated_edges.size() == 3);
}

TEST_CASE("greedy batch stops early at a blocked edge") {
  RoadmapGraph g(4, 0);
  g.add_edge(0, 1, 1.0);
  g.seed_outcome(g.add_edge(1, 2, 1.0), false);
  g.add_edge(2, 3, 1.0);
  g.add_edge(0, 3, 10.0);
  g.use_seeded_evaluator();
  LookaheadSearch s(g, 0, 3, config_with(3, 3));
  s.extend_band();
  const auto step = s.select_and_evaluate();
  CHECK(step.kind == LookaheadSearch::StepResult::EdgeBlocked);
  CHECK(s.stats().evaluated_edges == EdgeList{{0, 1}, {1, 2}});
  CHECK(s.stats().blocked_count == 1);
}

TEST_CASE("orphans are re-adopted after a block") {
  // 0-1-2-3 plus bypass 0-4-2: blocking 0-1 orphans 2 (and 3); the
  // search must recover through the bypass.
  RoadmapGraph g(5, 0);
  g.seed_outcome(g.add_edge(0, 1, 0.5), false);
  g.add_edge(1, 2, 0.5);
  g.add_edge(2, 3, 0.5);
  g.add_edge(0, 4, 1.0);
  g.add_edge(4, 2, 1.0);
  g.use_seeded_evaluator();
  for (const auto alpha :
       std::vector<std::optional<std::uint32_t>>{1u, 2u, 3u, std::nullopt}) {
    RoadmapGraph copy = g;
    const SearchResult r = search(copy, 0, 3, config_with(alpha));
    REQUIRE(r.found);
    CHECK(r.path == std::vector<VertexId>{0, 4, 2, 3});
    CHECK(r.cost == 2.5);
  }
}

TEST_CASE("replay log is deterministic and well-formed") {
  std::ostringstream first, second;
  for (std::ostringstream* log : {&first, &second}) {
    RoadmapGraph g = make_diamond();
    SearchConfig config = config_with(2);
    config.replay_log = log;
    search(g, 0, 3, config);
  }
  CHECK(first.str() == second.str());
  std::istringstream lines(first.str());
  std::string word;
  bool saw_pop = false, saw_eval = false, saw_rewire = false;
  while (lines >> word) {
    if (word == "POP") saw_pop = true;
    else if (word == "EVAL") saw_eval = true;
    else if (word == "REWIRE") saw_rewire = true;
    else if (word != "UPDATE" && word != "F" && word != "B") {
      double value = 0.0;
      const bool numeric =
          static_cast<bool>(std::istringstream(word) >> value);
      CHECK(numeric);
    }
  }
  CHECK(saw_pop);
  CHECK(saw_eval);
  CHECK(saw_rewire);
}

TEST_CASE("deep invariants hold across random runs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    RoadmapGraph g = testutil::make_random_graph(seed, 30, 0.25, 0.3);
    for (const auto alpha :
         std::vector<std::optional<std::uint32_t>>{1u, 2u, 3u,
                                                   std::nullopt}) {
      for (std::uint32_t beta : {1u, 2u}) {
        if (alpha && beta > *alpha) continue;
        RoadmapGraph copy = g;
        SearchConfig config = config_with(alpha, beta);
        const SearchResult r = search(copy, 0, 29, config);
        CHECK(r.stats.budget_violations == 0);
        CHECK(copy.max_invocations_per_edge() <= 1);
        // Evaluations are unique: memoization prevents duplicates.
        auto evals = testutil::edge_set(r.stats.evaluated_edges);
        auto unique_end = std::unique(evals.begin(), evals.end());
        CHECK(unique_end == evals.end());
      }
    }
  }
}

TEST_CASE("euclidean heuristic preserves the result") {
  for (std::uint64_t seed = 30; seed <= 40; ++seed) {
    RoadmapGraph g = testutil::make_random_graph(seed, 25, 0.3, 0.25);
    RoadmapGraph zero_copy = g, euclid_copy = g, scaled_copy = g;
    SearchConfig zero = config_with(2);
    SearchConfig euclid = config_with(2);
    euclid.heuristic.kind = HeuristicKind::Euclidean;
    SearchConfig scaled = config_with(2);
    scaled.heuristic.kind = HeuristicKind::ScaledEuclidean;
    scaled.heuristic.scale = 0.5;
    const SearchResult a = search(zero_copy, 0, 24, zero);
    const SearchResult b = search(euclid_copy, 0, 24, euclid);
    const SearchResult c = search(scaled_copy, 0, 24, scaled);
    CHECK(a.found == b.found);
    CHECK(a.found == c.found);
    if (a.found) {
      CHECK(a.cost == doctest::Approx(b.cost).epsilon(1e-12));
      CHECK(a.cost == doctest::Approx(c.cost).epsilon(1e-12));
    }
  }
}

TEST_CASE("lazy band extension does not change outcomes") {
  for (std::uint64_t seed = 50; seed <= 65; ++seed) {
    RoadmapGraph g = testutil::make_random_graph(seed, 30, 0.25, 0.3);
    for (const auto alpha :
         std::vector<std::optional<std::uint32_t>>{2u, 4u, std::nullopt}) {
      RoadmapGraph lazy_copy = g, eager_copy = g;
      SearchConfig lazy = config_with(alpha);
      SearchConfig eager = config_with(alpha);
      eager.lazy_band_extension = false;
      const SearchResult a = search(lazy_copy, 0, 29, lazy);
      const SearchResult b = search(eager_copy, 0, 29, eager);
      CHECK(a.found == b.found);
      if (a.found) {
        CHECK(a.cost == b.cost);
        CHECK(a.path == b.path);
      }
      CHECK(a.stats.evaluated_edges == b.stats.evaluated_edges);
    }
  }
}

TEST_CASE("frontier key helper sums its parts") {
  CHECK(frontier_key(1.5, 2.5, 0.25) == 4.25);
}
