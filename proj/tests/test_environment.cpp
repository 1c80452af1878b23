#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>
#include <sstream>

#include "lazysearch/environment.hpp"

using namespace lazysearch;

namespace {

/// Exact closed-segment vs closed-box intersection via the slab
/// method. Returns the parameter interval [t_enter, t_exit] when the
/// segment intersects, clamped to [0, 1].
std::optional<std::pair<double, double>> exact_segment_box(
    std::span<const double> p, std::span<const double> q,
    const BoxObstacle& box) {
  double t_enter = 0.0, t_exit = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = q[k] - p[k];
    if (d == 0.0) {
      if (p[k] < box.min_corner[k] || p[k] > box.max_corner[k]) {
        return std::nullopt;
      }
      continue;
    }
    double t0 = (box.min_corner[k] - p[k]) / d;
    double t1 = (box.max_corner[k] - p[k]) / d;
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return std::nullopt;
  }
  return std::make_pair(t_enter, t_exit);
}

/// Grid flood fill between two points through the environment's free
/// space; the connectivity oracle for maze construction.
bool grid_connected(const GeometricEnvironment& env,
                    std::span<const double> from, std::span<const double> to,
                    int cells_per_axis) {
  REQUIRE(env.dimension == 2);
  const int G = cells_per_axis;
  std::vector<char> open(G * G, 0);
  std::vector<double> p(2);
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      p[0] = (i + 0.5) / G;
      p[1] = (j + 0.5) / G;
      open[i * G + j] = !env.point_in_collision(p);
    }
  }
  const auto cell = [G](double x) {
    return std::min(G - 1, static_cast<int>(x * G));
  };
  const int start = cell(from[0]) * G + cell(from[1]);
  const int goal = cell(to[0]) * G + cell(to[1]);
  if (!open[start] || !open[goal]) return false;
  std::vector<char> seen(G * G, 0);
  std::queue<int> frontier;
  seen[start] = 1;
  frontier.push(start);
  while (!frontier.empty()) {
    const int c = frontier.front();
    frontier.pop();
    if (c == goal) return true;
    const int i = c / G, j = c % G;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int ni = i + di[k], nj = j + dj[k];
      if (ni < 0 || nj < 0 || ni >= G || nj >= G) continue;
      const int nc = ni * G + nj;
      if (open[nc] && !seen[nc]) {
        seen[nc] = 1;
        frontier.push(nc);
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("halton radical-inverse values match hand computation") {
  CHECK(halton_point(1, 1, {})[0] == 0.5);
  const auto p3 = halton_point(3, 2, {});
  CHECK(p3[0] == 0.75);
  CHECK(p3[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  const double offset[] = {0.7};
  CHECK(halton_point(1, 1, offset)[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(halton_point(0, 1, {}), std::invalid_argument);
}

TEST_CASE("halton sequence has low dispersion on a 10x10 grid") {
  std::vector<int> counts(100, 0);
  for (std::uint64_t i = 1; i <= 1000; ++i) {
    const auto p = halton_point(i, 2, {});
    const int cx = std::min(9, static_cast<int>(p[0] * 10));
    const int cy = std::min(9, static_cast<int>(p[1] * 10));
    ++counts[cx * 10 + cy];
  }
  for (int c : counts) {
    CHECK(std::abs(c - 10) <= 8);
  }
}

TEST_CASE("segment collision basics") {
  GeometricEnvironment empty;
  empty.dimension = 2;
  const std::vector<double> a{0.0, 0.0}, b{1.0, 1.0};
  CHECK_FALSE(empty.segment_in_collision(a, b));
  CHECK_FALSE(empty.point_in_collision(a));

  GeometricEnvironment env;
  env.dimension = 2;
  env.obstacles.push_back(BoxObstacle{{0.4, 0.0}, {0.5, 1.0}});
  const std::vector<double> inside{0.45, 0.5};
  CHECK(env.point_in_collision(inside));
  CHECK(env.segment_in_collision(inside, b));  // endpoint inclusion
  CHECK(env.segment_in_collision(a, b));       // crosses a 0.1-wide box
  const std::vector<double> left{0.1, 0.2}, left2{0.3, 0.9};
  CHECK_FALSE(env.segment_in_collision(left, left2));
}

TEST_CASE("sampled collision agrees with the exact slab oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t disagreements = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    GeometricEnvironment env;
    env.dimension = 2;
    BoxObstacle box;
    const double x = unit(rng) * 0.8, y = unit(rng) * 0.8;
    box.min_corner = {x, y};
    box.max_corner = {x + 0.02 + unit(rng) * 0.18,
                      y + 0.02 + unit(rng) * 0.18};
    env.obstacles.push_back(box);
    const std::vector<double> p{unit(rng), unit(rng)};
    const std::vector<double> q{unit(rng), unit(rng)};
    const bool sampled = env.segment_in_collision(p, q);
    const auto exact = exact_segment_box(p, q, box);
    if (sampled != exact.has_value()) {
      ++disagreements;
      // Sampling misses only grazing intersections shorter than the
      // sampling step; a sampled hit is always exact evidence.
      REQUIRE_FALSE(sampled);
      const double dx = q[0] - p[0], dy = q[1] - p[1];
      const double len = std::sqrt(dx * dx + dy * dy);
      const double overlap = (exact->second - exact->first) * len;
      REQUIRE(overlap < 2.0 * env.collision_resolution);
    }
  }
  CHECK(disagreements < 100);  // grazing cases are rare
}

TEST_CASE("roadmap construction edge rule and determinism") {
  auto env = std::make_shared<GeometricEnvironment>();
  env->dimension = 2;

  SUBCASE("n=0 keeps only source and target") {
    RoadmapSpec near;
    near.dimension = 2;
    near.vertex_count = 0;
    near.connection_radius = 1.2;  // > dist(source, target)
    RoadmapGraph g = build_roadmap(near, env);
    CHECK(g.vertex_count() == 2);
    CHECK(g.edge_count() == 1);
    near.connection_radius = 1.0;  // < dist = 0.8 * sqrt(2)
    CHECK(build_roadmap(near, env).edge_count() == 0);
  }
  SUBCASE("radius sqrt(d) yields the complete graph") {
    RoadmapSpec spec;
    spec.dimension = 2;
    spec.vertex_count = 20;
    spec.connection_radius = std::sqrt(2.0) + 1e-9;
    RoadmapGraph g = build_roadmap(spec, env);
    CHECK(g.edge_count() == 22 * 21 / 2);
  }
  SUBCASE("same seed is byte-identical, different seed is not") {
    RoadmapSpec spec;
    spec.dimension = 2;
    spec.vertex_count = 30;
    spec.connection_radius = 0.4;
    spec.seed = 11;
    std::stringstream a, b;
    write_graph(build_roadmap(spec, env), a);
    write_graph(build_roadmap(spec, env), b);
    CHECK(a.str() == b.str());
    spec.seed = 12;
    std::stringstream c;
    write_graph(build_roadmap(spec, env), c);
    CHECK(a.str() != c.str());
  }
  SUBCASE("edge weights are Euclidean distances") {
    RoadmapSpec spec;
    spec.dimension = 2;
    spec.vertex_count = 10;
    spec.connection_radius = 0.5;
    RoadmapGraph g = build_roadmap(spec, env);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto& rec = g.edge(e);
      const auto pa = g.coordinates(rec.a);
      const auto pb = g.coordinates(rec.b);
      const double dx = pa[0] - pb[0], dy = pa[1] - pb[1];
      CHECK(rec.lazy_weight == doctest::Approx(std::sqrt(dx * dx + dy * dy))
                                   .epsilon(1e-15));
      CHECK(rec.lazy_weight < 0.5);
    }
  }
}

TEST_CASE("roadmap evaluator consults the environment") {
  auto env = std::make_shared<GeometricEnvironment>();
  env->dimension = 2;
  env->obstacles.push_back(BoxObstacle{{0.0, 0.0}, {1.0, 1.0}});
  RoadmapSpec spec;
  spec.dimension = 2;
  spec.vertex_count = 0;
  spec.connection_radius = 1.2;
  RoadmapGraph g = build_roadmap(spec, env);
  REQUIRE(g.edge_count() == 1);
  CHECK(g.evaluate_edge(0) == EdgeStatus::Blocked);
}

TEST_CASE("clutter generator hits its coverage target") {
  const std::vector<double> s{0.1, 0.1}, t{0.9, 0.9};

  SUBCASE("zero coverage means no obstacles") {
    CHECK(make_clutter_env_2d(1, 0.0, s, t, {}).obstacles.empty());
  }
  SUBCASE("coverage out of range rejected") {
    CHECK_THROWS_AS(make_clutter_env_2d(1, 0.96, s, t, {}),
                    std::invalid_argument);
  }
  SUBCASE("measured coverage within 0.03 and keep-free respected") {
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto env = make_clutter_env_2d(seed, 0.7, s, t, {});
      for (const auto& box : env.obstacles) {
        CHECK_FALSE(box.contains(s));
        CHECK_FALSE(box.contains(t));
        for (int k = 0; k < 2; ++k) {
          CHECK(box.min_corner[k] >= 0.0);
          CHECK(box.max_corner[k] <= 1.0);
          const double side = box.max_corner[k] - box.min_corner[k];
          CHECK(side >= 0.02);
          CHECK(side <= 0.15);
        }
      }
      // Independent Monte-Carlo estimate with a different stream.
      std::mt19937_64 rng(seed * 7919 + 13);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      int hit = 0;
      const int samples = 100000;
      std::vector<double> p(2);
      for (int i = 0; i < samples; ++i) {
        p[0] = unit(rng);
        p[1] = unit(rng);
        hit += env.point_in_collision(p);
      }
      const double coverage = static_cast<double>(hit) / samples;
      CHECK(coverage == doctest::Approx(0.7).epsilon(0.043));  // +-0.03
    }
  }
  SUBCASE("same seed reproduces the environment exactly") {
    const auto a = make_clutter_env_2d(5, 0.5, s, t, {});
    const auto b = make_clutter_env_2d(5, 0.5, s, t, {});
    REQUIRE(a.obstacles.size() == b.obstacles.size());
    for (std::size_t i = 0; i < a.obstacles.size(); ++i) {
      CHECK(a.obstacles[i].min_corner == b.obstacles[i].min_corner);
      CHECK(a.obstacles[i].max_corner == b.obstacles[i].max_corner);
    }
  }
}

TEST_CASE("recursive maze structure and connectivity") {
  SUBCASE("wall count is 2^depth - 1") {
    CHECK(make_recursive_maze(2, 1, 0.02).obstacles.size() == 1);
    CHECK(make_recursive_maze(2, 2, 0.02).obstacles.size() == 3);
    CHECK(make_recursive_maze(2, 3, 0.02).obstacles.size() == 7);
    CHECK(make_recursive_maze(2, 4, 0.01).obstacles.size() == 15);
  }
  SUBCASE("invalid parameters rejected") {
    CHECK_THROWS_AS(make_recursive_maze(1, 1, 0.02), std::invalid_argument);
    CHECK_THROWS_AS(make_recursive_maze(2, 0, 0.02), std::invalid_argument);
    CHECK_THROWS_AS(make_recursive_maze(2, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_recursive_maze(2, 8, 0.05), std::runtime_error);
  }
  SUBCASE("source-target corridor survives at every depth") {
    const std::vector<double> s{0.1, 0.1}, t{0.9, 0.9};
    for (int depth = 1; depth <= 4; ++depth) {
      const auto env = make_recursive_maze(2, depth, 0.01);
      CHECK(grid_connected(env, s, t, 200));
    }
  }
  SUBCASE("walls actually separate: straight segment blocked") {
    const auto env = make_recursive_maze(2, 1, 0.02);
    const std::vector<double> s{0.1, 0.1}, t{0.9, 0.1};
    CHECK(env.segment_in_collision(s, t));
  }
}

TEST_CASE("environment file format round-trips") {
  auto env = make_recursive_maze(2, 2, 0.03);
  env.collision_resolution = 0.0005;
  std::stringstream first;
  write_environment(env, first);
  const GeometricEnvironment back = read_environment(first);
  CHECK(back.dimension == env.dimension);
  CHECK(back.collision_resolution == env.collision_resolution);
  REQUIRE(back.obstacles.size() == env.obstacles.size());
  for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
    CHECK(back.obstacles[i].min_corner == env.obstacles[i].min_corner);
    CHECK(back.obstacles[i].max_corner == env.obstacles[i].max_corner);
  }
  std::stringstream second;
  write_environment(back, second);
  CHECK(first.str() == second.str());
}
