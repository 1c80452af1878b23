#include "lazysearch/environment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lazysearch {

namespace {

std::vector<std::uint32_t> first_primes(std::size_t count) {
  std::vector<std::uint32_t> primes;
  for (std::uint32_t candidate = 2; primes.size() < count; ++candidate) {
    bool prime = true;
    for (std::uint32_t p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(candidate);
  }
  return primes;
}

double radical_inverse(std::uint64_t index, std::uint32_t base) {
  double result = 0.0;
  double digit_weight = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % base) * digit_weight;
    index /= base;
    digit_weight /= base;
  }
  return result;
}

double squared_distance(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = p[k] - q[k];
    acc += d * d;
  }
  return acc;
}

}  // namespace

bool BoxObstacle::contains(std::span<const double> point) const {
  for (std::size_t k = 0; k < point.size(); ++k) {
    if (point[k] < min_corner[k] || point[k] > max_corner[k]) {
      return false;
    }
  }
  return true;
}

bool GeometricEnvironment::point_in_collision(
    std::span<const double> point) const {
  for (const BoxObstacle& box : obstacles) {
    if (box.contains(point)) return true;
  }
  return false;
}

bool GeometricEnvironment::segment_in_collision(
    std::span<const double> p, std::span<const double> q) const {
  const double length = std::sqrt(squared_distance(p, q));
  const auto steps = static_cast<std::size_t>(
      std::ceil(length / collision_resolution));
  std::vector<double> sample(dimension);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = steps == 0 ? 0.0 : static_cast<double>(i) / steps;
    for (std::size_t k = 0; k < dimension; ++k) {
      sample[k] = p[k] + t * (q[k] - p[k]);
    }
    if (point_in_collision(sample)) return true;
  }
  return false;
}

std::vector<double> halton_point(std::uint64_t index, std::size_t dimension,
                                 std::span<const double> offsets) {
  if (index == 0) {
    throw std::invalid_argument("halton index starts at 1");
  }
  static thread_local std::vector<std::uint32_t> primes;
  if (primes.size() < dimension) {
    primes = first_primes(dimension);
  }
  std::vector<double> point(dimension);
  for (std::size_t k = 0; k < dimension; ++k) {
    double value = radical_inverse(index, primes[k]);
    if (!offsets.empty()) {
      value += offsets[k];
      value -= std::floor(value);
    }
    point[k] = value;
  }
  return point;
}

double default_connection_radius(std::size_t n, std::size_t dimension) {
  const double d = static_cast<double>(dimension);
  const double gamma = 2.0 * std::pow(1.0 + 1.0 / d, 1.0 / d);
  return gamma *
         std::pow(std::log(static_cast<double>(n)) / static_cast<double>(n),
                  1.0 / d);
}

RoadmapGraph build_roadmap(const RoadmapSpec& spec,
                           std::shared_ptr<const GeometricEnvironment> env) {
  const std::size_t d = spec.dimension;
  if (d < 1) {
    throw std::invalid_argument("roadmap dimension must be positive");
  }
  std::vector<double> source = spec.source;
  std::vector<double> target = spec.target;
  if (source.empty()) source.assign(d, 0.1);
  if (target.empty()) target.assign(d, 0.9);
  if (source.size() != d || target.size() != d) {
    throw std::invalid_argument("source/target dimension mismatch");
  }

  RoadmapGraph graph(spec.vertex_count + 2, d);
  graph.set_coordinates(0, source);
  graph.set_coordinates(1, target);

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> offsets(d);
  for (std::size_t k = 0; k < d; ++k) {
    offsets[k] = unit(rng);
  }
  for (std::size_t i = 0; i < spec.vertex_count; ++i) {
    const auto point = halton_point(i + 1, d, offsets);
    graph.set_coordinates(static_cast<VertexId>(i + 2), point);
  }

  const double r2 = spec.connection_radius * spec.connection_radius;
  const auto n_total = static_cast<VertexId>(graph.vertex_count());
  for (VertexId a = 0; a < n_total; ++a) {
    for (VertexId b = a + 1; b < n_total; ++b) {
      const double dist2 =
          squared_distance(graph.coordinates(a), graph.coordinates(b));
      if (dist2 < r2 && dist2 > 0.0) {
        graph.add_edge(a, b, std::sqrt(dist2));
      }
    }
  }

  graph.set_evaluator([env](const RoadmapGraph& g, EdgeId e) {
    const EdgeRecord& rec = g.edge(e);
    return !env->segment_in_collision(g.coordinates(rec.a),
                                      g.coordinates(rec.b));
  });
  return graph;
}

GeometricEnvironment make_clutter_env_2d(std::uint64_t seed,
                                         double target_coverage,
                                         std::span<const double> keep_free_a,
                                         std::span<const double> keep_free_b,
                                         const ClutterParams& params) {
  if (target_coverage < 0.0 || target_coverage > 0.95) {
    throw std::invalid_argument("target coverage must be in [0, 0.95]");
  }
  GeometricEnvironment env;
  env.dimension = 2;
  if (target_coverage == 0.0) {
    return env;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> side(params.min_side, params.max_side);

  // Fixed Monte-Carlo sample set for the running coverage estimate.
  std::mt19937_64 sample_rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::array<double, 2>> samples(params.coverage_samples);
  for (auto& s : samples) {
    s = {unit(sample_rng), unit(sample_rng)};
  }
  std::vector<char> covered(samples.size(), 0);
  std::size_t covered_count = 0;

  while (static_cast<double>(covered_count) / samples.size() <
         target_coverage) {
    if (env.obstacles.size() >= params.max_boxes) {
      throw std::runtime_error("clutter generation: coverage target not met");
    }
    const double sx = side(rng);
    const double sy = side(rng);
    const double x = unit(rng) * (1.0 - sx);
    const double y = unit(rng) * (1.0 - sy);
    BoxObstacle box{{x, y}, {x + sx, y + sy}};
    if (box.contains(keep_free_a) || box.contains(keep_free_b)) {
      continue;
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!covered[i] && box.contains(samples[i])) {
        covered[i] = 1;
        ++covered_count;
      }
    }
    env.obstacles.push_back(std::move(box));
  }
  return env;
}

namespace {

void divide_maze(GeometricEnvironment& env, std::vector<double> lo,
                 std::vector<double> hi, int depth, std::size_t level,
                 double thickness) {
  if (depth <= 0) return;
  const std::size_t d = env.dimension;
  const std::size_t axis = level % d;
  const double extent = hi[axis] - lo[axis];
  if (extent <= 2.0 * thickness) {
    throw std::runtime_error("maze wall thickness leaves no free corridor");
  }
  const double mid = 0.5 * (lo[axis] + hi[axis]);

  const std::size_t gap_axis = (axis + 1) % d;
  const double gap_extent = hi[gap_axis] - lo[gap_axis];
  const double gap_width = 0.25 * gap_extent;
  if (gap_width <= thickness) {
    throw std::runtime_error("maze wall thickness blocks the gap");
  }

  BoxObstacle wall;
  wall.min_corner = lo;
  wall.max_corner = hi;
  wall.min_corner[axis] = mid - 0.5 * thickness;
  wall.max_corner[axis] = mid + 0.5 * thickness;
  // The gap alternates ends so consecutive levels force detours.
  if (level % 2 == 0) {
    wall.max_corner[gap_axis] = hi[gap_axis] - gap_width;
  } else {
    wall.min_corner[gap_axis] = lo[gap_axis] + gap_width;
  }
  env.obstacles.push_back(wall);

  std::vector<double> hi_left = hi;
  hi_left[axis] = mid;
  std::vector<double> lo_right = lo;
  lo_right[axis] = mid;
  divide_maze(env, lo, hi_left, depth - 1, level + 1, thickness);
  divide_maze(env, lo_right, hi, depth - 1, level + 1, thickness);
}

}  // namespace

GeometricEnvironment make_recursive_maze(std::size_t dimension, int depth,
                                         double wall_thickness) {
  if (dimension < 2) {
    throw std::invalid_argument("maze dimension must be at least 2");
  }
  if (depth < 1) {
    throw std::invalid_argument("maze depth must be at least 1");
  }
  if (wall_thickness <= 0.0) {
    throw std::invalid_argument("wall thickness must be positive");
  }
  GeometricEnvironment env;
  env.dimension = dimension;
  divide_maze(env, std::vector<double>(dimension, 0.0),
              std::vector<double>(dimension, 1.0), depth, 0, wall_thickness);
  return env;
}

void write_environment(const GeometricEnvironment& env, std::ostream& out) {
  out << std::setprecision(17);
  out << "dim " << env.dimension << '\n';
  out << "res " << env.collision_resolution << '\n';
  for (const BoxObstacle& box : env.obstacles) {
    out << "box";
    for (double c : box.min_corner) out << ' ' << c;
    for (double c : box.max_corner) out << ' ' << c;
    out << '\n';
  }
}

GeometricEnvironment read_environment(std::istream& in) {
  GeometricEnvironment env;
  std::string tag;
  if (!(in >> tag >> env.dimension) || tag != "dim") {
    throw std::runtime_error("environment file: bad dim line");
  }
  if (!(in >> tag >> env.collision_resolution) || tag != "res") {
    throw std::runtime_error("environment file: bad res line");
  }
  while (in >> tag) {
    if (tag != "box") {
      throw std::runtime_error("environment file: unexpected tag " + tag);
    }
    BoxObstacle box;
    box.min_corner.resize(env.dimension);
    box.max_corner.resize(env.dimension);
    for (double& c : box.min_corner) {
      if (!(in >> c)) throw std::runtime_error("environment file: bad box");
    }
    for (double& c : box.max_corner) {
      if (!(in >> c)) throw std::runtime_error("environment file: bad box");
    }
    env.obstacles.push_back(std::move(box));
  }
  return env;
}

}  // namespace lazysearch
