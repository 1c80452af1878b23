#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lazysearch/graph.hpp"

namespace lazysearch {

/// Axis-aligned box inside the unit hypercube.
struct BoxObstacle {
  std::vector<double> min_corner;
  std::vector<double> max_corner;

  bool contains(std::span<const double> point) const;
};

/// Immutable geometric obstacle world answering segment-collision
/// queries against a list of axis-aligned boxes.
struct GeometricEnvironment {
  std::size_t dimension = 2;
  std::vector<BoxObstacle> obstacles;
  double collision_resolution = 1e-3;

  bool point_in_collision(std::span<const double> point) const;

  /// Samples the closed segment at arc-length steps no larger than
  /// collision_resolution, endpoints included.
  bool segment_in_collision(std::span<const double> p,
                            std::span<const double> q) const;
};

struct RoadmapSpec {
  std::size_t dimension = 2;
  std::size_t vertex_count = 500;
  double connection_radius = 0.1;
  std::uint64_t seed = 0;
  std::vector<double> source;  // defaults to (0.1, ..., 0.1)
  std::vector<double> target;  // defaults to (0.9, ..., 0.9)
};

/// k-th coordinate is the radical inverse of index in the k-th prime
/// base, shifted by offsets[k] modulo 1.
std::vector<double> halton_point(std::uint64_t index, std::size_t dimension,
                                 std::span<const double> offsets);

/// Connection radius from the usual asymptotic-connectivity bound for
/// uniform samples of the unit hypercube.
double default_connection_radius(std::size_t n, std::size_t dimension);

/// Vertex 0 is the source, vertex 1 the target, followed by
/// vertex_count Halton samples under a seeded uniform offset. Every
/// pair closer than the connection radius is joined by an edge whose
/// lazy weight is the Euclidean distance; the evaluator collision
/// checks the segment. Vertices are never filtered against obstacles.
RoadmapGraph build_roadmap(const RoadmapSpec& spec,
                           std::shared_ptr<const GeometricEnvironment> env);

struct ClutterParams {
  double min_side = 0.02;
  double max_side = 0.15;
  std::size_t coverage_samples = 100000;
  std::size_t max_boxes = 100000;
};

/// Seeded random boxes until the Monte-Carlo coverage estimate reaches
/// target_coverage. Boxes containing either keep_free point are
/// rejected. Throws if the target is infeasible within the box cap.
GeometricEnvironment make_clutter_env_2d(
    std::uint64_t seed, double target_coverage,
    std::span<const double> keep_free_a, std::span<const double> keep_free_b,
    const ClutterParams& params = {});

/// Recursive-division maze: each level splits the current cell with an
/// axis-aligned wall slab (split axes cycle) that leaves one gap, then
/// recurses into both halves. Produces 2^depth - 1 slabs.
GeometricEnvironment make_recursive_maze(std::size_t dimension, int depth,
                                         double wall_thickness);

/// Text format: `dim <d>`, `res <r>`, then one
/// `box <min_0> ... <min_{d-1}> <max_0> ... <max_{d-1}>` line per
/// obstacle in creation order.
void write_environment(const GeometricEnvironment& env, std::ostream& out);
GeometricEnvironment read_environment(std::istream& in);

}  // namespace lazysearch
