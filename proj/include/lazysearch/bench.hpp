#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lazysearch/environment.hpp"
#include "lazysearch/search.hpp"

namespace lazysearch {

enum class EnvironmentKind { Clutter2D, Maze, AbstractFile };

/// One experiment sweep: an environment family, a seed list, and the
/// search parameters to sweep over.
struct ExperimentConfig {
  EnvironmentKind env = EnvironmentKind::Clutter2D;
  std::size_t dimension = 2;
  std::size_t vertex_count = 500;
  std::optional<double> connection_radius;  // default: theoretical radius
  double coverage = 0.7;                    // clutter obstacle coverage
  int maze_depth = 3;
  double maze_wall_thickness = 0.02;
  std::string graph_file;  // for AbstractFile
  std::vector<std::uint64_t> seeds;
  std::vector<std::optional<std::uint32_t>> alphas;  // nullopt = unbounded
  std::uint32_t beta = 1;
  HeuristicSpec heuristic;
  bool lazy_band_extension = true;
  double eval_delay_us = 0.0;  // busy-wait added to every evaluation
};

struct TrialRecord {
  std::uint64_t seed = 0;
  std::string alpha;  // decimal or "inf"
  std::uint32_t beta = 1;
  std::size_t n_vertices = 0;
  std::size_t n_edges = 0;
  TrialStats stats;
};

std::string alpha_label(const std::optional<std::uint32_t>& alpha);

/// Builds the configured environment + roadmap for one seed. For
/// AbstractFile the seed is ignored and the file is re-read.
RoadmapGraph build_trial_graph(const ExperimentConfig& config,
                               std::uint64_t seed);

/// Runs one (seed, alpha) trial from scratch; deterministic per
/// (config, seed) apart from the time fields.
TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t seed,
                      std::optional<std::uint32_t> alpha,
                      std::ostream* replay_log = nullptr);

/// Sweeps every (seed, alpha) pair, writing one CSV row each plus a
/// per-alpha aggregate section, and a companion plot-data stream of
/// (alpha, mean eval time, mean graph-op time, mean total time).
/// Asserts in-run: cost equality across alpha per seed, and
/// evaluation-count monotonicity in alpha per seed.
std::vector<TrialRecord> sweep_alpha(const ExperimentConfig& config,
                                     std::ostream& csv, std::ostream& plot);

/// Emits (iteration, f) rows for the popped-frontier trace of a single
/// (seed, alpha) run. With unbounded alpha the trace is asserted
/// non-decreasing (1e-9 tolerance).
void emit_f_trace(const ExperimentConfig& config, std::uint64_t seed,
                  std::optional<std::uint32_t> alpha, std::ostream& out);

inline constexpr const char* kCsvHeader =
    "seed,alpha,beta,n_vertices,n_edges,evals,blocked,rewires,updates,"
    "queue_ops,cost,eval_time_us,graph_time_us,total_time_us";

void write_csv_row(const TrialRecord& record, std::ostream& out);

}  // namespace lazysearch
