#include "lazysearch/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lazysearch {

namespace {

constexpr VertexId kSource = 0;
constexpr VertexId kTarget = 1;

double sort_key(const std::optional<std::uint32_t>& alpha) {
  return alpha ? static_cast<double>(*alpha)
               : std::numeric_limits<double>::infinity();
}

void apply_eval_delay(RoadmapGraph& graph, double delay_us) {
  if (delay_us <= 0.0) return;
  const auto inner = graph.evaluator();
  const auto delay = std::chrono::duration_cast<
      std::chrono::steady_clock::duration>(
      std::chrono::duration<double, std::micro>(delay_us));
  graph.set_evaluator([inner, delay](const RoadmapGraph& g, EdgeId e) {
    const auto until = std::chrono::steady_clock::now() + delay;
    while (std::chrono::steady_clock::now() < until) {
      // busy-wait: emulate an expensive edge evaluation
    }
    return inner(g, e);
  });
}

}  // namespace

std::string alpha_label(const std::optional<std::uint32_t>& alpha) {
  return alpha ? std::to_string(*alpha) : std::string("inf");
}

RoadmapGraph build_trial_graph(const ExperimentConfig& config,
                               std::uint64_t seed) {
  switch (config.env) {
    case EnvironmentKind::Clutter2D: {
      if (config.dimension != 2) {
        throw std::invalid_argument("clutter environment is 2-dimensional");
      }
      const std::vector<double> source{0.1, 0.1};
      const std::vector<double> target{0.9, 0.9};
      auto env = std::make_shared<GeometricEnvironment>(
          make_clutter_env_2d(seed, config.coverage, source, target));
      RoadmapSpec spec;
      spec.dimension = 2;
      spec.vertex_count = config.vertex_count;
      spec.connection_radius = config.connection_radius.value_or(
          default_connection_radius(config.vertex_count + 2, 2));
      spec.seed = seed;
      return build_roadmap(spec, std::move(env));
    }
    case EnvironmentKind::Maze: {
      auto env = std::make_shared<GeometricEnvironment>(make_recursive_maze(
          config.dimension, config.maze_depth, config.maze_wall_thickness));
      RoadmapSpec spec;
      spec.dimension = config.dimension;
      spec.vertex_count = config.vertex_count;
      spec.connection_radius = config.connection_radius.value_or(
          default_connection_radius(config.vertex_count + 2,
                                    config.dimension));
      spec.seed = seed;
      return build_roadmap(spec, std::move(env));
    }
    case EnvironmentKind::AbstractFile:
      return read_graph_file(config.graph_file);
  }
  throw std::logic_error("unreachable environment kind");
}

TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t seed,
                      std::optional<std::uint32_t> alpha,
                      std::ostream* replay_log) {
  RoadmapGraph graph = build_trial_graph(config, seed);
  apply_eval_delay(graph, config.eval_delay_us);

  SearchConfig search_config;
  search_config.alpha = alpha;
  search_config.beta = config.beta;
  search_config.heuristic = config.heuristic;
  search_config.lazy_band_extension = config.lazy_band_extension;
  search_config.replay_log = replay_log;

  const SearchResult result = search(graph, kSource, kTarget, search_config);

  TrialRecord record;
  record.seed = seed;
  record.alpha = alpha_label(alpha);
  record.beta = config.beta;
  record.n_vertices = graph.vertex_count();
  record.n_edges = graph.edge_count();
  record.stats = result.stats;
  if (graph.max_invocations_per_edge() > 1) {
    throw std::logic_error("edge evaluated more than once");
  }
  if (record.stats.budget_violations > 0) {
    throw std::logic_error("lookahead budget violated");
  }
  return record;
}

void write_csv_row(const TrialRecord& r, std::ostream& out) {
  out << r.seed << ',' << r.alpha << ',' << r.beta << ',' << r.n_vertices
      << ',' << r.n_edges << ',' << r.stats.evaluated_edges.size() << ','
      << r.stats.blocked_count << ',' << r.stats.rewired_node_count << ','
      << r.stats.node_update_count << ',' << r.stats.queue_op_count << ',';
  if (r.stats.result_cost) {
    out << std::setprecision(17) << *r.stats.result_cost;
  } else {
    out << "Failure";
  }
  out << ',' << std::setprecision(17) << r.stats.eval_time_us << ','
      << r.stats.graph_time_us << ',' << r.stats.total_time_us << '\n';
}

std::vector<TrialRecord> sweep_alpha(const ExperimentConfig& config,
                                     std::ostream& csv, std::ostream& plot) {
  if (config.seeds.empty()) {
    throw std::invalid_argument("sweep requires at least one seed");
  }
  if (config.alphas.size() < 2) {
    throw std::invalid_argument("sweep requires at least two alpha values");
  }
  for (const auto& alpha : config.alphas) {
    if (alpha && *alpha < config.beta) {
      throw std::invalid_argument("every alpha must be at least beta");
    }
  }

  // alpha indices in ascending alpha order, for the monotonicity check.
  std::vector<std::size_t> ascending(config.alphas.size());
  for (std::size_t i = 0; i < ascending.size(); ++i) ascending[i] = i;
  std::sort(ascending.begin(), ascending.end(), [&](std::size_t a,
                                                    std::size_t b) {
    return sort_key(config.alphas[a]) < sort_key(config.alphas[b]);
  });

  std::vector<TrialRecord> records;
  csv << kCsvHeader << '\n';
  for (std::uint64_t seed : config.seeds) {
    std::vector<TrialRecord> per_seed;
    for (const auto& alpha : config.alphas) {
      per_seed.push_back(run_trial(config, seed, alpha));
    }

    // Lemma 1 corollary: the result cost is alpha-independent.
    for (const TrialRecord& r : per_seed) {
      const auto& base = per_seed.front().stats.result_cost;
      const auto& cur = r.stats.result_cost;
      if (base.has_value() != cur.has_value() ||
          (base && std::abs(*base - *cur) > 1e-9)) {
        throw std::runtime_error("result cost differs across alpha");
      }
    }
    // Containment corollary: evaluations non-increasing in alpha.
    for (std::size_t i = 1; i < ascending.size(); ++i) {
      const auto& lo = per_seed[ascending[i - 1]].stats.evaluated_edges;
      const auto& hi = per_seed[ascending[i]].stats.evaluated_edges;
      if (hi.size() > lo.size()) {
        throw std::runtime_error(
            "evaluation count increased with larger alpha");
      }
    }

    for (TrialRecord& r : per_seed) {
      write_csv_row(r, csv);
      records.push_back(std::move(r));
    }
  }

  // Aggregate section: per-alpha means over seeds, in sweep order.
  csv << "\n# per-alpha means over " << config.seeds.size() << " seeds\n";
  csv << kCsvHeader << '\n';
  plot << "alpha,mean_eval_time_us,mean_graph_time_us,mean_total_time_us\n";
  const auto n_seeds = static_cast<double>(config.seeds.size());
  for (std::size_t a = 0; a < config.alphas.size(); ++a) {
    double n_vertices = 0, n_edges = 0, evals = 0, blocked = 0, rewires = 0,
           updates = 0, queue_ops = 0, cost = 0, eval_time = 0,
           graph_time = 0, total_time = 0;
    std::size_t costs_present = 0;
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      const TrialRecord& r = records[s * config.alphas.size() + a];
      n_vertices += static_cast<double>(r.n_vertices);
      n_edges += static_cast<double>(r.n_edges);
      evals += static_cast<double>(r.stats.evaluated_edges.size());
      blocked += static_cast<double>(r.stats.blocked_count);
      rewires += static_cast<double>(r.stats.rewired_node_count);
      updates += static_cast<double>(r.stats.node_update_count);
      queue_ops += static_cast<double>(r.stats.queue_op_count);
      if (r.stats.result_cost) {
        cost += *r.stats.result_cost;
        ++costs_present;
      }
      eval_time += r.stats.eval_time_us;
      graph_time += r.stats.graph_time_us;
      total_time += r.stats.total_time_us;
    }
    csv << "mean," << alpha_label(config.alphas[a]) << ',' << config.beta
        << ',' << std::setprecision(17) << n_vertices / n_seeds << ','
        << n_edges / n_seeds << ',' << evals / n_seeds << ','
        << blocked / n_seeds << ',' << rewires / n_seeds << ','
        << updates / n_seeds << ',' << queue_ops / n_seeds << ',';
    if (costs_present > 0) {
      csv << cost / static_cast<double>(costs_present);
    } else {
      csv << "Failure";
    }
    csv << ',' << eval_time / n_seeds << ',' << graph_time / n_seeds << ','
        << total_time / n_seeds << '\n';
    plot << alpha_label(config.alphas[a]) << ','
         << std::setprecision(17) << eval_time / n_seeds << ','
         << graph_time / n_seeds << ',' << total_time / n_seeds << '\n';
  }
  return records;
}

void emit_f_trace(const ExperimentConfig& config, std::uint64_t seed,
                  std::optional<std::uint32_t> alpha, std::ostream& out) {
  const TrialRecord record = run_trial(config, seed, alpha);
  const auto& trace = record.stats.popped_f_trace;
  if (!alpha) {
    for (std::size_t i = 1; i < trace.size(); ++i) {
      if (trace[i] < trace[i - 1] - 1e-9) {
        throw std::runtime_error(
            "popped f-trace decreased with unbounded lookahead");
      }
    }
  }
  out << "iteration,f\n" << std::setprecision(17);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i << ',' << trace[i] << '\n';
  }
}

}  // namespace lazysearch
