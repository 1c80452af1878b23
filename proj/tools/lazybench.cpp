// Experiment runner: builds roadmaps in synthetic environments, sweeps
// the lookahead parameter, and writes CSV / plot / trace data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lazysearch/bench.hpp"

namespace {

std::vector<std::optional<std::uint32_t>> parse_alphas(
    const std::string& list) {
  std::vector<std::optional<std::uint32_t>> alphas;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "inf") {
      alphas.emplace_back(std::nullopt);
    } else {
      alphas.emplace_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
  }
  return alphas;
}

lazysearch::HeuristicSpec parse_heuristic(const std::string& text) {
  lazysearch::HeuristicSpec spec;
  if (text == "zero") {
    spec.kind = lazysearch::HeuristicKind::Zero;
  } else if (text == "euclid") {
    spec.kind = lazysearch::HeuristicKind::Euclidean;
  } else if (text.rfind("scaled:", 0) == 0) {
    spec.kind = lazysearch::HeuristicKind::ScaledEuclidean;
    spec.scale = std::stod(text.substr(7));
  } else {
    throw CLI::ValidationError("--heuristic",
                               "expected zero, euclid, or scaled:<f>");
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lazy lookahead-search experiment runner"};

  std::string env_name = "clutter2d";
  std::size_t dim = 2;
  std::size_t n = 500;
  double radius = 0.0;
  double coverage = 0.7;
  int maze_depth = 3;
  std::string graph_file;
  std::size_t seed_count = 10;
  std::uint64_t seed_base = 1;
  std::string alpha_list = "1,2,4,8,16,inf";
  std::uint32_t beta = 1;
  std::string heuristic_name = "euclid";
  bool no_lazy_extend = false;
  double eval_delay_us = 0.0;
  std::string out_dir = ".";
  bool replay = false;
  bool f_trace = false;

  app.add_option("--env", env_name, "Environment kind")
      ->check(CLI::IsMember({"clutter2d", "maze", "file"}));
  app.add_option("--dim", dim, "Space dimension");
  app.add_option("--n", n, "Sampled roadmap vertices (plus source/target)");
  app.add_option("--radius", radius,
                 "Connection radius (default: theoretical radius)");
  app.add_option("--coverage", coverage, "Clutter obstacle coverage");
  app.add_option("--maze-depth", maze_depth, "Recursive maze division depth");
  app.add_option("--graph-file", graph_file, "Graph file for --env file");
  app.add_option("--seeds", seed_count, "Number of seeds (base, base+1, ...)");
  app.add_option("--seed-base", seed_base, "First seed value");
  app.add_option("--alpha", alpha_list, "Comma list of lookaheads; inf allowed");
  app.add_option("--beta", beta, "Edges evaluated per selected path");
  app.add_option("--heuristic", heuristic_name, "zero | euclid | scaled:<f>");
  app.add_flag("--no-lazy-extend", no_lazy_extend,
               "Disable the lazy stopping criterion for band extension");
  app.add_option("--eval-delay-us", eval_delay_us,
                 "Busy-wait added to each edge evaluation, microseconds");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--replay-log", replay, "Write one replay log per trial");
  app.add_flag("--f-trace", f_trace,
               "Emit per-iteration popped f-values (single seed and alpha)");
  CLI11_PARSE(app, argc, argv);

  try {
    lazysearch::ExperimentConfig config;
    if (env_name == "clutter2d") {
      config.env = lazysearch::EnvironmentKind::Clutter2D;
    } else if (env_name == "maze") {
      config.env = lazysearch::EnvironmentKind::Maze;
    } else {
      config.env = lazysearch::EnvironmentKind::AbstractFile;
      if (graph_file.empty()) {
        throw CLI::ValidationError("--graph-file",
                                   "required with --env file");
      }
    }
    config.dimension = dim;
    config.vertex_count = n;
    if (radius > 0.0) config.connection_radius = radius;
    config.coverage = coverage;
    config.maze_depth = maze_depth;
    config.graph_file = graph_file;
    for (std::size_t i = 0; i < seed_count; ++i) {
      config.seeds.push_back(seed_base + i);
    }
    config.alphas = parse_alphas(alpha_list);
    config.beta = beta;
    config.heuristic = parse_heuristic(heuristic_name);
    config.lazy_band_extension = !no_lazy_extend;
    config.eval_delay_us = eval_delay_us;

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path out(out_dir);

    if (f_trace) {
      if (config.seeds.size() != 1 || config.alphas.size() != 1) {
        std::cerr << "--f-trace requires exactly one seed and one alpha\n";
        return 1;
      }
      std::ofstream trace(out / "f_trace.csv");
      lazysearch::emit_f_trace(config, config.seeds.front(),
                               config.alphas.front(), trace);
      std::cout << "wrote " << (out / "f_trace.csv").string() << '\n';
      return 0;
    }

    if (replay) {
      for (std::uint64_t seed : config.seeds) {
        for (const auto& alpha : config.alphas) {
          const std::string name = "replay_s" + std::to_string(seed) + "_a" +
                                   lazysearch::alpha_label(alpha) + ".log";
          std::ofstream log(out / name);
          lazysearch::run_trial(config, seed, alpha, &log);
        }
      }
    }

    std::ofstream csv(out / "sweep.csv");
    std::ofstream plot(out / "plot.csv");
    lazysearch::sweep_alpha(config, csv, plot);
    std::cout << "wrote " << (out / "sweep.csv").string() << " and "
              << (out / "plot.csv").string() << '\n';
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
