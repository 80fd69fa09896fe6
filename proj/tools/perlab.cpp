// perlab: percolation-and-matching laboratory CLI.
//
// Subcommands: theory | match | local-limit | binpo | coupling |
// concentration | census | percolate. Results are CSV with '#'-prefixed
// header comments (tool version, config string, config hash).

#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "perlab/experiments.hpp"

namespace {

std::string now_string() {
  std::time_t t = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct OutputTarget {
  std::string path;

  template <typename Fn>
  void with_stream(Fn&& fn) const {
    if (path.empty() || path == "-") {
      fn(std::cout);
      return;
    }
    std::ofstream out(path);
    if (!out) throw perlab::ConfigError("cannot open output file: " + path);
    fn(out);
  }
};

void add_common_options(CLI::App* sub, perlab::ExperimentConfig& cfg, OutputTarget& out,
                        std::string& config_path) {
  sub->add_option("--config", config_path, "config file (key = value, [table] sections)");
  sub->add_option("--out,-o", out.path, "output CSV path (default: stdout)");
  sub->add_option("--seeds", cfg.seeds, "number of seeds per grid cell");
  sub->add_option("--base-seed", cfg.base_seed, "base seed for seed derivation");
  sub->add_option("--threads", cfg.threads, "worker threads (PERLAB_THREADS overrides)");
  sub->add_option("--family", cfg.family,
                  "host family: complete|hypercube|clique-union|random-regular|custom");
  sub->add_option("--c", cfg.c_grid, "mean-degree parameter grid")->delimiter(',');
  sub->add_option("--d", cfg.d_grid, "degree grid")->delimiter(',');
  sub->add_option("--n", cfg.n_grid, "vertex-count grid")->delimiter(',');
  sub->add_option("--k", cfg.k, "clique-union block count");
  sub->add_option("--r", cfg.r, "ball radius");
  sub->add_option("--trials", cfg.trials, "coupling trials per cell");
  sub->add_option("--delta-cap", cfg.delta_cap, "max degree for GW enumeration (0 = auto)");
  sub->add_option("--mode", cfg.mode, "matching mode: exact|heuristic");
  sub->add_option("--edge-list", cfg.edge_list, "edge-list file for the custom family");
  sub->add_flag("--allow-irregular", cfg.allow_irregular,
                "accept irregular custom hosts (matching experiments only)");
}

// Config file first, CLI flags override.
perlab::ExperimentConfig merge_config(const perlab::ExperimentConfig& cli_cfg,
                                      const std::string& config_path, const CLI::App* sub) {
  if (config_path.empty()) return cli_cfg;
  perlab::ExperimentConfig cfg = perlab::load_config(config_path);
  cfg.experiment = cli_cfg.experiment;
  auto taken = [&](const std::string& flag) { return sub->count(flag) > 0; };
  if (taken("--seeds")) cfg.seeds = cli_cfg.seeds;
  if (taken("--base-seed")) cfg.base_seed = cli_cfg.base_seed;
  if (taken("--threads")) cfg.threads = cli_cfg.threads;
  if (taken("--family")) cfg.family = cli_cfg.family;
  if (taken("--c")) cfg.c_grid = cli_cfg.c_grid;
  if (taken("--d")) cfg.d_grid = cli_cfg.d_grid;
  if (taken("--n")) cfg.n_grid = cli_cfg.n_grid;
  if (taken("--k")) cfg.k = cli_cfg.k;
  if (taken("--r")) cfg.r = cli_cfg.r;
  if (taken("--trials")) cfg.trials = cli_cfg.trials;
  if (taken("--delta-cap")) cfg.delta_cap = cli_cfg.delta_cap;
  if (taken("--mode")) cfg.mode = cli_cfg.mode;
  if (taken("--edge-list")) cfg.edge_list = cli_cfg.edge_list;
  if (taken("--allow-irregular")) cfg.allow_irregular = cli_cfg.allow_irregular;
  return cfg;
}

void run_experiment(const perlab::ExperimentConfig& cfg, const OutputTarget& out) {
  std::string ts = now_string();
  if (cfg.experiment == "theory") {
    auto rows = perlab::run_theory(cfg);
    out.with_stream([&](std::ostream& os) { perlab::write_theory_csv(cfg, rows, os, ts); });
  } else if (cfg.experiment == "match") {
    auto res = perlab::run_matching_convergence(cfg);
    out.with_stream([&](std::ostream& os) { perlab::write_matching_csv(cfg, res, os, ts); });
  } else if (cfg.experiment == "local-limit") {
    auto rows = perlab::run_local_limit(cfg);
    out.with_stream([&](std::ostream& os) { perlab::write_local_limit_csv(cfg, rows, os, ts); });
  } else if (cfg.experiment == "binpo") {
    auto rows = perlab::run_binpo_rate(cfg);
    out.with_stream([&](std::ostream& os) { perlab::write_binpo_csv(cfg, rows, os, ts); });
  } else if (cfg.experiment == "coupling") {
    auto rows = perlab::run_coupling_rate(cfg);
    out.with_stream([&](std::ostream& os) { perlab::write_coupling_csv(cfg, rows, os, ts); });
  } else if (cfg.experiment == "concentration") {
    auto rows = perlab::run_concentration(cfg);
    out.with_stream(
        [&](std::ostream& os) { perlab::write_concentration_csv(cfg, rows, os, ts); });
  } else {
    throw perlab::ConfigError("unknown experiment: " + cfg.experiment);
  }
}

perlab::HostGraph build_host(const perlab::ExperimentConfig& cfg) {
  if (cfg.family == "hypercube") {
    if (cfg.d_grid.size() != 1) throw perlab::ConfigError("hypercube host needs exactly one --d");
    return perlab::make_hypercube(cfg.d_grid[0]);
  }
  if (cfg.family == "complete") {
    if (cfg.n_grid.size() != 1) throw perlab::ConfigError("complete host needs exactly one --n");
    return perlab::make_complete(cfg.n_grid[0]);
  }
  if (cfg.family == "clique-union") {
    if (cfg.d_grid.size() != 1 || cfg.k == 0)
      throw perlab::ConfigError("clique-union host needs --d and --k");
    return perlab::make_clique_union(cfg.k, cfg.d_grid[0]);
  }
  if (cfg.family == "random-regular") {
    if (cfg.d_grid.size() != 1 || cfg.n_grid.size() != 1)
      throw perlab::ConfigError("random-regular host needs --d and --n");
    return perlab::make_random_regular(cfg.n_grid[0], cfg.d_grid[0], cfg.base_seed);
  }
  if (cfg.family == "custom") {
    if (cfg.edge_list.empty()) throw perlab::ConfigError("custom host needs --edge-list");
    return perlab::load_edge_list(cfg.edge_list, cfg.allow_irregular);
  }
  throw perlab::ConfigError("unknown family: " + cfg.family);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perlab: edge percolation, matching numbers, and local limits of regular graphs"};
  app.require_subcommand(0, 1);

  struct SubState {
    perlab::ExperimentConfig cfg;
    OutputTarget out;
    std::string config_path;
    CLI::App* sub = nullptr;
  };
  std::vector<SubState> states;
  states.reserve(16);

  const char* experiments[] = {"theory", "match", "local-limit", "binpo", "coupling",
                               "concentration"};
  const char* descriptions[] = {
      "fixed point y(c) and matching constant F(c) over a c grid",
      "matching-number convergence to F(c) on percolated hosts",
      "TV distance between the ball census and the GW(c) ball law",
      "exact TV(Bin(d',c/d), Po(c)) across a d grid",
      "coupled breadth-first exploration failure rates",
      "seed-to-seed concentration of per-tree ball counts"};
  for (std::size_t i = 0; i < 6; ++i) {
    states.emplace_back();
    SubState& st = states.back();
    st.cfg.experiment = experiments[i];
    st.sub = app.add_subcommand(experiments[i], descriptions[i]);
    add_common_options(st.sub, st.cfg, st.out, st.config_path);
  }

  // Ad-hoc access to the lower modules.
  states.emplace_back();
  SubState& census_state = states.back();
  census_state.cfg.experiment = "census";
  census_state.sub = app.add_subcommand("census", "ball-class census of one percolated instance");
  add_common_options(census_state.sub, census_state.cfg, census_state.out,
                     census_state.config_path);

  states.emplace_back();
  SubState& perc_state = states.back();
  perc_state.cfg.experiment = "percolate";
  perc_state.sub = app.add_subcommand("percolate", "emit the retained edge list of one instance");
  add_common_options(perc_state.sub, perc_state.cfg, perc_state.out, perc_state.config_path);
  double perc_p = -1.0;
  perc_state.sub->add_option("--p", perc_p, "retention probability (default: c/d)");

  // Flag-style selection, equivalent to the subcommands.
  std::string experiment_flag;
  app.add_option("--experiment", experiment_flag, "experiment name (alternative to subcommand)");
  states.emplace_back();
  SubState& root_state = states.back();
  add_common_options(&app, root_state.cfg, root_state.out, root_state.config_path);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& st : states) {
      if (st.sub == nullptr || !st.sub->parsed()) continue;
      perlab::ExperimentConfig cfg = merge_config(st.cfg, st.config_path, st.sub);
      if (cfg.experiment == "census") {
        perlab::HostGraph host = build_host(cfg);
        double c = cfg.c_grid.at(0);
        double p = c / static_cast<double>(host.degree());
        if (!host.regular())
          throw perlab::ConfigError("census requires a regular host (local-limit claim)");
        perlab::SimpleGraph g = perlab::percolate(host, p, cfg.base_seed).subgraph();
        perlab::NeighborhoodMeasure m = perlab::census(g, cfg.r, cfg.effective_threads());
        st.out.with_stream([&](std::ostream& os) {
          os << "# tool: " << perlab::kToolVersion << "\n";
          os << "# config: " << cfg.canonical_string() << "\n";
          m.write_csv(os);
        });
      } else if (cfg.experiment == "percolate") {
        perlab::HostGraph host = build_host(cfg);
        double p = perc_p >= 0.0 ? perc_p : cfg.c_grid.at(0) / static_cast<double>(host.degree());
        perlab::PercolatedGraph pg = perlab::percolate(host, p, cfg.base_seed);
        st.out.with_stream([&](std::ostream& os) {
          os << "# tool: " << perlab::kToolVersion << "\n";
          os << "# family: " << perlab::family_name(host.family()) << " n=" << host.num_vertices()
             << " d=" << host.degree() << " p=" << p << " seed=" << cfg.base_seed << "\n";
          for (std::size_t i = 0; i < host.num_edges(); ++i)
            if (pg.retained(i)) os << host.edge(i).first << " " << host.edge(i).second << "\n";
        });
      } else {
        run_experiment(cfg, st.out);
      }
      return 0;
    }
    // No subcommand: require --experiment.
    if (experiment_flag.empty()) {
      std::cerr << app.help();
      return 2;
    }
    perlab::ExperimentConfig cfg = merge_config(root_state.cfg, root_state.config_path, &app);
    cfg.experiment = experiment_flag;
    run_experiment(cfg, root_state.out);
    return 0;
  } catch (const perlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const perlab::SizeError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 3;
  } catch (const perlab::GenerationError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
