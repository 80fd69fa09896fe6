#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "perlab/experiments.hpp"

using namespace perlab;

namespace {

// Drop the "# generated:" line; everything else must be byte-stable.
std::string strip_timestamp(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# generated:", 0) != 0) out << line << "\n";
  return out.str();
}

}  // namespace

TEST_CASE("theory rows") {
  ExperimentConfig cfg;
  cfg.experiment = "theory";
  cfg.c_grid = {0.5, 2.0, 50.0};
  auto rows = run_theory(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.residual <= 1e-12);
  CHECK(rows[2].F > 0.49);
  cfg.c_grid = {-1.0};
  CHECK_THROWS_AS(run_theory(cfg), ConfigError);
  cfg.c_grid.clear();
  CHECK_THROWS_AS(run_theory(cfg), ConfigError);
}

TEST_CASE("config file parsing") {
  const char* path = "perlab_test_config.toml";
  {
    std::ofstream out(path);
    out << "# demo config\n"
        << "experiment = local-limit\n"
        << "c = 1.0, 2.0\n"
        << "r = 2\n"
        << "seeds = 5\n"
        << "base_seed = 99\n"
        << "[host]\n"
        << "family = hypercube\n"
        << "[grid]\n"
        << "d = 8, 10\n";
  }
  ExperimentConfig cfg = load_config(path);
  CHECK(cfg.experiment == "local-limit");
  CHECK(cfg.family == "hypercube");
  CHECK(cfg.c_grid == std::vector<double>{1.0, 2.0});
  CHECK(cfg.d_grid == std::vector<std::size_t>{8, 10});
  CHECK(cfg.r == 2);
  CHECK(cfg.seeds == 5);
  CHECK(cfg.base_seed == 99);

  {
    std::ofstream out(path);
    out << "nonsense_key = 1\n";
  }
  CHECK_THROWS_AS(load_config(path), ConfigError);
  {
    std::ofstream out(path);
    out << "no equals sign here\n";
  }
  CHECK_THROWS_AS(load_config(path), ConfigError);
  std::remove(path);
  CHECK_THROWS_AS(load_config("perlab_no_such_file.toml"), ConfigError);
}

TEST_CASE("seed derivation is stable and spreads") {
  CHECK(derive_seed(1, 2, 3, 4) == derive_seed(1, 2, 3, 4));
  CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 3, 5));
  CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 4, 3));
  CHECK(derive_seed(1, 2, 3, 4) != derive_seed(2, 2, 3, 4));
}

TEST_CASE("matching convergence on a small grid") {
  ExperimentConfig cfg;
  cfg.experiment = "match";
  cfg.family = "hypercube";
  cfg.c_grid = {1.0};
  cfg.d_grid = {10};
  cfg.seeds = 5;
  MatchingResults res = run_matching_convergence(cfg);
  CHECK(res.rows.size() == 5);
  REQUIRE(res.summaries.size() == 1);
  // Recompute the summary from the rows.
  double sum = 0.0;
  for (const auto& r : res.rows) sum += r.ratio;
  CHECK(res.summaries[0].mean_ratio == doctest::Approx(sum / 5).epsilon(1e-12));
  double target = eval_F(1.0).F;
  CHECK(res.summaries[0].abs_err_vs_F ==
        doctest::Approx(std::abs(res.summaries[0].mean_ratio - target)).epsilon(1e-12));
  // Q^10 at d=10 is far from the limit but still in the right ballpark.
  CHECK(res.summaries[0].abs_err_vs_F < 0.1);

  cfg.seeds = 0;
  CHECK_THROWS_AS(run_matching_convergence(cfg), ConfigError);
}

TEST_CASE("heuristic mode rows are flagged inexact") {
  ExperimentConfig cfg;
  cfg.experiment = "match";
  cfg.family = "clique-union";
  cfg.k = 50;
  cfg.c_grid = {1.0};
  cfg.d_grid = {10};
  cfg.seeds = 3;
  cfg.mode = "heuristic";
  MatchingResults res = run_matching_convergence(cfg);
  for (const auto& r : res.rows) CHECK_FALSE(r.exact);
}

TEST_CASE("local limit runner") {
  ExperimentConfig cfg;
  cfg.experiment = "local-limit";
  cfg.family = "hypercube";
  cfg.c_grid = {1.0};
  cfg.d_grid = {10};
  cfg.r = 1;
  cfg.seeds = 3;
  cfg.threads = 2;
  auto rows = run_local_limit(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.tv >= 0.0);
    CHECK(r.tv <= 1.0);
    CHECK(r.paper_bound == doctest::Approx(std::exp(-0.25 * std::sqrt(std::log(10.0)))));
  }
  cfg.r = 0;
  CHECK_THROWS_AS(run_local_limit(cfg), ConfigError);
}

TEST_CASE("binpo runner emits both d' values") {
  ExperimentConfig cfg;
  cfg.experiment = "binpo";
  cfg.c_grid = {2.0};
  cfg.d_grid = {100};
  auto rows = run_binpo_rate(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].d_prime == 100);
  CHECK(rows[1].d_prime == 100 - 4);  // ceil(100^{1/4}) = 4
  CHECK(rows[0].tv_times_sqrt_d == doctest::Approx(rows[0].tv * 10.0));
}

TEST_CASE("coupling runner accounting") {
  ExperimentConfig cfg;
  cfg.experiment = "coupling";
  cfg.family = "clique-union";
  cfg.c_grid = {1.0};
  cfg.d_grid = {64};
  cfg.r = 1;
  cfg.trials = 500;
  auto rows = run_coupling_rate(cfg);
  REQUIRE(rows.size() == 1);
  const auto& r = rows[0];
  CHECK(r.success + r.abort_degree_deficit + r.abort_offspring_mismatch +
            r.abort_degree_overflow + r.abort_cross_edge ==
        r.trials);
  CHECK(r.failure_rate == doctest::Approx(1.0 - static_cast<double>(r.success) / 500.0));
  CHECK(r.paper_rate == doctest::Approx(std::log(64.0) / 8.0));
}

TEST_CASE("concentration runner") {
  ExperimentConfig cfg;
  cfg.experiment = "concentration";
  cfg.family = "hypercube";
  cfg.c_grid = {1.0};
  cfg.d_grid = {10};
  cfg.r = 1;
  cfg.seeds = 100;
  auto rows = run_concentration(cfg, 50);
  CHECK(!rows.empty());
  for (const auto& r : rows) {
    CHECK(r.mean_count >= 50.0);
    CHECK(r.mean_pow_23 == doctest::Approx(std::pow(r.mean_count, 2.0 / 3.0)));
    CHECK(r.deviation_fraction >= 0.0);
    CHECK(r.deviation_fraction <= 1.0);
  }
  cfg.seeds = 10;
  CHECK_THROWS_AS(run_concentration(cfg), ConfigError);
}

TEST_CASE("csv output is byte-stable modulo the timestamp") {
  ExperimentConfig cfg;
  cfg.experiment = "local-limit";
  cfg.family = "hypercube";
  cfg.c_grid = {1.0};
  cfg.d_grid = {8};
  cfg.r = 1;
  cfg.seeds = 4;
  cfg.threads = 1;

  std::ostringstream a, b;
  write_local_limit_csv(cfg, run_local_limit(cfg), a, "2026-01-01T00:00:00Z");
  cfg.threads = 3;  // threads are excluded from the canonical config string
  write_local_limit_csv(cfg, run_local_limit(cfg), b, "2026-02-02T12:34:56Z");
  CHECK(strip_timestamp(a.str()) == strip_timestamp(b.str()));
  CHECK(a.str() != b.str());  // timestamps differ

  // Header carries tool version, config, and hash.
  CHECK(a.str().find(kToolVersion) != std::string::npos);
  CHECK(a.str().find("# config:") != std::string::npos);
  CHECK(a.str().find("# config-hash:") != std::string::npos);
}

TEST_CASE("canonical config string reflects every grid") {
  ExperimentConfig cfg;
  cfg.experiment = "theory";
  std::string s1 = cfg.canonical_string();
  cfg.c_grid = {3.0};
  std::string s2 = cfg.canonical_string();
  CHECK(s1 != s2);
  CHECK(cfg.hash() != ExperimentConfig{}.hash());
  cfg.threads = 8;  // not part of the scientific identity of a run
  CHECK(cfg.canonical_string() == s2);
}
