// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "perlab/analytic.hpp"
#include "perlab/census.hpp"
#include "perlab/coupling.hpp"
#include "perlab/experiments.hpp"
#include "perlab/graph.hpp"
#include "perlab/gwtree.hpp"
#include "perlab/matching.hpp"

using namespace perlab;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int idx, bool ok, const std::string& detail, double secs) {
  std::printf("%s criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", idx, detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::size_t brute_force_nu(const SimpleGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> nbr_mask(n, 0);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w : g.adj[v]) nbr_mask[v] |= (1u << w);
  std::map<std::uint32_t, std::size_t> memo;
  std::function<std::size_t(std::uint32_t)> rec = [&](std::uint32_t mask) -> std::size_t {
    if (mask == 0) return 0;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::uint32_t v = static_cast<std::uint32_t>(__builtin_ctz(mask));
    std::uint32_t rest = mask & ~(1u << v);
    std::size_t best = rec(rest);
    std::uint32_t cand = nbr_mask[v] & rest;
    while (cand) {
      std::uint32_t w = static_cast<std::uint32_t>(__builtin_ctz(cand));
      cand &= cand - 1;
      best = std::max(best, 1 + rec(rest & ~(1u << w)));
    }
    memo.emplace(mask, best);
    return best;
  };
  return rec(n >= 32 ? 0xffffffffu : (1u << n) - 1);
}

bool is_connected(const SimpleGraph& g) {
  if (g.num_vertices() == 0) return true;
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == g.num_vertices();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --------------------------------------------------------------------------

void criterion1_theory() {
  Timer t;
  bool ok = true;
  double worst_res = 0.0, worst_gap = 0.0;
  for (double lc = std::log(0.01); lc <= std::log(100.0) + 1e-9; lc += 0.05) {
    double c = std::exp(lc);
    KSConstants k = eval_F(c);
    worst_res = std::max(worst_res, k.residual);
    double gap = std::abs(k.y - solve_y_fixed_point(c));
    worst_gap = std::max(worst_gap, gap);
    if (k.residual >= 1e-12 || gap >= 1e-10) ok = false;
  }
  double F50 = eval_F(50.0).F;
  if (!(F50 > 0.49)) ok = false;
  std::ostringstream d;
  d << "theory: max residual " << worst_res << ", max solver gap " << worst_gap << ", F(50)="
    << F50;
  report(1, ok, d.str(), t.seconds());
}

void criterion2_matching() {
  Timer t;
  bool ok = true;
  std::ostringstream d;
  d.precision(4);
  d << "matching:";
  struct Cell {
    const char* family;
    double c;
    std::size_t deg, n, k;
    double tol;
  };
  const Cell cells[] = {
      {"complete", 2.0, 0, 100'000, 0, 0.005},
      {"hypercube", 2.0, 14, 0, 0, 0.02},
      {"clique-union", 1.0, 50, 0, 2000, 0.01},
  };
  for (const Cell& cell : cells) {
    ExperimentConfig cfg;
    cfg.experiment = "match";
    cfg.family = cell.family;
    cfg.c_grid = {cell.c};
    if (cell.n) cfg.n_grid = {cell.n};
    if (cell.deg) cfg.d_grid = {cell.deg};
    cfg.k = cell.k;
    cfg.seeds = 10;
    cfg.base_seed = 20260823;
    MatchingResults res = run_matching_convergence(cfg);
    double err = res.summaries.at(0).abs_err_vs_F;
    if (!(err < cell.tol)) ok = false;
    d << " " << cell.family << " |mean-F|=" << err << " (tol " << cell.tol << ")";
  }
  report(2, ok, d.str(), t.seconds());
}

void criterion3_oracle() {
  Timer t;
  bool ok = true;
  std::size_t checked_small = 0;
  // All connected graphs on <= 6 vertices.
  for (std::size_t n = 1; n <= 6 && ok; ++n) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      SimpleGraph g(n);
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask & (1u << i)) g.add_edge(pairs[i].first, pairs[i].second);
      if (!is_connected(g)) continue;
      ++checked_small;
      if (max_matching_blossom(g).size() != brute_force_nu(g)) {
        ok = false;
        break;
      }
    }
  }
  // 10^4 random graphs on <= 8 vertices.
  Rng rng(314159);
  for (int trial = 0; ok && trial < 10'000; ++trial) {
    std::size_t n = 2 + rng.below(7);
    SimpleGraph g(n);
    double p = 0.1 + 0.8 * rng.u01();
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (rng.bernoulli(p)) g.add_edge(u, v);
    g.sort_adjacency();
    if (max_matching_blossom(g).size() != brute_force_nu(g)) ok = false;
  }
  // Karp-Sipser reduction preserves nu on 1000 instances.
  for (int trial = 0; ok && trial < 1000; ++trial) {
    std::size_t n = 10 + rng.below(91);
    SimpleGraph g(n);
    double c = 0.5 + 3.0 * rng.u01();
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (rng.bernoulli(c / static_cast<double>(n))) g.add_edge(u, v);
    g.sort_adjacency();
    KSReduction red = karp_sipser_reduce(g);
    if (red.forced_edges.size() + max_matching_blossom(red.core).size() !=
        max_matching_blossom(g).size())
      ok = false;
  }
  std::ostringstream d;
  d << "oracle equivalence: " << checked_small
    << " connected graphs <=6 vertices, 10000 random <=8, 1000 reduction instances";
  report(3, ok, d.str(), t.seconds());
}

void criterion4_binpo() {
  Timer t;
  bool ok = true;
  double lo = 1e300, hi = 0.0;
  for (std::size_t d : {100, 1000, 10000, 100000}) {
    double tv = tv_bin_po(static_cast<std::int64_t>(d), 2.0 / static_cast<double>(d), 2.0);
    double scaled = tv * std::sqrt(static_cast<double>(d));
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  if (!(hi / lo < 2.0)) ok = false;
  bool tails_ok = true;
  for (double c : {0.5, 1.0, 2.0, 5.0})
    for (std::size_t d : {100, 1000, 10000})
      for (double mult : {10.0, 15.0, 20.0}) {
        auto rep = chernoff_check(static_cast<std::int64_t>(d), c / static_cast<double>(d), c,
                                  mult * c);
        if (!rep.holds) tails_ok = false;
      }
  if (!tails_ok) ok = false;
  std::ostringstream d;
  d.precision(5);
  d << "bin-vs-po: tv*sqrt(d) in [" << lo << ", " << hi << "] (band " << hi / lo
    << " < 2), tails " << (tails_ok ? "hold" : "VIOLATED");
  report(4, ok, d.str(), t.seconds());
}

void criterion5_gw() {
  Timer t;
  bool ok = true;
  // r = 1 equals the Poisson pmf exactly.
  const double c1 = 1.7;
  GWMeasure m1 = enumerate_gw_measure(c1, 1, 40);
  for (std::size_t j = 0; j <= 40 && ok; ++j) {
    RootedTree star;
    for (std::size_t i = 0; i < j; ++i) star.add_child(0);
    double pmf = std::exp(-c1 + static_cast<double>(j) * std::log(c1) -
                          std::lgamma(static_cast<double>(j) + 1));
    if (std::abs(m1.mass.at(tree_canon(star).code) - pmf) > 1e-14 * std::max(1.0, pmf)) ok = false;
  }
  // r = 2, c = 1 vs 10^6 Monte-Carlo samples.
  GWMeasure m2 = enumerate_gw_measure(1.0, 2, 6);
  double norm_err = std::abs(m2.total_mass() + m2.tail_mass - 1.0);
  if (norm_err > 1e-10) ok = false;
  const int samples = 1'000'000;
  std::map<std::string, int> freq;
  Rng rng(271828);
  for (int i = 0; i < samples; ++i) ++freq[tree_canon(sample_gw_truncated(1.0, 2, rng)).code];
  std::size_t classes_checked = 0;
  double worst_z = 0.0;
  for (const auto& [code, p] : m2.mass) {
    if (p < 1e-3) continue;
    ++classes_checked;
    double f = static_cast<double>(freq[code]) / samples;
    double z = std::abs(f - p) / std::sqrt(p * (1 - p) / samples);
    worst_z = std::max(worst_z, z);
    if (z > 4.0) ok = false;
  }
  std::ostringstream d;
  d.precision(4);
  d << "gw measure: r=1 pmf exact, r=2 " << classes_checked << " classes max |z|=" << worst_z
    << ", normalisation err " << norm_err;
  report(5, ok, d.str(), t.seconds());
}

void criterion6_local_limit() {
  Timer t;
  bool ok = true;
  std::ostringstream d;
  d.precision(4);
  // (a) hypercubes: median tv strictly decreasing in d.
  ExperimentConfig cfg;
  cfg.experiment = "local-limit";
  cfg.family = "hypercube";
  cfg.c_grid = {1.0};
  cfg.d_grid = {8, 10, 12, 14};
  cfg.r = 1;
  cfg.seeds = 20;
  cfg.base_seed = 606;
  auto rows = run_local_limit(cfg);
  std::map<std::size_t, std::vector<double>> by_d;
  for (const auto& r : rows) by_d[r.d].push_back(r.tv);
  d << "local limit: hypercube medians";
  double prev = 1e300;
  for (std::size_t dd : cfg.d_grid) {
    double med = median(by_d[dd]);
    d << " " << med;
    if (!(med < prev)) ok = false;
    prev = med;
  }
  // (b) random-regular n=10^5: tv*sqrt(d)/(log d)^r within factor 4.
  double lo = 1e300, hi = 0.0;
  for (std::size_t r : {1, 2}) {
    ExperimentConfig rc;
    rc.experiment = "local-limit";
    rc.family = "random-regular";
    rc.c_grid = {1.0};
    rc.d_grid = {20, 50, 100};
    rc.n_grid = {100'000};
    rc.r = r;
    rc.seeds = 3;
    rc.base_seed = 707;
    for (const auto& row : run_local_limit(rc)) {
      double scaled = row.tv * std::sqrt(static_cast<double>(row.d)) /
                      std::pow(std::log(static_cast<double>(row.d)), static_cast<double>(r));
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
  }
  if (!(hi / lo < 4.0)) ok = false;
  d << "; random-regular scaled tv band " << hi / lo << " (< 4)";
  report(6, ok, d.str(), t.seconds());
}

void criterion7_coupling() {
  Timer t;
  bool ok = true;
  const std::size_t trials = 10'000;
  double k_fit = 0.0;
  std::size_t success_rechecked = 0;
  bool recheck_ok = true;
  std::ostringstream d;
  d.precision(4);
  d << "coupling:";
  auto run_cells = [&](const char* family, auto make_host) {
    for (std::size_t dd : {64, 128, 256}) {
      auto host = make_host(dd);
      std::size_t fails = 0;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        CouplingReport rep =
            coupled_bfe(host, 1.0, 2, derive_seed(909, dd, std::hash<std::string>{}(family), trial));
        if (rep.outcome != CouplingOutcome::Success) {
          ++fails;
          continue;
        }
        ++success_rechecked;
        rep.revealed.sort_adjacency();
        if (canon_code(ball(rep.revealed, 0, 2)).code != tree_canon(rep.tree).code)
          recheck_ok = false;
      }
      double rate = static_cast<double>(fails) / static_cast<double>(trials);
      double paper = std::pow(std::log(static_cast<double>(dd)), 2.0) /
                     std::sqrt(static_cast<double>(dd));
      k_fit = std::max(k_fit, rate / paper);
      d << " " << family << "/d=" << dd << " rate=" << rate;
    }
  };
  run_cells("hypercube", [](std::size_t dd) { return ImplicitHypercube{dd}; });
  run_cells("clique-union", [](std::size_t dd) { return ImplicitCliqueUnion{dd}; });
  if (!(k_fit <= 1.0)) ok = false;
  if (!recheck_ok) ok = false;
  d << "; K_fit=" << k_fit << " (<= 1), " << success_rechecked << " successes rechecked "
    << (recheck_ok ? "ok" : "MISMATCH");
  report(7, ok, d.str(), t.seconds());
}

void criterion8_concentration() {
  Timer t;
  bool ok = true;
  std::ostringstream d;
  d.precision(4);
  d << "concentration:";
  for (std::size_t r : {1, 2}) {
    ExperimentConfig cfg;
    cfg.experiment = "concentration";
    cfg.family = "hypercube";
    cfg.c_grid = {1.0};
    cfg.d_grid = {12};
    cfg.r = r;
    cfg.seeds = 200;
    cfg.base_seed = 808;
    auto rows = run_concentration(cfg, 50);
    double worst = 0.0;
    for (const auto& row : rows) {
      worst = std::max(worst, row.deviation_fraction);
      if (row.deviation_fraction > 0.05) ok = false;
    }
    d << " r=" << r << " classes=" << rows.size() << " max_dev_frac=" << worst;
  }
  report(8, ok, d.str(), t.seconds());
}

void criterion9_determinism() {
  Timer t;
  auto strip = [](const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("# generated:", 0) != 0) out << line << "\n";
    return out.str();
  };
  bool ok = true;
  {
    ExperimentConfig cfg;
    cfg.experiment = "local-limit";
    cfg.family = "hypercube";
    cfg.c_grid = {1.0};
    cfg.d_grid = {10};
    cfg.r = 1;
    cfg.seeds = 5;
    std::ostringstream a, b;
    write_local_limit_csv(cfg, run_local_limit(cfg), a, "t1");
    cfg.threads = 4;
    write_local_limit_csv(cfg, run_local_limit(cfg), b, "t2");
    if (strip(a.str()) != strip(b.str())) ok = false;
  }
  {
    ExperimentConfig cfg;
    cfg.experiment = "match";
    cfg.family = "clique-union";
    cfg.k = 100;
    cfg.c_grid = {1.0};
    cfg.d_grid = {10};
    cfg.seeds = 4;
    std::ostringstream a, b;
    write_matching_csv(cfg, run_matching_convergence(cfg), a, "t1");
    write_matching_csv(cfg, run_matching_convergence(cfg), b, "t2");
    if (strip(a.str()) != strip(b.str())) ok = false;
  }
  {
    ExperimentConfig cfg;
    cfg.experiment = "coupling";
    cfg.family = "clique-union";
    cfg.c_grid = {1.0};
    cfg.d_grid = {64};
    cfg.r = 1;
    cfg.trials = 300;
    std::ostringstream a, b;
    write_coupling_csv(cfg, run_coupling_rate(cfg), a, "t1");
    write_coupling_csv(cfg, run_coupling_rate(cfg), b, "t2");
    if (strip(a.str()) != strip(b.str())) ok = false;
  }
  report(9, ok, "determinism: reruns byte-identical modulo timestamp line", t.seconds());
}

}  // namespace

int main() {
  criterion1_theory();
  criterion2_matching();
  criterion3_oracle();
  criterion4_binpo();
  criterion5_gw();
  criterion6_local_limit();
  criterion7_coupling();
  criterion8_concentration();
  criterion9_determinism();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
