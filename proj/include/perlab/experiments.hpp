#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "perlab/analytic.hpp"
#include "perlab/census.hpp"
#include "perlab/common.hpp"
#include "perlab/coupling.hpp"
#include "perlab/graph.hpp"
#include "perlab/gwtree.hpp"
#include "perlab/matching.hpp"

namespace perlab {

inline constexpr const char* kToolVersion = "perlab 0.1.0";

// One config drives every experiment type; unused fields are ignored by the
// runners that do not need them. A run is reproducible from this struct
// alone.
struct ExperimentConfig {
  std::string experiment;                  // theory|match|local-limit|binpo|coupling|concentration
  std::string family = "hypercube";        // complete|hypercube|clique-union|random-regular|custom
  std::vector<double> c_grid{1.0};
  std::vector<std::size_t> d_grid;         // degree grid
  std::vector<std::size_t> n_grid;         // vertex-count grid
  std::size_t k = 0;                       // clique-union block count
  std::size_t r = 1;
  std::size_t seeds = 10;
  std::uint64_t base_seed = 1;
  std::size_t trials = 10'000;
  std::size_t delta_cap = 0;               // 0 = pick per radius
  std::string edge_list;                   // custom family source
  bool allow_irregular = false;
  std::string mode = "exact";              // exact|heuristic
  unsigned threads = 0;                    // 0 = hardware default / env override

  std::string canonical_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "experiment=" << experiment << ";family=" << family << ";c=";
    for (double c : c_grid) os << c << " ";
    os << ";d=";
    for (auto d : d_grid) os << d << " ";
    os << ";n=";
    for (auto n : n_grid) os << n << " ";
    os << ";k=" << k << ";r=" << r << ";seeds=" << seeds << ";base_seed=" << base_seed
       << ";trials=" << trials << ";delta_cap=" << delta_cap << ";edge_list=" << edge_list
       << ";allow_irregular=" << allow_irregular << ";mode=" << mode;
    return os.str();
  }

  std::uint64_t hash() const {
    std::uint64_t h = 0x7065'726c'6162ull;
    for (char ch : canonical_string()) h = hash_combine(h, static_cast<unsigned char>(ch));
    return h;
  }

  unsigned effective_threads() const {
    if (const char* env = std::getenv("PERLAB_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    }
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
  }
};

namespace detail {

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

inline std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (double v : parse_double_list(s)) {
    if (v < 0 || v != std::floor(v)) throw ConfigError("expected non-negative integer list: " + s);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace detail

// Key-value config file: `key = value` lines, `[table]` headers scope keys
// as table.key, '#' comments. Grids are comma-separated.
inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  if (key == "experiment") cfg.experiment = value;
  else if (key == "family" || key == "host.family") cfg.family = value;
  else if (key == "c" || key == "grid.c") cfg.c_grid = detail::parse_double_list(value);
  else if (key == "d" || key == "grid.d") cfg.d_grid = detail::parse_size_list(value);
  else if (key == "n" || key == "grid.n") cfg.n_grid = detail::parse_size_list(value);
  else if (key == "k" || key == "host.k") cfg.k = detail::parse_size_list(value).at(0);
  else if (key == "r") cfg.r = detail::parse_size_list(value).at(0);
  else if (key == "seeds") cfg.seeds = detail::parse_size_list(value).at(0);
  else if (key == "base_seed") cfg.base_seed = std::stoull(value);
  else if (key == "trials") cfg.trials = detail::parse_size_list(value).at(0);
  else if (key == "delta_cap") cfg.delta_cap = detail::parse_size_list(value).at(0);
  else if (key == "edge_list" || key == "host.edge_list") cfg.edge_list = value;
  else if (key == "allow_irregular") cfg.allow_irregular = (value == "true" || value == "1");
  else if (key == "mode") cfg.mode = value;
  else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
  else throw ConfigError("unknown config key: " + key);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line, table;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      table = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value on line " + std::to_string(lineno));
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (!table.empty()) key = table + "." + key;
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

// Per-cell seed: grids can be extended without disturbing existing cells.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t seed_index) {
  return hash_combine(hash_combine(hash_combine(base, a), b), seed_index);
}

// CSV with '#'-prefixed header comments. The "generated" line is the only
// nondeterministic content; byte-identical otherwise for equal configs.
class CsvWriter {
 public:
  CsvWriter(const ExperimentConfig& cfg, std::string columns)
      : columns_(std::move(columns)), cfg_string_(cfg.canonical_string()), cfg_hash_(cfg.hash()) {
    body_.precision(17);
  }

  std::ostream& row() {
    body_ << "\n";
    return body_;
  }

  template <typename... Ts>
  void emit(const Ts&... values) {
    bool first = true;
    ((body_ << (first ? "" : ","), first = false, body_ << values), ...);
    body_ << "\n";
  }

  void write(std::ostream& out, const std::string& timestamp) const {
    out << "# tool: " << kToolVersion << "\n";
    out << "# config: " << cfg_string_ << "\n";
    out << "# config-hash: " << std::hex << std::setw(16) << std::setfill('0') << cfg_hash_
        << std::dec << std::setfill(' ') << "\n";
    out << "# generated: " << timestamp << "\n";
    out << "# columns: " << columns_ << "\n";
    out << columns_ << "\n";
    out << body_.str();
  }

 private:
  std::string columns_;
  std::string cfg_string_;
  std::uint64_t cfg_hash_;
  std::ostringstream body_;
};

// ---------------------------------------------------------------------------
// theory

struct TheoryRow {
  double c, y, F, residual;
};

inline std::vector<TheoryRow> run_theory(const ExperimentConfig& cfg) {
  if (cfg.c_grid.empty()) throw ConfigError("theory: empty c grid");
  std::vector<TheoryRow> rows;
  for (double c : cfg.c_grid) {
    if (!(c > 0.0)) throw ConfigError("theory: c grid must be positive");
    KSConstants k = eval_F(c);
    rows.push_back({k.c, k.y, k.F, k.residual});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// matching convergence

struct MatchingRow {
  std::string family;
  std::size_t d = 0;
  std::size_t n = 0;
  double c = 0.0;
  std::size_t seed_index = 0;
  std::size_t nu = 0;
  std::size_t n_vertices = 0;
  double ratio = 0.0;
  bool exact = true;
};

struct MatchingSummary {
  std::string family;
  std::size_t d = 0;
  std::size_t n = 0;
  double c = 0.0;
  double mean_ratio = 0.0;
  double stddev_ratio = 0.0;
  double abs_err_vs_F = 0.0;
};

struct MatchingResults {
  std::vector<MatchingRow> rows;
  std::vector<MatchingSummary> summaries;
};

namespace detail {

struct HostSpec {
  std::size_t d = 0;  // regular degree
  std::size_t n = 0;  // vertex count
};

// One percolated instance of the configured family. Large complete hosts
// go through the direct G(n,p) sampler instead of materialising K_n.
inline SimpleGraph percolated_instance(const ExperimentConfig& cfg, const HostSpec& spec,
                                       double c, std::uint64_t seed) {
  double p = c / static_cast<double>(spec.d);
  if (cfg.family == "complete") {
    if (spec.n > 5000) return sample_gnp(spec.n, p, seed);
    HostGraph host = make_complete(spec.n);
    return percolate(host, p, seed).subgraph();
  }
  if (cfg.family == "hypercube") {
    HostGraph host = make_hypercube(spec.d);
    return percolate(host, p, seed).subgraph();
  }
  if (cfg.family == "clique-union") {
    HostGraph host = make_clique_union(cfg.k, spec.d);
    return percolate(host, p, seed).subgraph();
  }
  if (cfg.family == "random-regular") {
    HostGraph host = make_random_regular(spec.n, spec.d, hash_combine(seed, 0x686f7374ull));
    return percolate(host, p, seed).subgraph();
  }
  if (cfg.family == "custom") {
    HostGraph host = load_edge_list(cfg.edge_list, cfg.allow_irregular);
    double pp = c / static_cast<double>(host.degree());
    return percolate(host, pp, seed).subgraph();
  }
  throw ConfigError("unknown family: " + cfg.family);
}

inline std::vector<HostSpec> host_grid(const ExperimentConfig& cfg) {
  std::vector<HostSpec> specs;
  if (cfg.family == "complete") {
    for (std::size_t n : cfg.n_grid) specs.push_back({n - 1, n});
  } else if (cfg.family == "hypercube") {
    for (std::size_t d : cfg.d_grid) specs.push_back({d, std::size_t{1} << d});
  } else if (cfg.family == "clique-union") {
    for (std::size_t d : cfg.d_grid) specs.push_back({d, cfg.k * (d + 1)});
  } else if (cfg.family == "random-regular") {
    for (std::size_t d : cfg.d_grid)
      for (std::size_t n : cfg.n_grid) specs.push_back({d, n});
  } else if (cfg.family == "custom") {
    HostGraph host = load_edge_list(cfg.edge_list, cfg.allow_irregular);
    specs.push_back({host.degree(), host.num_vertices()});
  } else {
    throw ConfigError("unknown family: " + cfg.family);
  }
  if (specs.empty()) throw ConfigError("empty host grid");
  return specs;
}

}  // namespace detail

inline MatchingResults run_matching_convergence(const ExperimentConfig& cfg) {
  if (cfg.seeds < 1) throw ConfigError("match: seeds must be >= 1");
  MatchingResults res;
  MatchMode mode = cfg.mode == "heuristic" ? MatchMode::Heuristic : MatchMode::Exact;
  for (double c : cfg.c_grid) {
    double target = eval_F(c).F;
    for (const auto& spec : detail::host_grid(cfg)) {
      double sum = 0.0, sumsq = 0.0;
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        std::uint64_t seed =
            derive_seed(cfg.base_seed, spec.d, spec.n ^ static_cast<std::uint64_t>(c * 1e6), s);
        SimpleGraph g = detail::percolated_instance(cfg, spec, c, seed);
        MatchingNumber mn = matching_number(g, mode, seed);
        double ratio = static_cast<double>(mn.nu) / static_cast<double>(g.num_vertices());
        res.rows.push_back(
            {cfg.family, spec.d, spec.n, c, s, mn.nu, g.num_vertices(), ratio, mn.exact});
        sum += ratio;
        sumsq += ratio * ratio;
      }
      double mean = sum / static_cast<double>(cfg.seeds);
      double var = std::max(0.0, sumsq / static_cast<double>(cfg.seeds) - mean * mean);
      res.summaries.push_back(
          {cfg.family, spec.d, spec.n, c, mean, std::sqrt(var), std::abs(mean - target)});
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// local limit

struct LocalLimitRow {
  std::string family;
  std::size_t d = 0;
  double c = 0.0;
  std::size_t r = 0;
  std::size_t seed_index = 0;
  double tv = 0.0;
  double tv_tail_band = 0.0;
  double non_tree_mass = 0.0;
  double paper_bound = 0.0;
};

inline std::size_t default_delta_cap(std::size_t r) { return r <= 1 ? 100 : 6; }

inline std::vector<LocalLimitRow> run_local_limit(const ExperimentConfig& cfg) {
  if (cfg.r < 1) throw ConfigError("local-limit: r must be >= 1");
  std::vector<LocalLimitRow> rows;
  unsigned threads = cfg.effective_threads();
  for (double c : cfg.c_grid) {
    std::size_t cap = cfg.delta_cap ? cfg.delta_cap : default_delta_cap(cfg.r);
    GWMeasure gw = enumerate_gw_measure(c, cfg.r, cap);
    for (const auto& spec : detail::host_grid(cfg)) {
      double paper_bound =
          std::exp(-0.25 * std::pow(std::log(static_cast<double>(spec.d)),
                                    1.0 / (2.0 * static_cast<double>(cfg.r))));
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        std::uint64_t seed =
            derive_seed(cfg.base_seed, spec.d, spec.n ^ static_cast<std::uint64_t>(c * 1e6), s);
        SimpleGraph g = detail::percolated_instance(cfg, spec, c, seed);
        NeighborhoodMeasure emp = census(g, cfg.r, threads);
        TvResult tv = tv_distance(emp, gw);
        rows.push_back({cfg.family, spec.d, c, cfg.r, s, tv.value, tv.tail_band,
                        emp.non_tree_mass(), paper_bound});
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// binomial vs Poisson rate

struct BinPoRow {
  std::size_t d = 0;
  std::size_t d_prime = 0;
  double c = 0.0;
  double tv = 0.0;
  double tv_times_sqrt_d = 0.0;
};

inline std::vector<BinPoRow> run_binpo_rate(const ExperimentConfig& cfg) {
  if (cfg.d_grid.empty()) throw ConfigError("binpo: empty d grid");
  std::vector<BinPoRow> rows;
  for (double c : cfg.c_grid)
    for (std::size_t d : cfg.d_grid) {
      double p = c / static_cast<double>(d);
      std::size_t shrink = static_cast<std::size_t>(std::ceil(std::pow(d, 0.25)));
      for (std::size_t d_prime : {d, d > shrink ? d - shrink : 0}) {
        double tv = tv_bin_po(static_cast<std::int64_t>(d_prime), p, c);
        rows.push_back({d, d_prime, c, tv, tv * std::sqrt(static_cast<double>(d))});
      }
    }
  return rows;
}

// ---------------------------------------------------------------------------
// coupling failure rate

struct CouplingRow {
  std::string family;
  std::size_t d = 0;
  double c = 0.0;
  std::size_t r = 0;
  std::size_t trials = 0;
  std::size_t success = 0;
  std::size_t abort_degree_deficit = 0;
  std::size_t abort_offspring_mismatch = 0;
  std::size_t abort_degree_overflow = 0;
  std::size_t abort_cross_edge = 0;
  double failure_rate = 0.0;
  double paper_rate = 0.0;  // (log d)^r / sqrt(d)
};

namespace detail {

template <typename Host>
CouplingRow coupling_cell(const Host& host, const std::string& family, double c, std::size_t r,
                          std::size_t trials, std::uint64_t base_seed, std::size_t d) {
  CouplingRow row;
  row.family = family;
  row.d = d;
  row.c = c;
  row.r = r;
  row.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    CouplingReport rep = coupled_bfe(host, c, r, derive_seed(base_seed, d, 0xC0DE, t));
    switch (rep.outcome) {
      case CouplingOutcome::Success: ++row.success; break;
      case CouplingOutcome::AbortDegreeDeficit: ++row.abort_degree_deficit; break;
      case CouplingOutcome::AbortOffspringMismatch: ++row.abort_offspring_mismatch; break;
      case CouplingOutcome::AbortDegreeOverflow: ++row.abort_degree_overflow; break;
      case CouplingOutcome::AbortCrossEdge: ++row.abort_cross_edge; break;
    }
  }
  row.failure_rate =
      1.0 - static_cast<double>(row.success) / static_cast<double>(std::max<std::size_t>(trials, 1));
  row.paper_rate = std::pow(std::log(static_cast<double>(d)), static_cast<double>(r)) /
                   std::sqrt(static_cast<double>(d));
  return row;
}

}  // namespace detail

inline std::vector<CouplingRow> run_coupling_rate(const ExperimentConfig& cfg) {
  if (cfg.d_grid.empty()) throw ConfigError("coupling: empty d grid");
  std::vector<CouplingRow> rows;
  for (double c : cfg.c_grid)
    for (std::size_t d : cfg.d_grid) {
      std::uint64_t base = hash_combine(cfg.base_seed, static_cast<std::uint64_t>(c * 1e6));
      if (cfg.family == "hypercube") {
        // Vertex-transitive, so the exploration root is fixed; vertices are
        // addressed implicitly because 2^d does not fit in memory.
        ImplicitHypercube host{d};
        rows.push_back(detail::coupling_cell(host, cfg.family, c, cfg.r, cfg.trials, base, d));
      } else if (cfg.family == "clique-union") {
        ImplicitCliqueUnion host{d};
        rows.push_back(detail::coupling_cell(host, cfg.family, c, cfg.r, cfg.trials, base, d));
      } else if (cfg.family == "custom") {
        HostGraph host = load_edge_list(cfg.edge_list, false);
        CouplingRow row;
        row.family = cfg.family;
        row.d = host.degree();
        row.c = c;
        row.r = cfg.r;
        row.trials = cfg.trials;
        Rng roots(hash_combine(base, 0x726f6f74ull));
        for (std::size_t t = 0; t < cfg.trials; ++t) {
          Vertex u = static_cast<Vertex>(roots.below(host.num_vertices()));
          CouplingReport rep = coupled_bfe(host, u, c, cfg.r, derive_seed(base, row.d, 0xC0DE, t));
          switch (rep.outcome) {
            case CouplingOutcome::Success: ++row.success; break;
            case CouplingOutcome::AbortDegreeDeficit: ++row.abort_degree_deficit; break;
            case CouplingOutcome::AbortOffspringMismatch: ++row.abort_offspring_mismatch; break;
            case CouplingOutcome::AbortDegreeOverflow: ++row.abort_degree_overflow; break;
            case CouplingOutcome::AbortCrossEdge: ++row.abort_cross_edge; break;
          }
        }
        row.failure_rate = 1.0 - static_cast<double>(row.success) / static_cast<double>(cfg.trials);
        row.paper_rate = std::pow(std::log(static_cast<double>(row.d)), static_cast<double>(cfg.r)) /
                         std::sqrt(static_cast<double>(row.d));
        rows.push_back(row);
      } else {
        throw ConfigError("coupling: unsupported family " + cfg.family);
      }
    }
  return rows;
}

// ---------------------------------------------------------------------------
// concentration of N_{r,T}

struct ConcentrationRow {
  std::string family;
  std::size_t d = 0;
  double c = 0.0;
  std::size_t r = 0;
  std::string tree_code;
  double mean_count = 0.0;
  double stddev = 0.0;
  double mean_pow_23 = 0.0;
  double deviation_fraction = 0.0;  // seeds with |N - mean| >= mean^{2/3}
};

inline std::vector<ConcentrationRow> run_concentration(const ExperimentConfig& cfg,
                                                       std::size_t min_mean = 50) {
  if (cfg.seeds < 100) throw ConfigError("concentration: needs >= 100 seeds");
  std::vector<ConcentrationRow> rows;
  unsigned threads = cfg.effective_threads();
  for (double c : cfg.c_grid)
    for (const auto& spec : detail::host_grid(cfg)) {
      std::map<std::string, std::vector<std::uint64_t>> per_seed;  // tree class -> counts
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        std::uint64_t seed =
            derive_seed(cfg.base_seed, spec.d, spec.n ^ static_cast<std::uint64_t>(c * 1e6), s);
        SimpleGraph g = detail::percolated_instance(cfg, spec, c, seed);
        NeighborhoodMeasure emp = census(g, cfg.r, threads);
        for (const auto& [code, cc] : emp.counts) {
          if (!cc.is_tree) continue;
          auto& v = per_seed[code];
          v.resize(cfg.seeds, 0);
          v[s] = cc.count;
        }
      }
      for (auto& [code, counts] : per_seed) {
        counts.resize(cfg.seeds, 0);
        double sum = 0.0, sumsq = 0.0;
        for (std::uint64_t cnt : counts) {
          sum += static_cast<double>(cnt);
          sumsq += static_cast<double>(cnt) * static_cast<double>(cnt);
        }
        double mean = sum / static_cast<double>(cfg.seeds);
        if (mean < static_cast<double>(min_mean)) continue;
        double var = std::max(0.0, sumsq / static_cast<double>(cfg.seeds) - mean * mean);
        double threshold = std::pow(mean, 2.0 / 3.0);
        std::size_t deviating = 0;
        for (std::uint64_t cnt : counts)
          if (std::abs(static_cast<double>(cnt) - mean) >= threshold) ++deviating;
        rows.push_back({cfg.family, spec.d, c, cfg.r, code, mean, std::sqrt(var), threshold,
                        static_cast<double>(deviating) / static_cast<double>(cfg.seeds)});
      }
    }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV emission per experiment

inline void write_theory_csv(const ExperimentConfig& cfg, const std::vector<TheoryRow>& rows,
                             std::ostream& out, const std::string& timestamp) {
  CsvWriter w(cfg, "c,y,F,residual");
  for (const auto& r : rows) w.emit(r.c, r.y, r.F, r.residual);
  w.write(out, timestamp);
}

inline void write_matching_csv(const ExperimentConfig& cfg, const MatchingResults& res,
                               std::ostream& out, const std::string& timestamp) {
  CsvWriter w(cfg,
              "kind,family,d,n,c,seed,nu,n_vertices,ratio,exact,mean_ratio,stddev_ratio,"
              "abs_err_vs_F");
  for (const auto& r : res.rows)
    w.emit("row", r.family, r.d, r.n, r.c, r.seed_index, r.nu, r.n_vertices, r.ratio,
           r.exact ? 1 : 0, "", "", "");
  for (const auto& s : res.summaries)
    w.emit("summary", s.family, s.d, s.n, s.c, "", "", "", "", "", s.mean_ratio, s.stddev_ratio,
           s.abs_err_vs_F);
  w.write(out, timestamp);
}

inline void write_local_limit_csv(const ExperimentConfig& cfg,
                                  const std::vector<LocalLimitRow>& rows, std::ostream& out,
                                  const std::string& timestamp) {
  CsvWriter w(cfg, "family,d,c,r,seed,tv,tv_tail_band,non_tree_mass,paper_bound");
  for (const auto& r : rows)
    w.emit(r.family, r.d, r.c, r.r, r.seed_index, r.tv, r.tv_tail_band, r.non_tree_mass,
           r.paper_bound);
  w.write(out, timestamp);
}

inline void write_binpo_csv(const ExperimentConfig& cfg, const std::vector<BinPoRow>& rows,
                            std::ostream& out, const std::string& timestamp) {
  CsvWriter w(cfg, "d,d_prime,c,tv,tv_times_sqrt_d");
  for (const auto& r : rows) w.emit(r.d, r.d_prime, r.c, r.tv, r.tv_times_sqrt_d);
  w.write(out, timestamp);
}

inline void write_coupling_csv(const ExperimentConfig& cfg, const std::vector<CouplingRow>& rows,
                               std::ostream& out, const std::string& timestamp) {
  CsvWriter w(cfg,
              "family,d,c,r,trials,success,abort_degree_deficit,abort_offspring_mismatch,"
              "abort_degree_overflow,abort_cross_edge,failure_rate,paper_rate");
  for (const auto& r : rows)
    w.emit(r.family, r.d, r.c, r.r, r.trials, r.success, r.abort_degree_deficit,
           r.abort_offspring_mismatch, r.abort_degree_overflow, r.abort_cross_edge,
           r.failure_rate, r.paper_rate);
  w.write(out, timestamp);
}

inline void write_concentration_csv(const ExperimentConfig& cfg,
                                    const std::vector<ConcentrationRow>& rows, std::ostream& out,
                                    const std::string& timestamp) {
  CsvWriter w(cfg, "family,d,c,r,tree_code,mean_count,stddev,mean_pow_23,deviation_fraction");
  for (const auto& r : rows)
    w.emit(r.family, r.d, r.c, r.r, r.tree_code, r.mean_count, r.stddev, r.mean_pow_23,
           r.deviation_fraction);
  w.write(out, timestamp);
}

}  // namespace perlab
