#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "perlab/analytic.hpp"
#include "perlab/common.hpp"
#include "perlab/graph.hpp"
#include "perlab/gwtree.hpp"
#include "perlab/rng.hpp"

namespace perlab {

enum class CouplingOutcome {
  Success,
  AbortDegreeDeficit,     // available neighbours < d - d^{1/4}
  AbortOffspringMismatch, // coupled Bin / Po draws differ
  AbortDegreeOverflow,    // offspring >= 4 log d
  AbortCrossEdge,         // retained edge between co-active vertices
};

inline const char* outcome_name(CouplingOutcome o) {
  switch (o) {
    case CouplingOutcome::Success: return "success";
    case CouplingOutcome::AbortDegreeDeficit: return "abort_degree_deficit";
    case CouplingOutcome::AbortOffspringMismatch: return "abort_offspring_mismatch";
    case CouplingOutcome::AbortDegreeOverflow: return "abort_degree_overflow";
    case CouplingOutcome::AbortCrossEdge: return "abort_cross_edge";
  }
  return "?";
}

struct CouplingReport {
  std::size_t steps_completed = 0;
  CouplingOutcome outcome = CouplingOutcome::Success;
  bool ball_isomorphic = false;
  // On Success both sides realise the same tree; `tree` is the coupled GW
  // ball and `revealed` the retained subgraph found on the graph side
  // (local ids, root 0), for independent rechecking.
  RootedTree tree;
  SimpleGraph revealed;
};

namespace detail {

// Quantile coupling of Bin(d',p) and Po(c): one uniform draw, both inverse
// CDFs. The two laws are close and single-crossing here, so this realises
// the total-variation-optimal coupling.
struct QuantilePair {
  std::int64_t bin = 0;
  std::int64_t po = 0;
};

inline QuantilePair coupled_offspring(std::int64_t d_prime, double p, double c, double u01) {
  QuantilePair out;
  {
    double cdf = 0.0;
    std::int64_t k = 0;
    for (;; ++k) {
      cdf += std::exp(log_binom_pmf(d_prime, p, k));
      if (cdf > u01 || k >= d_prime) break;
    }
    out.bin = k;
  }
  {
    double cdf = 0.0;
    std::int64_t k = 0;
    for (;; ++k) {
      cdf += std::exp(log_poisson_pmf(c, k));
      if (cdf > u01 || k > d_prime + 1000) break;
    }
    out.po = k;
  }
  return out;
}

}  // namespace detail

// Host adapters. coupled_bfe only needs the regular degree and a neighbour
// oracle, so hosts whose vertex set is too large to materialise (Q^d for
// large d) plug in implicitly.
struct ExplicitHost {
  const HostGraph* host;
  using VertexT = Vertex;
  std::size_t degree() const { return host->degree(); }
  Vertex root() const { return 0; }
  void neighbors(Vertex v, std::vector<Vertex>& out) const {
    out.assign(host->neighbors(v).begin(), host->neighbors(v).end());
  }
  static std::uint64_t key(Vertex v) { return v; }
};

// Q^d with vertices addressed relative to the exploration root: a vertex is
// the sorted set of flipped coordinates.
struct ImplicitHypercube {
  std::size_t d;
  using VertexT = std::vector<std::uint16_t>;
  std::size_t degree() const { return d; }
  VertexT root() const { return {}; }
  void neighbors(const VertexT& v, std::vector<VertexT>& out) const {
    out.clear();
    out.reserve(d);
    for (std::uint16_t coord = 0; coord < d; ++coord) {
      VertexT w = v;
      auto it = std::lower_bound(w.begin(), w.end(), coord);
      if (it != w.end() && *it == coord)
        w.erase(it);
      else
        w.insert(it, coord);
      out.push_back(std::move(w));
    }
  }
  static std::uint64_t key(const VertexT& v) {
    std::uint64_t h = 0x4879'7063'7562'6531ull;
    for (std::uint16_t coord : v) h = hash_combine(h, coord + 1);
    return h;
  }
};

// A single K_{d+1} block; the exploration never leaves the root's clique.
struct ImplicitCliqueUnion {
  std::size_t d;
  using VertexT = std::uint32_t;
  std::size_t degree() const { return d; }
  VertexT root() const { return 0; }
  void neighbors(VertexT v, std::vector<VertexT>& out) const {
    out.clear();
    out.reserve(d);
    for (std::uint32_t w = 0; w <= d; ++w)
      if (w != v) out.push_back(w);
  }
  static std::uint64_t key(VertexT v) { return v; }
};

// The paper's parallel breadth-first exploration of (G_{d,p}, u) and
// (GW_c, o). Same-level edges are not revealed during exploration; they are
// examined only at the final cross-edge stage, over pairs of vertices whose
// active intervals overlapped.
template <typename Host>
CouplingReport coupled_bfe(const Host& host, double c, std::size_t r, std::uint64_t seed) {
  CouplingReport rep;
  const std::size_t d = host.degree();
  const double p = c / static_cast<double>(d);
  const double deficit_threshold = static_cast<double>(d) - std::pow(static_cast<double>(d), 0.25);
  const double overflow_threshold = 4.0 * std::log(static_cast<double>(d));
  Rng rng(hash_combine(seed, 0x4266'6543'6f75'706cull));

  struct Discovered {
    typename Host::VertexT vert;
    std::size_t depth;
    std::size_t enq_step;              // step index at discovery
    std::size_t deq_step = SIZE_MAX;   // step index when processed (never, for depth-r)
  };
  std::vector<Discovered> nodes;
  std::unordered_map<std::uint64_t, std::uint32_t> index;  // Host::key -> local id
  auto push_node = [&](typename Host::VertexT v, std::size_t depth, std::size_t step) {
    index.emplace(Host::key(v), static_cast<std::uint32_t>(nodes.size()));
    nodes.push_back({std::move(v), depth, step});
  };
  push_node(host.root(), 0, 0);
  rep.tree = RootedTree{};
  rep.revealed = SimpleGraph(1);

  std::size_t head = 0;
  std::size_t step = 0;
  std::vector<typename Host::VertexT> nbrs;
  while (head < nodes.size() && nodes[head].depth < r) {
    ++step;
    std::uint32_t v = static_cast<std::uint32_t>(head);
    nodes[v].deq_step = step;
    host.neighbors(nodes[v].vert, nbrs);
    // Unexplored neighbours of v (paper's U); already-discovered vertices
    // are active or passive and their edges stay unrevealed for now.
    std::vector<typename Host::VertexT> unexplored;
    unexplored.reserve(nbrs.size());
    for (auto& w : nbrs)
      if (!index.count(Host::key(w))) unexplored.push_back(std::move(w));
    const std::int64_t d_prime = static_cast<std::int64_t>(unexplored.size());
    rep.steps_completed = step;
    if (static_cast<double>(d_prime) < deficit_threshold) {
      rep.outcome = CouplingOutcome::AbortDegreeDeficit;
      return rep;
    }
    auto pair = detail::coupled_offspring(d_prime, p, c, rng.u01());
    if (pair.bin != pair.po) {
      rep.outcome = CouplingOutcome::AbortOffspringMismatch;
      return rep;
    }
    const std::size_t offspring = static_cast<std::size_t>(pair.bin);
    if (static_cast<double>(offspring) >= overflow_threshold) {
      rep.outcome = CouplingOutcome::AbortDegreeOverflow;
      return rep;
    }
    // The retained edges out of v are a uniform size-`offspring` subset of
    // the unexplored neighbours (Bernoulli draws conditioned on their sum);
    // the rest are revealed as absent.
    rng.choose_prefix(unexplored, offspring);
    for (std::size_t i = 0; i < offspring; ++i) {
      std::uint32_t child = static_cast<std::uint32_t>(nodes.size());
      push_node(std::move(unexplored[i]), nodes[v].depth + 1, step);
      rep.tree.add_child(v);
      rep.revealed.adj.emplace_back();
      rep.revealed.add_edge(v, child);
    }
    ++head;
  }

  // Cross-edge stage: host edges between co-active vertices were never
  // revealed; draw them now.
  for (std::uint32_t a = 0; a < nodes.size(); ++a) {
    host.neighbors(nodes[a].vert, nbrs);
    for (const auto& w : nbrs) {
      auto it = index.find(Host::key(w));
      if (it == index.end() || it->second <= a) continue;
      std::uint32_t b = it->second;
      bool co_active = nodes[a].enq_step < nodes[b].deq_step && nodes[b].enq_step < nodes[a].deq_step;
      if (!co_active) continue;
      if (rng.bernoulli(p)) {
        rep.outcome = CouplingOutcome::AbortCrossEdge;
        return rep;
      }
    }
  }
  rep.outcome = CouplingOutcome::Success;
  rep.ball_isomorphic = true;
  return rep;
}

inline CouplingReport coupled_bfe(const HostGraph& host, Vertex u, double c, std::size_t r,
                                  std::uint64_t seed) {
  struct RootedExplicit : ExplicitHost {
    Vertex u;
    Vertex root() const { return u; }
  };
  RootedExplicit h;
  h.host = &host;
  h.u = u;
  if (!host.regular()) throw DomainError("coupled_bfe requires a regular host");
  return coupled_bfe<RootedExplicit>(h, c, r, seed);
}

}  // namespace perlab
