#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "perlab/common.hpp"
#include "perlab/graph.hpp"
#include "perlab/rng.hpp"

namespace perlab {

struct Matching {
  std::vector<Edge> edges;
  std::size_t size() const { return edges.size(); }
};

// True iff every edge of m is in g and no two edges share a vertex.
inline bool verify_matching(const SimpleGraph& g, const Matching& m) {
  std::vector<char> used(g.num_vertices(), 0);
  for (const auto& [u, v] : m.edges) {
    if (u >= g.num_vertices() || v >= g.num_vertices()) return false;
    if (!g.has_edge(u, v)) return false;
    if (used[u] || used[v]) return false;
    used[u] = used[v] = 1;
  }
  return true;
}

struct KSReduction {
  std::vector<Edge> forced_edges;    // matched leaf edges, removal order
  SimpleGraph core;                  // residual graph, min degree >= 2 (or empty)
  std::vector<Vertex> core_to_orig;  // core vertex -> original vertex id
  std::size_t removed_isolated = 0;
};

// Leaf removal: repeatedly match a degree-1 vertex to its unique neighbour
// and delete both. nu(g) = |forced_edges| + nu(core). Leaves are processed
// FIFO; initial leaves enter in ascending vertex id.
inline KSReduction karp_sipser_reduce(const SimpleGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> deg(n);
  std::vector<char> alive(n, 1);
  std::deque<Vertex> leaves;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = static_cast<std::uint32_t>(g.adj[v].size());
    if (deg[v] == 1) leaves.push_back(v);
  }
  KSReduction red;
  auto remove_vertex = [&](Vertex v) {
    alive[v] = 0;
    for (Vertex w : g.adj[v]) {
      if (!alive[w]) continue;
      if (--deg[w] == 1) leaves.push_back(w);
    }
  };
  while (!leaves.empty()) {
    Vertex v = leaves.front();
    leaves.pop_front();
    if (!alive[v] || deg[v] != 1) continue;
    Vertex mate = v;
    for (Vertex w : g.adj[v])
      if (alive[w]) {
        mate = w;
        break;
      }
    red.forced_edges.emplace_back(std::min(v, mate), std::max(v, mate));
    alive[v] = 0;
    remove_vertex(mate);
  }
  // Residual: alive vertices of degree >= 2 form the core; degree-0
  // survivors are discarded as isolated.
  std::vector<Vertex> orig_to_core(n, static_cast<Vertex>(-1));
  for (Vertex v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    if (deg[v] == 0) {
      ++red.removed_isolated;
      continue;
    }
    orig_to_core[v] = static_cast<Vertex>(red.core_to_orig.size());
    red.core_to_orig.push_back(v);
  }
  red.core = SimpleGraph(red.core_to_orig.size());
  for (Vertex v : red.core_to_orig)
    for (Vertex w : g.adj[v])
      if (alive[w] && deg[w] >= 2 && v < w) red.core.add_edge(orig_to_core[v], orig_to_core[w]);
  red.core.sort_adjacency();
  return red;
}

namespace detail {

// Augmenting-path maximum matching with blossom contraction (O(V*E) per
// augmentation). Percolated graphs at p=c/d have O(n) edges, so this is
// fine at desk scale.
class Blossom {
 public:
  explicit Blossom(const SimpleGraph& g)
      : g_(g), n_(g.num_vertices()), match_(n_, kNone), parent_(n_), base_(n_) {}

  std::vector<Vertex> solve() {
    greedy_init();
    for (Vertex v = 0; v < n_; ++v)
      if (match_[v] == kNone) find_augmenting_path(v);
    return match_;
  }

  static constexpr Vertex kNone = static_cast<Vertex>(-1);

 private:
  void greedy_init() {
    for (Vertex v = 0; v < n_; ++v) {
      if (match_[v] != kNone) continue;
      for (Vertex w : g_.adj[v])
        if (match_[w] == kNone) {
          match_[v] = w;
          match_[w] = v;
          break;
        }
    }
  }

  Vertex lowest_common_ancestor(Vertex a, Vertex b) {
    std::vector<char> seen(n_, 0);
    for (;;) {
      a = base_[a];
      seen[a] = 1;
      if (match_[a] == kNone) break;
      a = parent_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(std::vector<char>& in_blossom, Vertex v, Vertex root, Vertex child) {
    while (base_[v] != root) {
      in_blossom[base_[v]] = 1;
      in_blossom[base_[match_[v]]] = 1;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  void contract(std::deque<Vertex>& queue, std::vector<char>& in_queue, Vertex a, Vertex b) {
    Vertex root = lowest_common_ancestor(a, b);
    std::vector<char> in_blossom(n_, 0);
    mark_path(in_blossom, a, root, b);
    mark_path(in_blossom, b, root, a);
    for (Vertex v = 0; v < n_; ++v)
      if (in_blossom[base_[v]]) {
        base_[v] = root;
        if (!in_queue[v]) {
          in_queue[v] = 1;
          queue.push_back(v);
        }
      }
  }

  void find_augmenting_path(Vertex root) {
    std::fill(parent_.begin(), parent_.end(), kNone);
    for (Vertex v = 0; v < n_; ++v) base_[v] = v;
    std::vector<char> in_queue(n_, 0);
    std::deque<Vertex> queue{root};
    in_queue[root] = 1;
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (Vertex w : g_.adj[v]) {
        if (base_[v] == base_[w] || match_[v] == w) continue;
        if (w == root || (match_[w] != kNone && parent_[match_[w]] != kNone)) {
          contract(queue, in_queue, v, w);
        } else if (parent_[w] == kNone) {
          parent_[w] = v;
          if (match_[w] == kNone) {
            augment(w);
            return;
          }
          if (!in_queue[match_[w]]) {
            in_queue[match_[w]] = 1;
            queue.push_back(match_[w]);
          }
        }
      }
    }
  }

  void augment(Vertex w) {
    while (w != kNone) {
      Vertex pv = parent_[w];
      Vertex next = match_[pv];
      match_[w] = pv;
      match_[pv] = w;
      w = next;
    }
  }

  const SimpleGraph& g_;
  std::size_t n_;
  std::vector<Vertex> match_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> base_;
};

}  // namespace detail

inline constexpr std::size_t kBlossomVertexCap = 1'000'000;

inline Matching max_matching_blossom(const SimpleGraph& g,
                                     std::size_t vertex_cap = kBlossomVertexCap) {
  if (g.num_vertices() > vertex_cap)
    throw SizeError("graph exceeds the exact-matching vertex cap; use heuristic mode");
  detail::Blossom solver(g);
  std::vector<Vertex> match = solver.solve();
  Matching m;
  for (Vertex v = 0; v < match.size(); ++v)
    if (match[v] != detail::Blossom::kNone && v < match[v])
      m.edges.emplace_back(v, match[v]);
  return m;
}

enum class MatchMode { Exact, Heuristic };

struct MatchingNumber {
  std::size_t nu = 0;
  bool exact = false;
};

namespace detail {

// Full Karp-Sipser: leaf phase as in the reduction; when no leaf exists,
// match a uniformly random surviving edge and delete both endpoints.
inline std::size_t karp_sipser_heuristic(const SimpleGraph& g, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> deg(n);
  std::vector<char> alive(n, 1);
  std::deque<Vertex> leaves;
  std::vector<Edge> pool = g.edge_list();
  std::size_t alive_edges = pool.size();
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = static_cast<std::uint32_t>(g.adj[v].size());
    if (deg[v] == 1) leaves.push_back(v);
  }
  Rng rng(hash_combine(seed, 0x4b61'7270'5369'7073ull));
  std::size_t matched = 0;
  std::size_t remaining_deg_sum = 2 * pool.size();
  auto remove_vertex = [&](Vertex v) {
    alive[v] = 0;
    for (Vertex w : g.adj[v]) {
      if (!alive[w]) continue;
      --deg[w];
      --alive_edges;
      remaining_deg_sum -= 2;
      if (deg[w] == 1) leaves.push_back(w);
    }
  };
  while (alive_edges > 0) {
    bool took_leaf = false;
    while (!leaves.empty()) {
      Vertex v = leaves.front();
      leaves.pop_front();
      if (!alive[v] || deg[v] != 1) continue;
      Vertex mate = v;
      for (Vertex w : g.adj[v])
        if (alive[w]) {
          mate = w;
          break;
        }
      alive[v] = 0;
      --alive_edges;
      remaining_deg_sum -= 2;
      remove_vertex(mate);
      ++matched;
      took_leaf = true;
      break;
    }
    if (took_leaf) continue;
    if (alive_edges == 0) break;
    // Uniform over surviving edges; an edge survives iff both endpoints do.
    // Compact the pool when mostly dead to keep rejection cheap.
    if (alive_edges * 2 < pool.size()) {
      std::vector<Edge> compacted;
      compacted.reserve(alive_edges);
      for (const auto& e : pool)
        if (alive[e.first] && alive[e.second]) compacted.push_back(e);
      pool.swap(compacted);
    }
    for (;;) {
      const Edge& e = pool[rng.below(pool.size())];
      if (!alive[e.first] || !alive[e.second]) continue;
      Vertex u = e.first, v = e.second;
      alive[u] = 0;
      --alive_edges;
      remaining_deg_sum -= 2;
      for (Vertex w : g.adj[u]) {
        if (!alive[w] || w == v) continue;
        --deg[w];
        --alive_edges;
        remaining_deg_sum -= 2;
        if (deg[w] == 1) leaves.push_back(w);
      }
      remove_vertex(v);
      ++matched;
      break;
    }
  }
  (void)remaining_deg_sum;
  return matched;
}

}  // namespace detail

inline MatchingNumber matching_number(const SimpleGraph& g, MatchMode mode,
                                      std::uint64_t seed = 0,
                                      std::size_t vertex_cap = kBlossomVertexCap) {
  if (mode == MatchMode::Heuristic)
    return {detail::karp_sipser_heuristic(g, seed), false};
  KSReduction red = karp_sipser_reduce(g);
  Matching core_matching = max_matching_blossom(red.core, vertex_cap);
  return {red.forced_edges.size() + core_matching.size(), true};
}

}  // namespace perlab
