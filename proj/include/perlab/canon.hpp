#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "perlab/common.hpp"
#include "perlab/graph.hpp"

namespace perlab {

// Canonical encoding of a rooted graph: two rooted graphs get equal codes
// iff they are isomorphic as rooted graphs. Trees use the AHU encoding;
// non-tree balls use an extremal adjacency string.
struct CanonCode {
  std::string code;
  bool is_tree = true;

  friend bool operator==(const CanonCode& a, const CanonCode& b) {
    return a.is_tree == b.is_tree && a.code == b.code;
  }
  friend auto operator<=>(const CanonCode& a, const CanonCode& b) {
    if (a.is_tree != b.is_tree) return a.is_tree <=> b.is_tree;
    return a.code <=> b.code;
  }
};

// Connected rooted graph on local vertex ids; the root is vertex 0.
struct RootedGraph {
  std::vector<std::vector<Vertex>> adj;

  RootedGraph() = default;
  explicit RootedGraph(std::size_t n) : adj(n) {}

  std::size_t num_vertices() const { return adj.size(); }
  std::size_t num_edges() const {
    std::size_t total = 0;
    for (const auto& nb : adj) total += nb.size();
    return total / 2;
  }
  void add_edge(Vertex u, Vertex v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
};

namespace detail {

// AHU code of the tree hanging at `v` away from `parent`:
// "(" + sorted child codes + ")".
inline std::string ahu_code(const RootedGraph& g, Vertex v, Vertex parent) {
  std::vector<std::string> child_codes;
  for (Vertex w : g.adj[v])
    if (w != parent) child_codes.push_back(ahu_code(g, w, v));
  std::sort(child_codes.begin(), child_codes.end());
  std::string code = "(";
  for (const auto& cc : child_codes) code += cc;
  code += ")";
  return code;
}

// Canonical labelling for small non-tree rooted graphs: the lexicographically
// greatest adjacency string over all vertex orderings fixing the root.
// Orderings are built greedily (best adjacency column first) with branching
// on ties; true twins are deduplicated so pendant clusters do not explode.
class NonTreeCanon {
 public:
  explicit NonTreeCanon(const RootedGraph& g) : n_(g.num_vertices()) {
    if (n_ > 64) throw SizeError("non-tree ball with more than 64 vertices");
    rows_.assign(n_, 0);
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : g.adj[u]) rows_[u] |= (1ull << v);
  }

  std::string run() {
    std::vector<Vertex> placed{0};
    std::vector<std::uint64_t> cols;
    search(placed, cols);
    std::string out;
    out.reserve(n_ * 17);
    char buf[24];
    for (std::uint64_t col : best_) {
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(col));
      out += buf;
    }
    return out;
  }

 private:
  // cols[i-1] = adjacency bits of placed[i] against placed[0..i-1], packed
  // with placed[0] at the most significant position. The code is the
  // column sequence of the prefix-wise maximal ordering.
  void search(std::vector<Vertex>& placed, std::vector<std::uint64_t>& cols) {
    std::size_t i = placed.size();
    if (i == n_) {
      if (best_.empty() || cols > best_) best_ = cols;
      return;
    }
    if (++nodes_ > 2'000'000) throw SizeError("non-tree canonicalisation budget exceeded");
    std::uint64_t placed_mask = 0;
    for (Vertex v : placed) placed_mask |= (1ull << v);
    std::uint64_t best_col = 0;
    std::vector<Vertex> candidates;
    for (Vertex c = 0; c < n_; ++c) {
      if (placed_mask & (1ull << c)) continue;
      std::uint64_t col = 0;
      for (std::size_t j = 0; j < i; ++j)
        col = (col << 1) | ((rows_[c] >> placed[j]) & 1ull);
      if (col < best_col) continue;
      if (col > best_col) {
        best_col = col;
        candidates.clear();
      }
      candidates.push_back(c);
    }
    // Twin dedup: candidates with identical neighbourhoods (ignoring each
    // other) are interchangeable.
    std::vector<Vertex> reps;
    for (Vertex c : candidates) {
      bool dup = false;
      for (Vertex r : reps) {
        std::uint64_t ignore = ~((1ull << c) | (1ull << r));
        if ((rows_[c] & ignore) == (rows_[r] & ignore)) {
          dup = true;
          break;
        }
      }
      if (!dup) reps.push_back(c);
    }
    for (Vertex c : reps) {
      placed.push_back(c);
      cols.push_back(best_col);
      search(placed, cols);
      cols.pop_back();
      placed.pop_back();
    }
  }

  std::size_t n_;
  std::size_t nodes_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint64_t> best_;
};

}  // namespace detail

// Canonical code of a connected rooted graph (root = vertex 0).
inline CanonCode canon_code(const RootedGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw DomainError("canon_code: empty graph");
  // Connectivity check.
  {
    std::vector<char> seen(n, 0);
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
    if (reached != n) throw DomainError("canon_code: rooted graph is disconnected");
  }
  if (g.num_edges() == n - 1)
    return {detail::ahu_code(g, 0, static_cast<Vertex>(-1)), true};
  detail::NonTreeCanon canon(g);
  return {"G" + std::to_string(n) + ":" + canon.run(), false};
}

}  // namespace perlab
