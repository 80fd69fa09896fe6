#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "perlab/common.hpp"
#include "perlab/rng.hpp"

namespace perlab {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;  // always stored with first < second

// Plain adjacency-list graph; the common "graph view" consumed by matching
// and census.
struct SimpleGraph {
  std::vector<std::vector<Vertex>> adj;

  SimpleGraph() = default;
  explicit SimpleGraph(std::size_t n) : adj(n) {}

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

  bool has_edge(Vertex u, Vertex v) const {
    const auto& nb = adj[u].size() <= adj[v].size() ? adj[u] : adj[v];
    Vertex other = adj[u].size() <= adj[v].size() ? v : u;
    return std::find(nb.begin(), nb.end(), other) != nb.end();
  }

  void sort_adjacency() {
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  }

  std::vector<Edge> edge_list() const {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < adj.size(); ++u)
      for (Vertex v : adj[u])
        if (u < v) edges.emplace_back(u, v);
    std::sort(edges.begin(), edges.end());
    return edges;
  }
};

enum class Family { Hypercube, Complete, RandomRegular, Torus, CliqueUnion, Custom };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Hypercube: return "hypercube";
    case Family::Complete: return "complete";
    case Family::RandomRegular: return "random-regular";
    case Family::Torus: return "torus";
    case Family::CliqueUnion: return "clique-union";
    case Family::Custom: return "custom";
  }
  return "?";
}

// Immutable d-regular host graph. Edges are indexed lexicographically by
// (min endpoint, max endpoint); that index keys the percolation PRNG.
class HostGraph {
 public:
  HostGraph(std::size_t n, std::size_t d, Family family, std::vector<Edge> edges,
            bool require_regular = true)
      : n_(n), d_(d), family_(family), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    adj_.assign(n_, {});
    for (const auto& [u, v] : edges_) {
      if (u >= n_ || v >= n_ || u == v)
        throw DomainError("host edge endpoints out of range or loop");
      adj_[u].push_back(static_cast<Vertex>(v));
      adj_[v].push_back(static_cast<Vertex>(u));
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    for (std::size_t v = 0; v < n_; ++v) {
      if (std::adjacent_find(adj_[v].begin(), adj_[v].end()) != adj_[v].end())
        throw DomainError("host graph has a multi-edge");
      if (require_regular && adj_[v].size() != d_)
        throw DomainError("host graph is not " + std::to_string(d_) + "-regular");
    }
    regular_ = true;
    for (std::size_t v = 0; v < n_; ++v)
      if (adj_[v].size() != d_) regular_ = false;
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t degree() const { return d_; }
  std::size_t num_edges() const { return edges_.size(); }
  Family family() const { return family_; }
  bool regular() const { return regular_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_[index]; }

 private:
  std::size_t n_;
  std::size_t d_;
  Family family_;
  bool regular_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
};

// Edge-subset view over a host graph. Identical (host, p, seed) triples
// reproduce identical bitsets, regardless of thread count, because each
// edge's coin is keyed by (seed, edge index) alone.
class PercolatedGraph {
 public:
  PercolatedGraph(const HostGraph& host, double p, std::uint64_t seed)
      : host_(&host), p_(p), seed_(seed), retained_((host.num_edges() + 63) / 64, 0) {
    if (p < 0.0 || p > 1.0) throw DomainError("retention probability outside [0,1]");
    for (std::size_t i = 0; i < host.num_edges(); ++i)
      if (keyed_u01(seed, i) < p) retained_[i >> 6] |= (1ull << (i & 63));
  }

  const HostGraph& host() const { return *host_; }
  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }

  bool retained(std::size_t edge_index) const {
    return (retained_[edge_index >> 6] >> (edge_index & 63)) & 1u;
  }

  std::size_t retained_count() const {
    std::size_t total = 0;
    for (std::uint64_t word : retained_) total += static_cast<std::size_t>(__builtin_popcountll(word));
    return total;
  }

  const std::vector<std::uint64_t>& bitset() const { return retained_; }

  SimpleGraph subgraph() const {
    SimpleGraph g(host_->num_vertices());
    const auto& edges = host_->edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (retained(i)) g.add_edge(edges[i].first, edges[i].second);
    g.sort_adjacency();
    return g;
  }

 private:
  const HostGraph* host_;
  double p_;
  std::uint64_t seed_;
  std::vector<std::uint64_t> retained_;
};

inline HostGraph make_hypercube(std::size_t d) {
  if (d < 1 || d > 30) throw SizeError("hypercube dimension must be in [1,30]");
  std::size_t n = std::size_t{1} << d;
  if (d > 24) throw SizeError("hypercube dimension above 24 exceeds the memory guard");
  std::vector<Edge> edges;
  edges.reserve(n * d / 2);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t bit = 0; bit < d; ++bit) {
      std::size_t v = u ^ (std::size_t{1} << bit);
      if (u < v) edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
  return HostGraph(n, d, Family::Hypercube, std::move(edges));
}

inline HostGraph make_complete(std::size_t n) {
  if (n < 2) throw SizeError("complete graph needs at least 2 vertices");
  if (n > 14142)
    throw SizeError(
        "explicit K_n capped at n=14142 (~10^8 edges); use the implicit G(n,p) "
        "sampler for larger n");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  return HostGraph(n, n - 1, Family::Complete, std::move(edges));
}

inline HostGraph make_clique_union(std::size_t k, std::size_t d) {
  if (k < 1 || d < 1) throw SizeError("clique union needs k >= 1 and d >= 1");
  std::size_t block = d + 1;
  std::size_t n = k * block;
  if (n * d / 2 > std::size_t{200'000'000}) throw SizeError("clique union exceeds the edge-count guard");
  std::vector<Edge> edges;
  edges.reserve(k * block * d / 2);
  for (std::size_t b = 0; b < k; ++b) {
    std::size_t base = b * block;
    for (std::size_t i = 0; i < block; ++i)
      for (std::size_t j = i + 1; j < block; ++j)
        edges.emplace_back(static_cast<Vertex>(base + i), static_cast<Vertex>(base + j));
  }
  return HostGraph(n, d, Family::CliqueUnion, std::move(edges));
}

// Configuration-model pairing. Individual stub pairs that would create a
// loop or multi-edge are redrawn; if the pairing gets stuck, the whole
// attempt restarts (up to 500 restarts). Uniform-ish for d = o(sqrt(n)).
inline HostGraph make_random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n * d % 2 != 0) throw ParityError("n*d must be even for a d-regular graph");
  if (d >= n) throw SizeError("need d < n");
  constexpr int kRestartCap = 500;
  Rng rng(hash_combine(seed, 0x5261'6e64'5265'6775ull));
  for (int attempt = 0; attempt < kRestartCap; ++attempt) {
    std::vector<Vertex> stubs;
    stubs.reserve(n * d);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < d; ++i) stubs.push_back(static_cast<Vertex>(v));
    std::vector<std::vector<Vertex>> adj(n);
    std::vector<Edge> edges;
    edges.reserve(n * d / 2);
    bool stuck = false;
    std::size_t live = stubs.size();
    while (live > 0 && !stuck) {
      // Draw the first stub uniformly, then redraw partners on conflicts.
      std::size_t i = static_cast<std::size_t>(rng.below(live));
      std::swap(stubs[i], stubs[live - 1]);
      Vertex u = stubs[live - 1];
      --live;
      if (live == 0) {
        stuck = true;
        break;
      }
      bool paired = false;
      for (int redraw = 0; redraw < 200 && !paired; ++redraw) {
        std::size_t j = static_cast<std::size_t>(rng.below(live));
        Vertex v = stubs[j];
        if (v == u) continue;
        if (std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end()) continue;
        std::swap(stubs[j], stubs[live - 1]);
        --live;
        adj[u].push_back(v);
        adj[v].push_back(u);
        edges.emplace_back(std::min(u, v), std::max(u, v));
        paired = true;
      }
      if (!paired) stuck = true;
    }
    if (!stuck) return HostGraph(n, d, Family::RandomRegular, std::move(edges));
  }
  throw GenerationError("configuration-model pairing exceeded 500 restarts (d too close to n?)");
}

inline PercolatedGraph percolate(const HostGraph& host, double p, std::uint64_t seed) {
  return PercolatedGraph(host, p, seed);
}

// Direct G(n,p) sampler via geometric skipping over lexicographic edge
// indices. Used when the complete host is too large to materialise; the
// skip sequence is fully determined by the seed.
inline SimpleGraph sample_gnp(std::size_t n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw DomainError("retention probability outside [0,1]");
  SimpleGraph g(n);
  if (p <= 0.0 || n < 2) return g;
  const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  if (p >= 1.0) {
    if (total > 2e8) throw SizeError("p=1 on a complete host this large exceeds the edge guard");
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
  }
  const double log1mp = std::log1p(-p);
  double index = -1.0;
  std::uint64_t counter = 0;
  for (;;) {
    double u01 = keyed_u01(seed, counter++);
    // Gap >= 1 between successive retained edge indices.
    double gap = std::floor(std::log1p(-u01) / log1mp) + 1.0;
    index += gap;
    if (index >= total) break;
    // Decode lexicographic index -> (u, v) with u < v.
    std::size_t idx = static_cast<std::size_t>(index);
    // Row u satisfies idx < cumulative(u+1) where cumulative(u) = u*n - u(u+1)/2.
    std::size_t lo = 0, hi = n - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      std::size_t cum = (mid + 1) * n - (mid + 1) * (mid + 2) / 2;
      if (idx < cum) hi = mid; else lo = mid + 1;
    }
    std::size_t u = lo;
    std::size_t before = u * n - u * (u + 1) / 2;
    std::size_t v = u + 1 + (idx - before);
    g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  g.sort_adjacency();
  return g;
}

// Edge-list loader for Custom hosts: "u v" per line, 0-indexed, '#' comments.
inline HostGraph load_edge_list(const std::string& path, bool allow_irregular = false) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge-list file: " + path);
  std::vector<Edge> edges;
  std::size_t max_v = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;  // blank or comment-only line
    if (!(ls >> v)) throw ConfigError("malformed edge on line " + std::to_string(lineno));
    if (u < 0 || v < 0 || u == v)
      throw ConfigError("invalid endpoints on line " + std::to_string(lineno));
    edges.emplace_back(static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v)));
    max_v = std::max(max_v, static_cast<std::size_t>(std::max(u, v)));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::size_t n = edges.empty() ? 0 : max_v + 1;
  std::vector<std::size_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  std::size_t d = n ? deg[0] : 0;
  bool regular = true;
  for (std::size_t v = 0; v < n; ++v)
    if (deg[v] != d) regular = false;
  if (!regular && !allow_irregular)
    throw ConfigError("edge-list graph is not regular (pass --allow-irregular to accept)");
  if (!regular) d = *std::max_element(deg.begin(), deg.end());
  return HostGraph(n, d, Family::Custom, std::move(edges), /*require_regular=*/false);
}

}  // namespace perlab
