#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "perlab/canon.hpp"
#include "perlab/common.hpp"
#include "perlab/graph.hpp"
#include "perlab/gwtree.hpp"

namespace perlab {

// Empirical distribution of radius-r ball classes over the vertices of a
// percolated graph.
struct NeighborhoodMeasure {
  struct ClassCount {
    std::uint64_t count = 0;
    bool is_tree = true;
  };

  std::size_t r = 0;
  std::uint64_t n = 0;
  std::map<std::string, ClassCount> counts;

  double non_tree_mass() const {
    std::uint64_t nt = 0;
    for (const auto& [code, cc] : counts)
      if (!cc.is_tree) nt += cc.count;
    return n ? static_cast<double>(nt) / static_cast<double>(n) : 0.0;
  }

  std::uint64_t count_of(const std::string& code) const {
    auto it = counts.find(code);
    return it == counts.end() ? 0 : it->second.count;
  }

  void write_csv(std::ostream& out) const {
    out << "canon_code,is_tree,count,probability\n";
    out.precision(17);
    for (const auto& [code, cc] : counts)
      out << code << "," << (cc.is_tree ? 1 : 0) << "," << cc.count << ","
          << static_cast<double>(cc.count) / static_cast<double>(n) << "\n";
  }
};

// Induced ball of radius r around v: BFS vertices, then every retained edge
// with both endpoints inside (including same-depth edges). Root is local
// vertex 0.
inline RootedGraph ball(const SimpleGraph& g, Vertex v, std::size_t r) {
  if (v >= g.num_vertices()) throw DomainError("ball: root out of range");
  std::vector<Vertex> order{v};
  std::vector<std::size_t> depth{0};
  std::map<Vertex, Vertex> local;  // graph id -> local id
  local.emplace(v, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (depth[i] == r) continue;
    for (Vertex w : g.adj[order[i]]) {
      if (local.count(w)) continue;
      local.emplace(w, static_cast<Vertex>(order.size()));
      order.push_back(w);
      depth.push_back(depth[i] + 1);
    }
  }
  RootedGraph b(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Vertex w : g.adj[order[i]]) {
      auto it = local.find(w);
      if (it != local.end() && static_cast<Vertex>(i) < it->second)
        b.add_edge(static_cast<Vertex>(i), it->second);
    }
  return b;
}

namespace detail {

inline void census_range(const SimpleGraph& g, std::size_t r, Vertex from, Vertex to,
                         std::map<std::string, NeighborhoodMeasure::ClassCount>& counts) {
  for (Vertex v = from; v < to; ++v) {
    CanonCode code = canon_code(ball(g, v, r));
    auto& slot = counts[code.code];
    ++slot.count;
    slot.is_tree = code.is_tree;
  }
}

}  // namespace detail

// Classify every vertex's ball. Counting is integer and class-keyed, so the
// merged result is independent of the range split.
inline NeighborhoodMeasure census(const SimpleGraph& g, std::size_t r, unsigned threads = 1) {
  NeighborhoodMeasure m;
  m.r = r;
  m.n = g.num_vertices();
  const Vertex n = static_cast<Vertex>(g.num_vertices());
  if (threads <= 1 || n < 1024) {
    detail::census_range(g, r, 0, n, m.counts);
    return m;
  }
  unsigned workers = std::min<unsigned>(threads, std::max<unsigned>(1, n / 512));
  std::vector<std::future<std::map<std::string, NeighborhoodMeasure::ClassCount>>> parts;
  for (unsigned w = 0; w < workers; ++w) {
    Vertex from = static_cast<Vertex>(std::uint64_t{n} * w / workers);
    Vertex to = static_cast<Vertex>(std::uint64_t{n} * (w + 1) / workers);
    parts.push_back(std::async(std::launch::async, [&g, r, from, to]() {
      std::map<std::string, NeighborhoodMeasure::ClassCount> counts;
      detail::census_range(g, r, from, to, counts);
      return counts;
    }));
  }
  for (auto& part : parts)
    for (const auto& [code, cc] : part.get()) {
      auto& slot = m.counts[code];
      slot.count += cc.count;
      slot.is_tree = cc.is_tree;
    }
  return m;
}

inline std::uint64_t count_tree(const NeighborhoodMeasure& m, const RootedTree& t,
                                std::size_t r) {
  if (t.height() > r) throw DomainError("count_tree: tree height exceeds radius");
  return m.count_of(tree_canon(t).code);
}

inline std::uint64_t count_tree(const SimpleGraph& g, const RootedTree& t, std::size_t r) {
  return count_tree(census(g, r), t, r);
}

struct TvResult {
  double value = 0.0;      // point value (gw tail counted on the gw side)
  double tail_band = 0.0;  // the true TV lies within +- tail_band of value
};

// Half L1 distance over the union of classes. Empirical classes unknown to
// the enumeration (non-tree balls, trees beyond the degree cap) contribute
// their full empirical mass; unobserved enumerated classes contribute their
// full gw mass; gw tail mass cannot be matched by the census and is added
// on the gw side.
inline TvResult tv_distance(const NeighborhoodMeasure& emp, const GWMeasure& gw) {
  if (emp.r != gw.r) throw DomainError("tv_distance: radius mismatch");
  if (emp.n == 0) throw DomainError("tv_distance: empty census");
  double sum = 0.0;
  auto ei = emp.counts.begin();
  auto gi = gw.mass.begin();
  const double inv_n = 1.0 / static_cast<double>(emp.n);
  while (ei != emp.counts.end() || gi != gw.mass.end()) {
    if (gi == gw.mass.end() || (ei != emp.counts.end() && ei->first < gi->first)) {
      sum += static_cast<double>(ei->second.count) * inv_n;
      ++ei;
    } else if (ei == emp.counts.end() || gi->first < ei->first) {
      sum += gi->second;
      ++gi;
    } else {
      sum += std::abs(static_cast<double>(ei->second.count) * inv_n - gi->second);
      ++ei;
      ++gi;
    }
  }
  sum += gw.tail_mass;
  return {std::clamp(0.5 * sum, 0.0, 1.0), gw.tail_mass};
}

}  // namespace perlab
