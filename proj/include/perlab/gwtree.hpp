#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "perlab/canon.hpp"
#include "perlab/common.hpp"
#include "perlab/rng.hpp"

namespace perlab {

// Rooted tree as children lists; node 0 is the root, children are listed in
// creation (BFS) order.
struct RootedTree {
  std::vector<std::vector<std::uint32_t>> children{{}};

  std::size_t num_nodes() const { return children.size(); }

  std::uint32_t add_child(std::uint32_t parent) {
    std::uint32_t id = static_cast<std::uint32_t>(children.size());
    children.emplace_back();
    children[parent].push_back(id);
    return id;
  }

  std::size_t height() const {
    std::vector<std::uint32_t> depth(children.size(), 0);
    std::size_t h = 0;
    for (std::uint32_t v = 0; v < children.size(); ++v)
      for (std::uint32_t ch : children[v]) {
        depth[ch] = depth[v] + 1;
        h = std::max<std::size_t>(h, depth[ch]);
      }
    return h;
  }

  std::size_t max_degree() const {
    if (children.size() == 1) return 0;
    std::size_t best = children[0].size();
    for (std::uint32_t v = 1; v < children.size(); ++v)
      best = std::max(best, children[v].size() + 1);
    return best;
  }

  RootedGraph to_rooted_graph() const {
    RootedGraph g(children.size());
    for (Vertex v = 0; v < children.size(); ++v)
      for (std::uint32_t ch : children[v]) g.add_edge(v, ch);
    return g;
  }
};

namespace detail {

inline std::string tree_ahu(const RootedTree& t, std::uint32_t node) {
  std::vector<std::string> codes;
  for (std::uint32_t ch : t.children[node]) codes.push_back(tree_ahu(t, ch));
  std::sort(codes.begin(), codes.end());
  std::string out = "(";
  for (const auto& c : codes) out += c;
  out += ")";
  return out;
}

}  // namespace detail

inline CanonCode tree_canon(const RootedTree& t) { return {detail::tree_ahu(t, 0), true}; }

// Depth-r truncation of the Poisson(c) Galton-Watson tree: every node at
// depth < r draws Po(c) children, depth-r nodes draw none.
inline RootedTree sample_gw_truncated(double c, std::size_t r, Rng& rng) {
  if (c < 0.0) throw DomainError("offspring mean must be >= 0");
  RootedTree t;
  std::vector<std::pair<std::uint32_t, std::size_t>> queue{{0, 0}};
  std::size_t head = 0;
  while (head < queue.size()) {
    auto [node, depth] = queue[head++];
    if (depth == r) continue;
    std::uint64_t kids = rng.poisson(c);
    for (std::uint64_t i = 0; i < kids; ++i) {
      if (t.num_nodes() >= 10'000'000) throw SizeError("GW sample exceeded the node guard");
      queue.emplace_back(t.add_child(node), depth + 1);
    }
  }
  return t;
}

inline RootedTree sample_gw_truncated(double c, std::size_t r, std::uint64_t seed) {
  Rng rng(hash_combine(seed, 0x4757'7472'6565ull));
  return sample_gw_truncated(c, r, rng);
}

namespace detail {

// P(truncated GW ball == this subtree shape). A node at depth < r with
// child classes t_1^{m_1}...t_k^{m_k} (D children total) contributes
// e^{-c} c^D / prod(m_i!) times the child probabilities; depth-r nodes
// contribute 1 (their offspring is not constrained by the ball).
inline double gw_ball_prob_node(const RootedTree& t, std::uint32_t node, std::size_t depth,
                                std::size_t r, double c) {
  if (depth == r) return 1.0;
  std::map<std::string, std::pair<std::size_t, double>> classes;  // code -> (mult, prob)
  for (std::uint32_t ch : t.children[node]) {
    std::string code = tree_ahu(t, ch);
    auto it = classes.find(code);
    if (it == classes.end())
      classes.emplace(code, std::make_pair(1, gw_ball_prob_node(t, ch, depth + 1, r, c)));
    else
      ++it->second.first;
  }
  std::size_t total_children = t.children[node].size();
  double prob = std::exp(-c) * std::pow(c, static_cast<double>(total_children));
  for (const auto& [code, mp] : classes) {
    const auto& [mult, child_prob] = mp;
    for (std::size_t i = 2; i <= mult; ++i) prob /= static_cast<double>(i);
    prob *= std::pow(child_prob, static_cast<double>(mult));
  }
  return prob;
}

}  // namespace detail

inline double gw_ball_prob(const RootedTree& t, std::size_t r, double c) {
  if (t.height() > r) throw DomainError("tree height exceeds the ball radius");
  return detail::gw_ball_prob_node(t, 0, 0, r, c);
}

// Law of the depth-r ball of GW_c restricted to classes with maximum degree
// at most delta_cap; tail_mass covers everything outside the enumeration.
struct GWMeasure {
  std::size_t r = 0;
  double c = 0.0;
  std::size_t delta_cap = 0;
  std::map<std::string, double> mass;  // AHU code -> probability
  double tail_mass = 0.0;

  double total_mass() const {
    double s = 0.0;
    for (const auto& [code, p] : mass) s += p;
    return s;
  }

  void write_csv(std::ostream& out) const {
    out << "canon_code,probability\n";
    for (const auto& [code, p] : mass) {
      out.precision(17);
      out << code << "," << p << "\n";
    }
    out.precision(17);
    out << "TAIL," << tail_mass << "\n";
  }
};

namespace detail {

struct TreeClass {
  RootedTree tree;
  std::string code;
};

// Append `sub` as a child subtree of `parent` in `t`.
inline void graft(RootedTree& t, std::uint32_t parent, const RootedTree& sub) {
  std::vector<std::uint32_t> remap(sub.num_nodes());
  remap[0] = t.add_child(parent);
  std::vector<std::uint32_t> order{0};
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::uint32_t v = order[i];
    for (std::uint32_t ch : sub.children[v]) {
      remap[ch] = t.add_child(remap[v]);
      order.push_back(ch);
    }
  }
}

// All rooted-tree classes with height <= h whose root has at most max_kids
// children and whose internal non-root nodes have at most inner_kids
// children. Children multisets are generated in non-decreasing code order.
inline std::vector<TreeClass> enumerate_classes(std::size_t h, std::size_t max_kids,
                                                std::size_t inner_kids, std::size_t guard) {
  std::vector<TreeClass> subs;
  if (h == 0) {
    subs.push_back({RootedTree{}, tree_canon(RootedTree{}).code});
    return subs;
  }
  std::vector<TreeClass> child_classes = enumerate_classes(h - 1, inner_kids, inner_kids, guard);
  std::sort(child_classes.begin(), child_classes.end(),
            [](const TreeClass& a, const TreeClass& b) { return a.code < b.code; });
  std::vector<TreeClass> out;
  std::vector<std::size_t> chosen;
  auto emit = [&]() {
    RootedTree t;
    for (std::size_t idx : chosen) graft(t, 0, child_classes[idx].tree);
    out.push_back({std::move(t), std::string()});
    out.back().code = tree_canon(out.back().tree).code;
    if (out.size() > guard) throw SizeError("tree-class enumeration exceeded the feasibility guard");
  };
  // Multisets of size 0..max_kids with non-decreasing class index.
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    emit();
    if (chosen.size() == max_kids) return;
    for (std::size_t i = from; i < child_classes.size(); ++i) {
      chosen.push_back(i);
      rec(i);
      chosen.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace detail

// Exhaustive mu_r restricted to max degree delta_cap. The guard bounds the
// number of enumerated classes (10^7).
inline GWMeasure enumerate_gw_measure(double c, std::size_t r, std::size_t delta_cap,
                                      std::size_t class_guard = 10'000'000) {
  if (!(c >= 0.0)) throw DomainError("enumerate_gw_measure requires c >= 0");
  GWMeasure m;
  m.r = r;
  m.c = c;
  m.delta_cap = delta_cap;
  if (r == 0) {
    m.mass[tree_canon(RootedTree{}).code] = 1.0;
    m.tail_mass = 0.0;
    return m;
  }
  std::size_t inner = delta_cap == 0 ? 0 : delta_cap - 1;
  std::vector<detail::TreeClass> classes =
      detail::enumerate_classes(r, delta_cap, inner, class_guard);
  double total = 0.0;
  for (auto& cls : classes) {
    double p = gw_ball_prob(cls.tree, r, c);
    m.mass[cls.code] = p;
    total += p;
  }
  m.tail_mass = std::max(0.0, 1.0 - total);
  return m;
}

}  // namespace perlab
