#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "lmwishart/chordal.hpp"
#include "lmwishart/error.hpp"
#include "lmwishart/graph.hpp"

namespace lmw {

/// No immoralities: the parents of every vertex are pairwise adjacent.
inline bool is_perfect_dag(const Dag& d) {
  for (int v = 1; v <= d.num_vertices(); ++v) {
    VertexSet pa = d.parents(v);
    for (int u : pa.to_vector())
      for (int w : pa.to_vector())
        if (u < w && !d.has_arc(u, w) && !d.has_arc(w, u)) return false;
  }
  return true;
}

/// i -> j and j -> k imply i -> k.
inline bool is_transitive(const Dag& d) {
  for (int j = 1; j <= d.num_vertices(); ++j)
    for (int i : d.parents(j).to_vector())
      if (!d.parents(i).subset_of(d.parents(j))) return false;
  return true;
}

/// A is closed under taking parents.
inline bool is_ancestral(const Dag& d, VertexSet a) {
  for (int v : a.to_vector())
    if (!d.parents(v).subset_of(a)) return false;
  return true;
}

/// d is a perfect orientation of exactly the edges of g.
inline bool is_perfect_dag_version(const Dag& d, const UndirectedGraph& g) {
  return d.num_vertices() == g.num_vertices() && d.skeleton() == g && is_perfect_dag(d);
}

/// Every history H_1..H_{r-1} is ancestral in d.
inline bool is_induced_by(const Dag& d, const PerfectOrder& o) {
  for (int j = 1; j < o.r(); ++j)
    if (!is_ancestral(d, o.history(j))) return false;
  return true;
}

/// Undirected graph whose maximal cliques are the cliques of the order.
inline UndirectedGraph graph_of(const PerfectOrder& o) {
  UndirectedGraph g(o.p());
  for (VertexSet c : o.cliques()) {
    auto vs = c.to_vector();
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t k = i + 1; k < vs.size(); ++k)
        if (!g.adjacent(vs[i], vs[k])) g.add_edge(vs[i], vs[k]);
  }
  return g;
}

/// Perfect DAG version whose histories are ancestral, built by numbering
/// blocks from the top: S_2, C_1 \ S_2, R_2, ..., R_r (C_1 is a single block
/// when s2_ancestral is false). Arcs point from higher to lower numbers.
///
/// Inside a block, vertices lying on more distinct separators are numbered
/// higher, then ascending label.
inline Dag dag_induced_by_order(const PerfectOrder& o, bool s2_ancestral = true) {
  const int p = o.p();
  std::vector<VertexSet> blocks;
  if (o.r() >= 2 && s2_ancestral) {
    blocks.push_back(o.separator(2));
    blocks.push_back(o.clique(1) - o.separator(2));
  } else {
    blocks.push_back(o.clique(1));
  }
  for (int j = 2; j <= o.r(); ++j) blocks.push_back(o.residual(j));

  std::vector<int> sep_count(static_cast<std::size_t>(p + 1), 0);
  for (VertexSet s : o.distinct_separators())
    for (int v : s.to_vector()) ++sep_count[v];

  std::vector<int> numbering(static_cast<std::size_t>(p), 0);
  int next = p;
  for (VertexSet b : blocks) {
    std::vector<int> vs = b.to_vector();
    std::stable_sort(vs.begin(), vs.end(), [&](int a, int c) { return sep_count[a] > sep_count[c]; });
    for (int v : vs) numbering[v - 1] = next--;
  }
  if (next != 0) throw NotPerfectOrder("cliques do not cover vertices 1..p");

  std::vector<std::pair<int, int>> arcs;
  for (auto [u, v] : graph_of(o).edges())
    arcs.push_back(numbering[u - 1] > numbering[v - 1] ? std::pair{u, v} : std::pair{v, u});
  return Dag(p, arcs, numbering);
}

namespace detail {

/// Cliques of the skeleton ranked by their numbers in d, largest first.
inline std::vector<VertexSet> cliques_by_numbering(const Dag& d, const std::vector<VertexSet>& cl) {
  auto key = [&](VertexSet c) {
    std::vector<int> k;
    for (int v : c.to_vector()) k.push_back(d.number_of(v));
    std::sort(k.rbegin(), k.rend());
    return k;
  };
  std::vector<VertexSet> out = cl;
  std::stable_sort(out.begin(), out.end(), [&](VertexSet a, VertexSet b) { return key(a) > key(b); });
  return out;
}

}  // namespace detail

/// A perfect order inducing d. Among inducing orders the first one (cliques
/// explored from the highest-numbered down) whose own induced DAG equals d is
/// preferred; otherwise the first inducing order is returned.
inline PerfectOrder perfect_order_from_dag(const Dag& d) {
  if (!is_perfect_dag(d)) throw NotPerfectDag();
  UndirectedGraph g = d.skeleton();
  std::vector<VertexSet> cl = detail::cliques_by_numbering(d, maximal_cliques(g));
  const int r = static_cast<int>(cl.size());
  std::optional<PerfectOrder> first, exact;
  std::vector<VertexSet> seq;
  std::vector<bool> used(static_cast<std::size_t>(r), false);
  std::function<void(VertexSet)> dfs = [&](VertexSet h) {
    if (exact) return;
    if (static_cast<int>(seq.size()) == r) {
      PerfectOrder o = make_order_unchecked(g.num_vertices(), seq);
      if (!first) first = o;
      if (dag_induced_by_order(o, true) == d || dag_induced_by_order(o, false) == d) exact = o;
      return;
    }
    for (int i = 0; i < r; ++i) {
      if (used[i]) continue;
      VertexSet s = h & cl[i];
      bool ok = seq.empty();
      for (VertexSet c : seq) ok = ok || s.subset_of(c);
      if (!ok) continue;
      VertexSet nh = h | cl[i];
      if (static_cast<int>(seq.size()) + 1 < r && !is_ancestral(d, nh)) continue;
      used[i] = true;
      seq.push_back(cl[i]);
      dfs(nh);
      seq.pop_back();
      used[i] = false;
    }
  };
  dfs(VertexSet{});
  if (exact) return *exact;
  if (first) return *first;
  throw NotPerfectDag("no perfect order has all histories ancestral in this DAG");
}

struct AncestralSeparators {
  std::vector<VertexSet> separators;
  int r_d = 0;
};

/// Distinct separators of the order that are ancestral in d.
inline AncestralSeparators ancestral_separators(const PerfectOrder& o, const Dag& d) {
  AncestralSeparators out;
  for (VertexSet s : o.distinct_separators())
    if (is_ancestral(d, s)) out.separators.push_back(s);
  out.r_d = static_cast<int>(out.separators.size());
  return out;
}

/// DAG version induced by a linear extension of the neighbourhood preorder:
/// larger closed neighbourhoods are numbered higher, ties by ascending label.
inline Dag transitive_dag_version(const UndirectedGraph& g) {
  const int p = g.num_vertices();
  std::vector<int> vs(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) vs[i] = i + 1;
  std::stable_sort(vs.begin(), vs.end(), [&](int a, int b) {
    return g.closed_neighborhood(a).size() > g.closed_neighborhood(b).size();
  });
  std::vector<int> numbering(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) numbering[vs[i] - 1] = p - i;
  std::vector<std::pair<int, int>> arcs;
  for (auto [u, v] : g.edges())
    arcs.push_back(numbering[u - 1] > numbering[v - 1] ? std::pair{u, v} : std::pair{v, u});
  return Dag(p, arcs, numbering);
}

}  // namespace lmw
