#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "lmwishart/chordal.hpp"
#include "lmwishart/error.hpp"
#include "lmwishart/graph.hpp"

namespace lmw {

/// Largest vertex count for which canonical labelling is supported.
inline constexpr int kMaxCanonicalVertices = 11;

namespace detail {

/// Stable colour refinement; returns the colour of every vertex (1-based index).
inline std::vector<int> refine_colors(const UndirectedGraph& g) {
  const int p = g.num_vertices();
  std::vector<int> color(static_cast<std::size_t>(p + 1), 0);
  for (int v = 1; v <= p; ++v) color[v] = g.neighbors(v).size();
  int classes = -1;
  while (true) {
    std::vector<std::pair<int, std::vector<int>>> sig(static_cast<std::size_t>(p + 1));
    for (int v = 1; v <= p; ++v) {
      std::vector<int> nc;
      for (int w : g.neighbors(v).to_vector()) nc.push_back(color[w]);
      std::sort(nc.begin(), nc.end());
      sig[v] = {color[v], nc};
    }
    std::vector<std::pair<int, std::vector<int>>> distinct(sig.begin() + 1, sig.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int v = 1; v <= p; ++v)
      color[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sig[v]) - distinct.begin());
    if (static_cast<int>(distinct.size()) == classes) break;
    classes = static_cast<int>(distinct.size());
  }
  return color;
}

inline std::uint64_t adjacency_code(const UndirectedGraph& g, const std::vector<int>& at) {
  // at[i] is the original vertex placed at position i (0-based).
  std::uint64_t code = 0;
  const int p = static_cast<int>(at.size());
  for (int i = 0; i < p; ++i)
    for (int k = i + 1; k < p; ++k) code = (code << 1) | (g.adjacent(at[i], at[k]) ? 1U : 0U);
  return code;
}

}  // namespace detail

struct CanonicalForm {
  std::uint64_t code = 0;
  /// canonical_label[v-1] is the new label of original vertex v.
  std::vector<int> canonical_label;
};

/// Canonical labelling by colour refinement and exhaustive search within cells.
/// Two graphs on the same vertex count are isomorphic iff their codes agree.
inline CanonicalForm canonical_form(const UndirectedGraph& g) {
  const int p = g.num_vertices();
  if (p > kMaxCanonicalVertices) throw CombinatorialLimit("canonical labelling is limited to " + std::to_string(kMaxCanonicalVertices) + " vertices");
  std::vector<int> color = detail::refine_colors(g);
  std::map<int, std::vector<int>> cells;
  for (int v = 1; v <= p; ++v) cells[color[v]].push_back(v);
  std::vector<std::vector<int>> cell_list;
  for (auto& [c, vs] : cells) cell_list.push_back(vs);

  CanonicalForm best;
  bool have = false;
  std::vector<int> at;
  auto rec = [&](auto&& self, std::size_t ci) -> void {
    if (ci == cell_list.size()) {
      std::uint64_t code = detail::adjacency_code(g, at);
      if (!have || code > best.code) {
        have = true;
        best.code = code;
        best.canonical_label.assign(static_cast<std::size_t>(p), 0);
        for (int i = 0; i < p; ++i) best.canonical_label[at[i] - 1] = i + 1;
      }
      return;
    }
    std::vector<int> cell = cell_list[ci];
    do {
      at.insert(at.end(), cell.begin(), cell.end());
      self(self, ci + 1);
      at.resize(at.size() - cell.size());
    } while (std::next_permutation(cell.begin(), cell.end()));
  };
  rec(rec, 0);
  return best;
}

inline UndirectedGraph relabel(const UndirectedGraph& g, const std::vector<int>& new_label) {
  UndirectedGraph h(g.num_vertices());
  for (auto [u, v] : g.edges()) h.add_edge(new_label[u - 1], new_label[v - 1]);
  return h;
}

inline UndirectedGraph canonical_graph(const UndirectedGraph& g) { return relabel(g, canonical_form(g).canonical_label); }

/// Non-empty complete vertex subsets of a decomposable graph.
inline std::vector<VertexSet> complete_subsets(const UndirectedGraph& g) {
  std::set<std::uint64_t> seen;
  for (VertexSet c : maximal_cliques(g)) {
    std::uint64_t m = c.bits();
    for (std::uint64_t s = m; s != 0; s = (s - 1) & m) seen.insert(s);
  }
  std::vector<VertexSet> out;
  for (std::uint64_t s : seen) out.push_back(VertexSet::from_bits(s));
  return out;
}

/// Connected decomposable graphs on n vertices, one canonical representative
/// per isomorphism class, sorted by canonical code. Built by attaching a new
/// vertex to each complete subset of the classes on n - 1 vertices.
inline std::vector<UndirectedGraph> connected_decomposable_graphs(int n) {
  if (n < 1) return {};
  std::vector<UndirectedGraph> level{UndirectedGraph(1)};
  for (int k = 2; k <= n; ++k) {
    std::map<std::uint64_t, UndirectedGraph> next;
    for (const UndirectedGraph& g : level) {
      for (VertexSet s : complete_subsets(g)) {
        UndirectedGraph h(k);
        for (auto [u, v] : g.edges()) h.add_edge(u, v);
        for (int v : s.to_vector()) h.add_edge(v, k);
        CanonicalForm cf = canonical_form(h);
        if (!next.count(cf.code)) next.emplace(cf.code, relabel(h, cf.canonical_label));
      }
    }
    level.clear();
    for (auto& [code, g] : next) level.push_back(g);
  }
  return level;
}

}  // namespace lmw
