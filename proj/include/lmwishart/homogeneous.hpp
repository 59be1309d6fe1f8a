#pragma once

#include <algorithm>
#include <vector>

#include "lmwishart/chordal.hpp"
#include "lmwishart/error.hpp"
#include "lmwishart/graph.hpp"

namespace lmw {

/// Decomposable and, for every edge, one closed neighbourhood contains the other.
inline bool is_homogeneous(const UndirectedGraph& g) {
  if (!is_decomposable(g).chordal) return false;
  for (auto [u, v] : g.edges()) {
    VertexSet nu = g.closed_neighborhood(u), nv = g.closed_neighborhood(v);
    if (!nu.subset_of(nv) && !nv.subset_of(nu)) return false;
  }
  return true;
}

/// Tree of closed-neighbourhood classes. The root carries the largest
/// neighbourhood; each node's parent is the smallest class strictly above it.
///
/// Leaves correspond to cliques (the union of classes on the root path) and a
/// node with k > 1 children to a separator of multiplicity k - 1.
struct HasseTree {
  struct Node {
    VertexSet members;
    int parent = -1;
    std::vector<int> children;
  };
  std::vector<Node> nodes;

  int size(int t) const { return nodes[t].members.size(); }
  bool is_leaf(int t) const { return nodes[t].children.empty(); }
  /// Union of the classes from the root down to t.
  VertexSet path_union(int t) const {
    VertexSet s;
    for (int u = t; u >= 0; u = nodes[u].parent) s |= nodes[u].members;
    return s;
  }
  /// Nodes of the subtree rooted at t, t first.
  std::vector<int> subtree(int t) const {
    std::vector<int> out{t};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int c : nodes[out[i]].children) out.push_back(c);
    return out;
  }
  std::vector<int> leaves() const {
    std::vector<int> out;
    for (int t = 0; t < static_cast<int>(nodes.size()); ++t)
      if (is_leaf(t)) out.push_back(t);
    return out;
  }
  /// Nodes with at least two children.
  std::vector<int> branching_nodes() const {
    std::vector<int> out;
    for (int t = 0; t < static_cast<int>(nodes.size()); ++t)
      if (nodes[t].children.size() >= 2) out.push_back(t);
    return out;
  }
  int node_of(int v) const {
    for (int t = 0; t < static_cast<int>(nodes.size()); ++t)
      if (nodes[t].members.contains(v)) return t;
    return -1;
  }
};

inline HasseTree hasse_tree(const UndirectedGraph& g) {
  if (!is_homogeneous(g)) throw NotHomogeneous();
  HasseTree tree;
  std::vector<VertexSet> nbhd;
  for (int v = 1; v <= g.num_vertices(); ++v) {
    VertexSet n = g.closed_neighborhood(v);
    auto it = std::find(nbhd.begin(), nbhd.end(), n);
    if (it == nbhd.end()) {
      nbhd.push_back(n);
      tree.nodes.push_back({VertexSet{v}, -1, {}});
    } else {
      tree.nodes[static_cast<std::size_t>(it - nbhd.begin())].members.insert(v);
    }
  }
  const int m = static_cast<int>(tree.nodes.size());
  for (int t = 0; t < m; ++t) {
    int best = -1;
    for (int u = 0; u < m; ++u)
      if (u != t && nbhd[t].subset_of(nbhd[u]) && (best < 0 || nbhd[u].subset_of(nbhd[best]))) best = u;
    tree.nodes[t].parent = best;
    if (best >= 0) tree.nodes[best].children.push_back(t);
  }
  return tree;
}

}  // namespace lmw
