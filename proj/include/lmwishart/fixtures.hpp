#pragma once

#include <vector>

#include "lmwishart/chordal.hpp"
#include "lmwishart/dag_versions.hpp"
#include "lmwishart/graph.hpp"

/// Named example graphs with the clique orders and DAG versions used in the
/// worked examples and the acceptance suite.
namespace lmw::fixtures {

struct Example {
  UndirectedGraph graph;
  PerfectOrder order;
  Dag dag;
};

inline UndirectedGraph graph_from_cliques(int p, const std::vector<VertexSet>& cliques) {
  return graph_of(make_order_unchecked(p, cliques));
}

inline UndirectedGraph path(int p) {
  UndirectedGraph g(p);
  for (int v = 1; v < p; ++v) g.add_edge(v, v + 1);
  return g;
}

inline UndirectedGraph cycle(int p) {
  UndirectedGraph g = path(p);
  g.add_edge(p, 1);
  return g;
}

inline UndirectedGraph complete(int p) {
  UndirectedGraph g(p);
  for (int u = 1; u <= p; ++u)
    for (int v = u + 1; v <= p; ++v) g.add_edge(u, v);
  return g;
}

/// Path 1-2-3-4 with order ({2,3},{1,2},{3,4}) and the chain DAG 1 -> 2 -> 3 -> 4,
/// whose parent-compatible numbering is v -> 5 - v.
inline Example four_path() {
  UndirectedGraph g = path(4);
  PerfectOrder o = derive_order(g, {{2, 3}, {1, 2}, {3, 4}});
  Dag d(4, {{1, 2}, {2, 3}, {3, 4}}, {4, 3, 2, 1});
  return {g, o, d};
}

/// Path 1-2-3 with order ({1,2},{2,3}).
inline Example three_path() {
  UndirectedGraph g = path(3);
  PerfectOrder o = derive_order(g, {{1, 2}, {2, 3}});
  return {g, o, transitive_dag_version(g)};
}

/// Homogeneous graph with cliques {1,3,4} and {2,3,4}.
inline Example two_triangles() {
  UndirectedGraph g = graph_from_cliques(4, {{1, 3, 4}, {2, 3, 4}});
  PerfectOrder o = derive_order(g, {{1, 3, 4}, {2, 3, 4}});
  return {g, o, transitive_dag_version(g)};
}

/// First counterexample graph in the clique labels used for its separator list:
/// cliques {2,3,5},{2,4,5},{4,6},{1,2}.
inline Example counterexample_one_text() {
  UndirectedGraph g = graph_from_cliques(6, {{2, 3, 5}, {2, 4, 5}, {4, 6}, {1, 2}});
  PerfectOrder o = derive_order(g, {{2, 3, 5}, {2, 4, 5}, {4, 6}, {1, 2}});
  return {g, o, dag_induced_by_order(o, true)};
}

/// First counterexample graph relabelled so that the labels are
/// parent-compatible in the DAG version (arcs from larger to smaller label).
inline Example counterexample_one() {
  UndirectedGraph g = graph_from_cliques(6, {{3, 5, 6}, {4, 5, 6}, {2, 6}, {1, 4}});
  PerfectOrder o = derive_order(g, {{3, 5, 6}, {4, 5, 6}, {2, 6}, {1, 4}});
  return {g, o, Dag::oriented_by_label(g)};
}

/// Second counterexample graph (eight vertices), labels parent-compatible.
inline Example counterexample_two() {
  UndirectedGraph g = graph_from_cliques(8, {{4, 7, 8}, {3, 7, 8}, {6, 8}, {2, 5, 6}, {1, 5, 6}});
  PerfectOrder o = derive_order(g, {{4, 7, 8}, {3, 7, 8}, {6, 8}, {2, 5, 6}, {1, 5, 6}});
  return {g, o, Dag::oriented_by_label(g)};
}

}  // namespace lmw::fixtures
