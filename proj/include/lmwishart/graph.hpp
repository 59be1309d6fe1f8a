#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "lmwishart/error.hpp"

namespace lmw {

/// Largest vertex count supported by the bitset representation.
inline constexpr int kMaxVertices = 64;

/// A set of vertex labels in 1..64, stored as a bitmask.
class VertexSet {
 public:
  constexpr VertexSet() = default;
  VertexSet(std::initializer_list<int> labels) {
    for (int v : labels) insert(v);
  }
  static constexpr VertexSet from_bits(std::uint64_t bits) {
    VertexSet s;
    s.bits_ = bits;
    return s;
  }
  /// {1, ..., p}
  static constexpr VertexSet range(int p) {
    return from_bits(p >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << p) - 1));
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int v) const { return (bits_ >> (v - 1)) & 1U; }
  constexpr void insert(int v) { bits_ |= std::uint64_t{1} << (v - 1); }
  constexpr void erase(int v) { bits_ &= ~(std::uint64_t{1} << (v - 1)); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool subset_of(VertexSet o) const { return (bits_ & ~o.bits_) == 0; }
  /// Smallest label; set must be non-empty.
  constexpr int min() const { return std::countr_zero(bits_) + 1; }
  constexpr int max() const { return 64 - std::countl_zero(bits_); }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int v : to_vector()) {
      if (!first) s += ",";
      s += std::to_string(v);
      first = false;
    }
    return s + "}";
  }

  friend constexpr VertexSet operator|(VertexSet a, VertexSet b) { return from_bits(a.bits_ | b.bits_); }
  friend constexpr VertexSet operator&(VertexSet a, VertexSet b) { return from_bits(a.bits_ & b.bits_); }
  friend constexpr VertexSet operator-(VertexSet a, VertexSet b) { return from_bits(a.bits_ & ~b.bits_); }
  constexpr VertexSet& operator|=(VertexSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr VertexSet& operator&=(VertexSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  friend constexpr bool operator==(VertexSet, VertexSet) = default;
  /// Orders by (size, then lexicographic label list); used for canonical listings.
  friend bool operator<(VertexSet a, VertexSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.to_vector() < b.to_vector();
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic order on label lists; the canonical order for clique listings.
inline bool lex_less(VertexSet a, VertexSet b) { return a.to_vector() < b.to_vector(); }

/// Undirected graph on vertices 1..p. Loops are implicit and never stored.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(int p) : p_(p), adj_(static_cast<std::size_t>(p)) {
    if (p < 0 || p > kMaxVertices) throw Error("vertex count out of range: " + std::to_string(p));
  }
  UndirectedGraph(int p, const std::vector<std::pair<int, int>>& edges) : UndirectedGraph(p) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  int num_vertices() const { return p_; }
  VertexSet vertices() const { return VertexSet::range(p_); }

  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw Error("self-loop " + std::to_string(u) + " must not be stored");
    adj_[u - 1].insert(v);
    adj_[v - 1].insert(u);
  }

  bool adjacent(int u, int v) const { return u != v && adj_[u - 1].contains(v); }
  VertexSet neighbors(int v) const { return adj_[v - 1]; }
  VertexSet closed_neighborhood(int v) const {
    VertexSet s = adj_[v - 1];
    s.insert(v);
    return s;
  }

  /// Unordered edges (u < v), sorted.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 1; u <= p_; ++u)
      for (int v : adj_[u - 1].to_vector())
        if (u < v) out.emplace_back(u, v);
    return out;
  }
  int num_edges() const {
    int m = 0;
    for (const auto& a : adj_) m += a.size();
    return m / 2;
  }

  bool is_complete(VertexSet s) const {
    for (int v : s.to_vector())
      if (!(s - VertexSet{v}).subset_of(adj_[v - 1])) return false;
    return true;
  }

  UndirectedGraph induced(VertexSet keep, std::vector<int>* labels = nullptr) const {
    std::vector<int> old = keep.to_vector();
    std::vector<int> pos(static_cast<std::size_t>(p_ + 1), 0);
    for (std::size_t i = 0; i < old.size(); ++i) pos[old[i]] = static_cast<int>(i) + 1;
    UndirectedGraph h(static_cast<int>(old.size()));
    for (auto [u, v] : edges())
      if (keep.contains(u) && keep.contains(v)) h.add_edge(pos[u], pos[v]);
    if (labels) *labels = old;
    return h;
  }

  bool connected() const {
    if (p_ == 0) return true;
    VertexSet seen{1}, frontier{1};
    while (!frontier.empty()) {
      VertexSet next;
      for (int v : frontier.to_vector()) next |= adj_[v - 1];
      frontier = next - seen;
      seen |= next;
    }
    return seen == vertices();
  }

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

 private:
  void check_vertex(int v) const {
    if (v < 1 || v > p_) throw Error("vertex " + std::to_string(v) + " out of range 1.." + std::to_string(p_));
  }

  int p_ = 0;
  std::vector<VertexSet> adj_;
};

/// Directed acyclic graph on vertices 1..p.
///
/// Arcs are stored on the caller's labels. `numbering()` is a bijection onto
/// 1..p in which every arc u -> v satisfies numbering(u) > numbering(v), i.e.
/// a parent-compatible relabeling; it is computed on construction unless one
/// is supplied.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int p) : p_(p), parents_(static_cast<std::size_t>(p)), children_(static_cast<std::size_t>(p)) {
    if (p < 0 || p > kMaxVertices) throw Error("vertex count out of range: " + std::to_string(p));
  }
  Dag(int p, const std::vector<std::pair<int, int>>& arcs) : Dag(p) {
    for (auto [u, v] : arcs) add_arc(u, v);
    finalize();
  }
  Dag(int p, const std::vector<std::pair<int, int>>& arcs, std::vector<int> numbering) : Dag(p) {
    for (auto [u, v] : arcs) add_arc(u, v);
    set_numbering(std::move(numbering));
  }

  /// Orients every edge of g from the larger label to the smaller.
  static Dag oriented_by_label(const UndirectedGraph& g) {
    Dag d(g.num_vertices());
    for (auto [u, v] : g.edges()) d.add_arc(v, u);
    std::vector<int> id(static_cast<std::size_t>(g.num_vertices()));
    for (int i = 0; i < g.num_vertices(); ++i) id[i] = i + 1;
    d.set_numbering(std::move(id));
    return d;
  }

  int num_vertices() const { return p_; }
  VertexSet vertices() const { return VertexSet::range(p_); }
  VertexSet parents(int v) const { return parents_[v - 1]; }
  VertexSet children(int v) const { return children_[v - 1]; }
  VertexSet family(int v) const {
    VertexSet f = parents_[v - 1];
    f.insert(v);
    return f;
  }
  bool has_arc(int u, int v) const { return parents_[v - 1].contains(u); }

  std::vector<std::pair<int, int>> arcs() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 1; v <= p_; ++v)
      for (int u : parents_[v - 1].to_vector()) out.emplace_back(u, v);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// numbering()[v-1] is the parent-compatible number of vertex v.
  const std::vector<int>& numbering() const { return numbering_; }
  int number_of(int v) const { return numbering_[v - 1]; }
  /// Vertex carrying parent-compatible number k.
  int vertex_numbered(int k) const {
    for (int v = 1; v <= p_; ++v)
      if (numbering_[v - 1] == k) return v;
    throw Error("no vertex with number " + std::to_string(k));
  }
  /// True when the caller's labels are themselves parent-compatible.
  bool labels_parent_compatible() const {
    for (auto [u, v] : arcs())
      if (!(u > v)) return false;
    return true;
  }

  /// Smallest ancestral set containing s.
  VertexSet ancestral_closure(VertexSet s) const {
    VertexSet closure = s, frontier = s;
    while (!frontier.empty()) {
      VertexSet next;
      for (int v : frontier.to_vector()) next |= parents_[v - 1];
      frontier = next - closure;
      closure |= next;
    }
    return closure;
  }

  UndirectedGraph skeleton() const {
    UndirectedGraph g(p_);
    for (auto [u, v] : arcs()) g.add_edge(u, v);
    return g;
  }

  friend bool operator==(const Dag& a, const Dag& b) { return a.p_ == b.p_ && a.parents_ == b.parents_; }

 private:
  void add_arc(int u, int v) {
    if (u < 1 || u > p_ || v < 1 || v > p_) throw Error("arc endpoint out of range");
    if (u == v) throw Error("self-loop arc on vertex " + std::to_string(u));
    if (parents_[u - 1].contains(v)) throw Error("arc given in both directions between " + std::to_string(u) + " and " + std::to_string(v));
    parents_[v - 1].insert(u);
    children_[u - 1].insert(v);
  }

  /// Topological numbering: sources get the largest numbers; ties by label.
  void finalize() {
    numbering_.assign(static_cast<std::size_t>(p_), 0);
    int next = p_;
    VertexSet done;
    while (next > 0) {
      int pick = -1;
      for (int v = p_; v >= 1; --v)
        if (!done.contains(v) && parents_[v - 1].subset_of(done)) pick = v;
      if (pick < 0) throw Error("directed graph has a cycle");
      numbering_[pick - 1] = next--;
      done.insert(pick);
    }
  }

  void set_numbering(std::vector<int> numbering) {
    if (static_cast<int>(numbering.size()) != p_) throw Error("numbering has wrong length");
    VertexSet seen;
    for (int k : numbering) {
      if (k < 1 || k > p_ || seen.contains(k)) throw Error("numbering is not a bijection onto 1..p");
      seen.insert(k);
    }
    for (int v = 1; v <= p_; ++v)
      for (int u : parents_[v - 1].to_vector())
        if (!(numbering[u - 1] > numbering[v - 1]))
          throw Error("numbering is not parent-compatible on arc " + std::to_string(u) + "->" + std::to_string(v));
    numbering_ = std::move(numbering);
  }

  int p_ = 0;
  std::vector<VertexSet> parents_;
  std::vector<VertexSet> children_;
  std::vector<int> numbering_;
};

}  // namespace lmw
