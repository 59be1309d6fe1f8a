#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "lmwishart/error.hpp"
#include "lmwishart/graph.hpp"

namespace lmw {

/// Default cap on the clique count accepted by perfect-order enumeration.
inline constexpr int kDefaultMaxCliques = 8;

/// Maximum-cardinality search visit order. Starts at the lowest label and
/// breaks ties towards the lowest label.
inline std::vector<int> maximum_cardinality_search(const UndirectedGraph& g) {
  const int p = g.num_vertices();
  std::vector<int> weight(static_cast<std::size_t>(p + 1), 0);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(p));
  VertexSet visited;
  for (int step = 0; step < p; ++step) {
    int best = -1;
    for (int v = 1; v <= p; ++v)
      if (!visited.contains(v) && (best < 0 || weight[v] > weight[best])) best = v;
    order.push_back(best);
    visited.insert(best);
    for (int w : (g.neighbors(best) - visited).to_vector()) ++weight[w];
  }
  return order;
}

struct ChordalityResult {
  bool chordal = false;
  /// Perfect elimination ordering (simplicial vertex first); empty when not chordal.
  std::vector<int> elimination_order;
};

/// Chordality test by maximum-cardinality search plus a zero-fill-in check.
inline ChordalityResult is_decomposable(const UndirectedGraph& g) {
  std::vector<int> visit = maximum_cardinality_search(g);
  VertexSet earlier;
  for (int v : visit) {
    if (!g.is_complete(g.neighbors(v) & earlier)) return {};
    earlier.insert(v);
  }
  std::reverse(visit.begin(), visit.end());
  return {true, visit};
}

/// Maximal cliques in maximum-cardinality-search order; this listing is
/// itself a perfect order.
inline std::vector<VertexSet> maximal_cliques(const UndirectedGraph& g) {
  if (!is_decomposable(g).chordal) throw NotDecomposable();
  std::vector<VertexSet> candidates;
  VertexSet earlier;
  for (int v : maximum_cardinality_search(g)) {
    VertexSet k = g.neighbors(v) & earlier;
    k.insert(v);
    candidates.push_back(k);
    earlier.insert(v);
  }
  std::vector<VertexSet> cliques;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < candidates.size() && maximal; ++j)
      if (i != j && candidates[i].subset_of(candidates[j]) && (candidates[i] != candidates[j] || j < i)) maximal = false;
    if (maximal) cliques.push_back(candidates[i]);
  }
  return cliques;
}

/// A clique sequence with its separators S_j, histories H_j and residuals R_j.
/// Index 0 holds C_1; separators()[0] and residuals()[0] are unused (empty and C_1).
class PerfectOrder {
 public:
  PerfectOrder() = default;

  int r() const { return static_cast<int>(cliques_.size()); }
  int p() const { return p_; }
  /// C_j for j in 1..r.
  VertexSet clique(int j) const { return cliques_.at(j - 1); }
  /// S_j for j in 2..r.
  VertexSet separator(int j) const { return separators_.at(j - 1); }
  VertexSet history(int j) const { return histories_.at(j - 1); }
  /// R_j = C_j \ S_j for j >= 2 and R_1 = C_1.
  VertexSet residual(int j) const { return residuals_.at(j - 1); }
  const std::vector<VertexSet>& cliques() const { return cliques_; }

  int clique_size(int j) const { return clique(j).size(); }
  int separator_size(int j) const { return separator(j).size(); }

  /// Distinct separators in order of first appearance.
  std::vector<VertexSet> distinct_separators() const {
    std::vector<VertexSet> out;
    for (int j = 2; j <= r(); ++j)
      if (std::find(out.begin(), out.end(), separator(j)) == out.end()) out.push_back(separator(j));
    return out;
  }
  /// J(P, S): indices j with S_j = S.
  std::vector<int> occurrences(VertexSet s) const {
    std::vector<int> out;
    for (int j = 2; j <= r(); ++j)
      if (separator(j) == s) out.push_back(j);
    return out;
  }
  /// nu(S), the separator multiplicity.
  int multiplicity(VertexSet s) const { return static_cast<int>(occurrences(s).size()); }

  std::string to_string() const {
    std::string s = "(";
    for (int j = 1; j <= r(); ++j) s += (j > 1 ? "," : "") + clique(j).to_string();
    return s + ")";
  }

  friend bool operator==(const PerfectOrder& a, const PerfectOrder& b) { return a.cliques_ == b.cliques_; }

 private:
  friend PerfectOrder derive_order(const UndirectedGraph&, const std::vector<VertexSet>&);
  friend PerfectOrder make_order_unchecked(int, const std::vector<VertexSet>&);

  int p_ = 0;
  std::vector<VertexSet> cliques_;
  std::vector<VertexSet> separators_;
  std::vector<VertexSet> histories_;
  std::vector<VertexSet> residuals_;
};

/// Builds the derived sets without validating running intersection.
inline PerfectOrder make_order_unchecked(int p, const std::vector<VertexSet>& seq) {
  PerfectOrder o;
  o.p_ = p;
  o.cliques_ = seq;
  VertexSet h;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    VertexSet s = h & seq[j];
    o.separators_.push_back(s);
    o.residuals_.push_back(seq[j] - s);
    h |= seq[j];
    o.histories_.push_back(h);
  }
  return o;
}

/// True when S_j = H_{j-1} ∩ C_j lies inside some earlier clique, for every j.
inline bool running_intersection(const std::vector<VertexSet>& seq) {
  VertexSet h;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    if (j > 0) {
      VertexSet s = h & seq[j];
      bool ok = false;
      for (std::size_t k = 0; k < j && !ok; ++k) ok = s.subset_of(seq[k]);
      if (!ok) return false;
    }
    h |= seq[j];
  }
  return true;
}

inline PerfectOrder derive_order(const UndirectedGraph& g, const std::vector<VertexSet>& seq) {
  std::vector<VertexSet> cl = maximal_cliques(g);
  std::vector<VertexSet> a = seq, b = cl;
  std::sort(a.begin(), a.end(), lex_less);
  std::sort(b.begin(), b.end(), lex_less);
  if (a != b) throw NotPerfectOrder("clique sequence is not a permutation of the maximal cliques");
  if (!running_intersection(seq)) throw NotPerfectOrder();
  return make_order_unchecked(g.num_vertices(), seq);
}

/// All perfect orders, in lexicographic order of clique-index permutations
/// relative to maximal_cliques(g).
inline std::vector<PerfectOrder> enumerate_perfect_orders(const UndirectedGraph& g, int max_cliques = kDefaultMaxCliques) {
  std::vector<VertexSet> cl = maximal_cliques(g);
  const int r = static_cast<int>(cl.size());
  if (r > max_cliques)
    throw CombinatorialLimit("graph has " + std::to_string(r) + " cliques; enumeration cap is " + std::to_string(max_cliques));
  std::vector<PerfectOrder> out;
  std::vector<VertexSet> seq;
  std::vector<bool> used(static_cast<std::size_t>(r), false);
  auto dfs = [&](auto&& self, VertexSet h) -> void {
    if (static_cast<int>(seq.size()) == r) {
      out.push_back(make_order_unchecked(g.num_vertices(), seq));
      return;
    }
    for (int i = 0; i < r; ++i) {
      if (used[i]) continue;
      if (!seq.empty()) {
        VertexSet s = h & cl[i];
        bool ok = false;
        for (VertexSet c : seq) ok = ok || s.subset_of(c);
        if (!ok) continue;
      }
      used[i] = true;
      seq.push_back(cl[i]);
      self(self, h | cl[i]);
      seq.pop_back();
      used[i] = false;
    }
  };
  dfs(dfs, VertexSet{});
  return out;
}

/// Graph-level clique/separator identity: |E| + p = sum c(c+1)/2 - sum s(s+1)/2.
inline bool clique_separator_identity(const UndirectedGraph& g, const PerfectOrder& o) {
  long lhs = g.num_edges() + g.num_vertices();
  long rhs = 0;
  for (int j = 1; j <= o.r(); ++j) rhs += o.clique_size(j) * (o.clique_size(j) + 1) / 2;
  for (int j = 2; j <= o.r(); ++j) rhs -= o.separator_size(j) * (o.separator_size(j) + 1) / 2;
  return lhs == rhs;
}

}  // namespace lmw
