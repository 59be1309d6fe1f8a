#pragma once

#include <string>
#include <vector>

#include "lmwishart/affine.hpp"
#include "lmwishart/chordal.hpp"
#include "lmwishart/homogeneous.hpp"
#include "lmwishart/linear_constraints.hpp"
#include "lmwishart/markov_ratio.hpp"

namespace lmw {

namespace detail {

/// Sum over j in J(P, S) of (alpha_j + shift_j - beta_j); the separator term
/// nu(S) beta(S) is read as one beta per occurrence.
template <class Shift>
AffineForm separator_balance(const PerfectOrder& o, VertexSet s, Shift shift) {
  AffineForm f;
  for (int j : o.occurrences(s)) f += alpha(j) + AffineForm(shift(j)) - beta(j);
  return f;
}

}  // namespace detail

/// Which form of condition c) to use for B_P.
enum class BpForm {
  /// -alpha_1 - eta_2 > (c_1 - 1)/2, which reproduces the worked 4-path sets.
  Corrected,
  /// -alpha_1 - (c_1 - s_2 + 1)/2 - eta_2 > (s_2 - 1)/2 as usually transcribed.
  Literal,
};

/// The identified subset B_P for a perfect order. For r = 1 only condition b)
/// on alpha_1 remains, with eta_2 = 0.
inline LinearConstraintSet set_BP(const PerfectOrder& o, BpForm form = BpForm::Corrected) {
  LinearConstraintSet cs;
  cs.r = o.r();
  const int r = o.r();
  const int c1 = o.clique_size(1);
  if (r == 1) {
    cs.add_positive(-alpha(1) - frac(c1 - 1, 2));
    return cs;
  }
  const VertexSet s2 = o.separator(2);
  const int s2n = s2.size();
  for (VertexSet s : o.distinct_separators()) {
    if (s == s2) continue;
    cs.add_equality(detail::separator_balance(o, s, [&](int j) { return frac(o.clique_size(j) - o.separator_size(j), 2); }));
  }
  for (int j = 2; j <= r; ++j) cs.add_positive(-alpha(j) - frac(o.clique_size(j) - o.separator_size(j) - 1, 2));
  cs.add_positive(-alpha(1) - frac(c1 - s2n - 1, 2));
  AffineForm eta2 = detail::separator_balance(o, s2, [&](int j) { return frac(o.clique_size(j) - s2.size(), 2); });
  if (form == BpForm::Corrected)
    cs.add_positive(-alpha(1) - eta2 - frac(c1 - 1, 2));
  else
    cs.add_positive(-alpha(1) - frac(c1 - s2n + 1, 2) - eta2 - frac(s2n - 1, 2));
  return cs;
}

/// The identified subset A_P for a perfect order, conditions a) to c) as stated.
inline LinearConstraintSet set_AP(const PerfectOrder& o) {
  LinearConstraintSet cs;
  cs.r = o.r();
  const int r = o.r();
  if (r == 1) {
    cs.add_positive(alpha(1) - frac(o.clique_size(1) - 1, 2));
    return cs;
  }
  const VertexSet s2 = o.separator(2);
  auto zero = [](int) { return Rational(0); };
  for (VertexSet s : o.distinct_separators())
    if (!(s == s2)) cs.add_equality(detail::separator_balance(o, s, zero));
  for (int j = 2; j <= r; ++j) cs.add_positive(alpha(j) - frac(o.clique_size(j) - 1, 2));
  AffineForm delta2 = detail::separator_balance(o, s2, zero);
  cs.add_positive(alpha(1) - delta2 - frac(s2.size() - 1, 2));
  return cs;
}

/// Integrability of the D-form of a decomposition with every residual minor
/// pinned to exponent zero. Type II: gamma_j < pa_j/2 + 1 (DAG Wishart domain
/// after U -> 2U). Type I: lambda_j > pa_j/2 (generalized Riesz domain).
inline LinearConstraintSet integrability_set_from_decomposition(const MarkovRatioDecomposition& dec) {
  LinearConstraintSet cs;
  cs.r = dec.r;
  for (const auto& [v, e] : dec.vertex_exponents) {
    Rational half_pa = frac(dec.dag.parents(v).size(), 2);
    if (dec.convention == Convention::TypeII)
      cs.add_positive(-e + half_pa + 1);
    else
      cs.add_positive(e - half_pa);
  }
  for (const auto& t : dec.residuals) cs.add_equality(t.exponent);
  return cs;
}

/// B for a homogeneous graph from its Hasse tree: for every node t,
/// -rho_t > (n_t - 1)/2 where rho_t sums alpha over the cliques (leaves) below
/// t minus beta over the separator occurrences (branching nodes) below t and
/// n_t counts the vertices of the subtree.
inline LinearConstraintSet homogeneous_B(const HasseTree& tree, const PerfectOrder& o) {
  LinearConstraintSet cs;
  cs.r = o.r();
  auto clique_index = [&](VertexSet c) {
    for (int j = 1; j <= o.r(); ++j)
      if (o.clique(j) == c) return j;
    throw Error("Hasse leaf " + c.to_string() + " is not a clique of the order");
  };
  for (int t = 0; t < static_cast<int>(tree.nodes.size()); ++t) {
    AffineForm rho;
    int n = 0;
    for (int u : tree.subtree(t)) {
      n += tree.size(u);
      if (tree.is_leaf(u)) rho += alpha(clique_index(tree.path_union(u)));
      if (tree.nodes[u].children.size() >= 2) {
        std::vector<int> occ = o.occurrences(tree.path_union(u));
        if (static_cast<int>(occ.size()) != static_cast<int>(tree.nodes[u].children.size()) - 1)
          throw Error("separator multiplicity disagrees with the Hasse tree");
        for (int j : occ) rho -= beta(j);
      }
    }
    cs.add_positive(-rho - frac(n - 1, 2));
  }
  return cs;
}

/// Membership of lambda in {1/2, 1, ..., (p-1)/2} union ((p-1)/2, infinity).
inline bool gindikin_membership(int p, const Rational& lambda) {
  if (p < 1) throw Error("gindikin_membership needs p >= 1");
  Rational top = frac(p - 1, 2);
  if (lambda > top) return true;
  Rational twice = 2 * lambda;
  twice.canonicalize();
  return twice > 0 && twice.get_den() == 1;
}

/// Renames alpha_k to the position of the k-th clique of `o` in `reference`,
/// and beta_k (the m-th occurrence of S_k in `o`) to the m-th occurrence of
/// the same separator in `reference`.
inline AffineForm rename_to_reference(const AffineForm& f, const PerfectOrder& o, const PerfectOrder& reference) {
  if (o.r() != reference.r()) throw Error("orders have different clique counts");
  return f.renamed([&](Symbol s) {
    if (s.kind == Symbol::Kind::Alpha) {
      VertexSet c = o.clique(s.index);
      for (int j = 1; j <= reference.r(); ++j)
        if (reference.clique(j) == c) return Symbol::alpha(j);
      throw Error("clique " + c.to_string() + " missing from the reference order");
    }
    VertexSet sep = o.separator(s.index);
    std::vector<int> mine = o.occurrences(sep), theirs = reference.occurrences(sep);
    auto it = std::find(mine.begin(), mine.end(), s.index);
    std::size_t rank = static_cast<std::size_t>(it - mine.begin());
    if (rank >= theirs.size()) throw Error("separator " + sep.to_string() + " missing from the reference order");
    return Symbol::beta(theirs[rank]);
  });
}

inline LinearConstraintSet rename_to_reference(const LinearConstraintSet& cs, const PerfectOrder& o, const PerfectOrder& reference) {
  LinearConstraintSet out;
  out.r = cs.r;
  for (const auto& e : cs.equalities) out.add_equality(rename_to_reference(e, o, reference));
  for (const auto& g : cs.strict) out.add_positive(rename_to_reference(g, o, reference));
  return out;
}

/// One line per constraint: "f = 0" or "f > 0".
inline std::vector<std::string> describe(const LinearConstraintSet& cs) {
  std::vector<std::string> out;
  for (const auto& e : cs.equalities) out.push_back(e.to_string() + " = 0");
  for (const auto& g : cs.strict) out.push_back(g.to_string() + " > 0");
  return out;
}

}  // namespace lmw
