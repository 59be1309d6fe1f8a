#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "lmwishart/affine.hpp"
#include "lmwishart/chordal.hpp"
#include "lmwishart/dag_versions.hpp"
#include "lmwishart/error.hpp"
#include "lmwishart/matrix.hpp"

namespace lmw {

/// Type I: the Markov ratio H_G(alpha, beta, Sigma^E) itself. Type II: the
/// ratio with the measure exponents (c+1)/2 and (s+1)/2 folded in.
enum class Convention { TypeI, TypeII };

/// Reduced peels every complete set as far as the DAG allows and merges the
/// leftover minors by vertex set. PerSeparator keeps det Sigma_S whole for
/// every non-ancestral separator, giving one residual per such separator.
enum class Grouping { Reduced, PerSeparator };

inline const char* to_string(Convention c) { return c == Convention::TypeI ? "typeI" : "typeII"; }
inline const char* to_string(Grouping g) { return g == Grouping::Reduced ? "reduced" : "per-separator"; }

struct ResidualTerm {
  VertexSet set;
  AffineForm exponent;
};

/// H = prod_j D_jj^{exponent(j)} * prod_k det(Sigma_{set_k})^{exponent_k}.
struct MarkovRatioDecomposition {
  int r = 1;
  Convention convention = Convention::TypeII;
  Grouping grouping = Grouping::Reduced;
  Dag dag{1};
  std::map<int, AffineForm> vertex_exponents;
  std::vector<ResidualTerm> residuals;
  bool induced_by_order = false;

  const AffineForm& exponent(int v) const { return vertex_exponents.at(v); }
  bool pure() const { return residuals.empty(); }

  /// Log of the decomposed product at a numeric parameter point.
  double evaluate_log(const Eigen::MatrixXd& sigma, const std::vector<double>& x) const {
    CholeskyFactors f = cholesky_from_covariance(sigma, dag);
    double v = 0;
    for (const auto& [j, e] : vertex_exponents) v += e.evaluate(x, r) * std::log(f.D(j - 1));
    for (const auto& t : residuals) v += t.exponent.evaluate(x, r) * log_det(sigma, t.set);
    return v;
  }
};

/// Exponents of det Sigma_{C_j} (a, index j-1) and det Sigma_{S_j} (b, index j-2).
inline std::pair<std::vector<AffineForm>, std::vector<AffineForm>> markov_exponents(const PerfectOrder& o, Convention c) {
  std::vector<AffineForm> a, b;
  for (int j = 1; j <= o.r(); ++j) {
    AffineForm f = alpha(j);
    if (c == Convention::TypeII) f += frac(o.clique_size(j) + 1, 2);
    a.push_back(f);
  }
  for (int j = 2; j <= o.r(); ++j) {
    AffineForm f = beta(j);
    if (c == Convention::TypeII) f += frac(o.separator_size(j) + 1, 2);
    b.push_back(f);
  }
  return {a, b};
}

namespace detail {

/// Accumulates D and minor exponents while peeling complete sets.
struct Peeler {
  const Dag& d;
  std::map<int, AffineForm> vertex;
  std::map<VertexSet, AffineForm> minors;

  /// det Sigma_A = prod of peeled D's times det Sigma_core; returns the core.
  VertexSet peel(VertexSet a, const AffineForm& e) {
    while (!a.empty()) {
      int low = -1;
      for (int v : a.to_vector())
        if (low < 0 || d.number_of(v) < d.number_of(low)) low = v;
      VertexSet rest = a;
      rest.erase(low);
      if (!(d.parents(low) == rest)) break;
      vertex[low] += e;
      a = rest;
    }
    return a;
  }
  void add_minor(VertexSet s, const AffineForm& e) {
    if (!s.empty()) minors[s] += e;
  }
};

}  // namespace detail

/// Rewrites the Markov ratio of `o` in the conditional variances D_jj of the
/// perfect DAG version `d` of the graph of `o`.
inline MarkovRatioDecomposition decompose_markov_ratio(const PerfectOrder& o, const Dag& d, Convention convention = Convention::TypeII,
                                                      Grouping grouping = Grouping::Reduced) {
  UndirectedGraph g = graph_of(o);
  if (!is_perfect_dag_version(d, g)) throw NotDagVersion("DAG is not a perfect DAG version of the graph of the order");
  auto [a, b] = markov_exponents(o, convention);
  detail::Peeler pl{d, {}, {}};
  for (int v = 1; v <= o.p(); ++v) pl.vertex[v] = AffineForm();

  if (grouping == Grouping::Reduced) {
    for (int j = 1; j <= o.r(); ++j) pl.add_minor(pl.peel(o.clique(j), a[j - 1]), a[j - 1]);
    for (int j = 2; j <= o.r(); ++j) pl.add_minor(pl.peel(o.separator(j), -b[j - 2]), -b[j - 2]);
  } else {
    // det Sigma_{C_j} = prod_{R_j} D * det Sigma_{S_j} when the residual peels
    // off cleanly; otherwise the clique falls back to full peeling.
    std::map<VertexSet, AffineForm> sep_exp;
    for (int j = 1; j <= o.r(); ++j) {
      VertexSet c = o.clique(j);
      if (j == 1) {
        pl.add_minor(pl.peel(c, a[0]), a[0]);
        continue;
      }
      VertexSet s = o.separator(j);
      // Peel only the residual vertices.
      std::map<int, AffineForm> saved = pl.vertex;
      VertexSet left = c;
      bool clean = true;
      while (left != s) {
        int low = -1;
        for (int v : left.to_vector())
          if (low < 0 || d.number_of(v) < d.number_of(low)) low = v;
        VertexSet rest = left;
        rest.erase(low);
        if (s.contains(low) || !(d.parents(low) == rest)) {
          clean = false;
          break;
        }
        pl.vertex[low] += a[j - 1];
        left = rest;
      }
      if (clean) {
        sep_exp[s] += a[j - 1];
      } else {
        pl.vertex = saved;
        pl.add_minor(pl.peel(c, a[j - 1]), a[j - 1]);
      }
    }
    for (int j = 2; j <= o.r(); ++j) sep_exp[o.separator(j)] -= b[j - 2];
    for (const auto& [s, e] : sep_exp) {
      if (is_ancestral(d, s))
        pl.add_minor(pl.peel(s, e), e);
      else
        pl.add_minor(s, e);
    }
  }

  MarkovRatioDecomposition out;
  out.r = o.r();
  out.convention = convention;
  out.grouping = grouping;
  out.dag = d;
  out.vertex_exponents = pl.vertex;
  out.induced_by_order = is_induced_by(d, o);
  for (const auto& [s, e] : pl.minors)
    if (!(e == AffineForm())) out.residuals.push_back({s, e});
  std::sort(out.residuals.begin(), out.residuals.end(), [](const ResidualTerm& x, const ResidualTerm& y) { return x.set < y.set; });
  return out;
}

/// Numeric Markov ratio at a parameter point, in the same convention.
inline double markov_ratio_at(const PerfectOrder& o, const Eigen::MatrixXd& sigma, const std::vector<double>& x, Convention c) {
  auto [a, b] = markov_exponents(o, c);
  std::vector<double> av, bv;
  for (const auto& f : a) av.push_back(f.evaluate(x, o.r()));
  for (const auto& f : b) bv.push_back(f.evaluate(x, o.r()));
  return markov_ratio_numeric(o, sigma, av, bv);
}

}  // namespace lmw
