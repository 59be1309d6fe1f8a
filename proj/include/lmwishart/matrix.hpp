#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lmwishart/chordal.hpp"
#include "lmwishart/dag_versions.hpp"
#include "lmwishart/error.hpp"
#include "lmwishart/graph.hpp"

namespace lmw {

/// Dense symmetric matrix indexed by vertex label minus one.
using SymMatrix = Eigen::MatrixXd;

/// Relative pivot threshold of the positive-definiteness test.
inline constexpr double kPdPivotTolerance = 1e-12;

/// Zero-based indices of a vertex set.
inline std::vector<int> indices(VertexSet s) {
  std::vector<int> out;
  for (int v : s.to_vector()) out.push_back(v - 1);
  return out;
}

inline Eigen::MatrixXd block(const Eigen::MatrixXd& m, VertexSet rows, VertexSet cols) {
  return m(indices(rows), indices(cols));
}

inline Eigen::MatrixXd principal(const Eigen::MatrixXd& m, VertexSet a) { return block(m, a, a); }

/// Cholesky succeeds with every pivot above tol * trace / p.
inline bool is_positive_definite(const Eigen::MatrixXd& m) {
  const Eigen::Index p = m.rows();
  if (p == 0) return true;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff())) return false;
  double trace = m.trace();
  if (!(trace > 0)) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
  double floor = kPdPivotTolerance * trace / static_cast<double>(p);
  for (Eigen::Index i = 0; i < p; ++i)
    if (!(diag(i) * diag(i) > floor)) return false;
  return true;
}

/// log det of a positive definite matrix; empty matrices give 0.
inline double log_det(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  if (!is_positive_definite(m)) throw NotPositiveDefinite();
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

inline double log_det(const Eigen::MatrixXd& m, VertexSet a) { return log_det(principal(m, a)); }

/// Sigma_{jj} - Sigma_{j,A} Sigma_A^{-1} Sigma_{A,j}; only entries on {j} ∪ A are read.
inline double conditional_variance(const Eigen::MatrixXd& sigma, int j, VertexSet a) {
  double s = sigma(j - 1, j - 1);
  if (a.empty()) return s;
  Eigen::VectorXd c = block(sigma, a, VertexSet{j});
  return s - c.dot(principal(sigma, a).llt().solve(c));
}

/// Unit lower-triangular L (in the DAG's parent-compatible numbering) and the
/// conditional variances D, indexed by vertex label minus one.
struct CholeskyFactors {
  Eigen::MatrixXd L;
  Eigen::VectorXd D;

  /// L diag(1/D) L^T.
  Eigen::MatrixXd precision() const { return L * D.cwiseInverse().asDiagonal() * L.transpose(); }
};

/// Factors of Sigma in PD_D: D_jj = Sigma_{jj|pa(j)}, L_{pa(j),j} = -Sigma_pa^{-1} Sigma_{pa,j}.
/// Only entries of Sigma on families of d are read.
inline CholeskyFactors cholesky_from_covariance(const Eigen::MatrixXd& sigma, const Dag& d) {
  const int p = d.num_vertices();
  CholeskyFactors f{Eigen::MatrixXd::Identity(p, p), Eigen::VectorXd(p)};
  for (int j = 1; j <= p; ++j) {
    VertexSet pa = d.parents(j);
    f.D(j - 1) = conditional_variance(sigma, j, pa);
    if (!(f.D(j - 1) > 0)) throw NotPositiveDefinite("non-positive conditional variance at vertex " + std::to_string(j));
    if (!pa.empty()) {
      Eigen::VectorXd beta = principal(sigma, pa).llt().solve(Eigen::VectorXd(block(sigma, pa, VertexSet{j})));
      std::vector<int> idx = indices(pa);
      for (std::size_t k = 0; k < idx.size(); ++k) f.L(idx[k], j - 1) = -beta(static_cast<Eigen::Index>(k));
    }
  }
  return f;
}

/// Omega = L Lambda L^T with Lambda = D^{-1}. Throws SparsityViolation when
/// Omega does not factor over the parent sets of d.
inline CholeskyFactors modified_cholesky(const Eigen::MatrixXd& omega, const Dag& d, double tol = 1e-8) {
  if (omega.rows() != d.num_vertices()) throw Error("dimension mismatch between matrix and DAG");
  if (!is_positive_definite(omega)) throw NotPositiveDefinite();
  Eigen::MatrixXd sigma = omega.llt().solve(Eigen::MatrixXd::Identity(omega.rows(), omega.cols()));
  CholeskyFactors f = cholesky_from_covariance(sigma, d);
  double err = (f.precision() - omega).cwiseAbs().maxCoeff();
  if (err > tol * std::max(1.0, omega.cwiseAbs().maxCoeff()))
    throw SparsityViolation("precision matrix does not factor over the DAG (max deviation " + std::to_string(err) + ")");
  return f;
}

/// Partial matrix specified on the edges and diagonal of a graph. Entries
/// outside E are stored as zero and never read.
class GIncompleteMatrix {
 public:
  GIncompleteMatrix() = default;
  GIncompleteMatrix(UndirectedGraph g, const Eigen::MatrixXd& full) : g_(std::move(g)), values_(Eigen::MatrixXd::Zero(full.rows(), full.cols())) {
    if (full.rows() != g_.num_vertices() || full.cols() != g_.num_vertices()) throw Error("dimension mismatch between matrix and graph");
    for (int i = 1; i <= g_.num_vertices(); ++i) {
      values_(i - 1, i - 1) = full(i - 1, i - 1);
      for (int j : g_.neighbors(i).to_vector()) values_(i - 1, j - 1) = 0.5 * (full(i - 1, j - 1) + full(j - 1, i - 1));
    }
  }

  const UndirectedGraph& graph() const { return g_; }
  int p() const { return g_.num_vertices(); }
  double at(int i, int j) const {
    if (i != j && !g_.adjacent(i, j)) throw Error("entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not in E");
    return values_(i - 1, j - 1);
  }
  /// Dense storage; only principal blocks on complete sets are meaningful.
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd principal_block(VertexSet a) const {
    if (!g_.is_complete(a)) throw Error("vertex set " + a.to_string() + " is not complete");
    return principal(values_, a);
  }

  bool is_partial_pd() const {
    for (VertexSet c : maximal_cliques(g_))
      if (!is_positive_definite(principal(values_, c))) return false;
    return true;
  }

 private:
  UndirectedGraph g_;
  Eigen::MatrixXd values_;
};

/// The unique Sigma in PD_G agreeing with gamma on E, filled in along a perfect order.
inline Eigen::MatrixXd pd_completion(const GIncompleteMatrix& gamma) {
  if (!gamma.is_partial_pd()) throw NotPartialPD("some clique block is not positive definite");
  const UndirectedGraph& g = gamma.graph();
  PerfectOrder o = make_order_unchecked(g.num_vertices(), maximal_cliques(g));
  Eigen::MatrixXd sigma = gamma.values();
  for (int j = 2; j <= o.r(); ++j) {
    VertexSet r = o.residual(j), s = o.separator(j), k = o.history(j - 1) - s;
    if (k.empty() || r.empty()) continue;
    Eigen::MatrixXd fill = Eigen::MatrixXd::Zero(r.size(), k.size());
    if (!s.empty()) fill = block(sigma, r, s) * principal(sigma, s).llt().solve(block(sigma, s, k));
    std::vector<int> ri = indices(r), ki = indices(k);
    sigma(ri, ki) = fill;
    sigma(ki, ri) = fill.transpose();
  }
  return sigma;
}

/// Omega^{-1} restricted to E.
inline GIncompleteMatrix project_to_E(const Eigen::MatrixXd& omega, const UndirectedGraph& g) {
  if (!is_positive_definite(omega)) throw NotPositiveDefinite();
  Eigen::MatrixXd sigma = omega.llt().solve(Eigen::MatrixXd::Identity(omega.rows(), omega.cols()));
  return GIncompleteMatrix(g, sigma);
}

/// log H = sum_j a_j log det Sigma_{C_j} - sum_{j>=2} b_j log det Sigma_{S_j};
/// b[0] multiplies S_2.
inline double markov_ratio_numeric(const PerfectOrder& o, const Eigen::MatrixXd& sigma_e, const std::vector<double>& a, const std::vector<double>& b) {
  if (static_cast<int>(a.size()) != o.r() || static_cast<int>(b.size()) != o.r() - 1) throw Error("exponent vectors have wrong length");
  double out = 0.0;
  try {
    for (int j = 1; j <= o.r(); ++j) out += a[j - 1] * log_det(sigma_e, o.clique(j));
    for (int j = 2; j <= o.r(); ++j) out -= b[j - 2] * log_det(sigma_e, o.separator(j));
  } catch (const NotPositiveDefinite&) {
    throw NotPartialPD("a clique or separator block is not positive definite");
  }
  return out;
}

inline double markov_ratio_numeric(const PerfectOrder& o, const GIncompleteMatrix& sigma_e, const std::vector<double>& a, const std::vector<double>& b) {
  return markov_ratio_numeric(o, sigma_e.values(), a, b);
}

struct LogPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error() const { return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0); }
};

/// Clique/separator product with exponents -(|C|+1)/2, -(|S|+1)/2 against
/// prod_j Sigma_{jj|pa}^{-(pa_j+2)/2} det(Sigma_pa)^{-1/2}, both as logs.
inline LogPair jacobian_identity_check(const Dag& d, const Eigen::MatrixXd& sigma) {
  if (!is_perfect_dag(d)) throw NotPerfectDag();
  UndirectedGraph g = d.skeleton();
  PerfectOrder o = make_order_unchecked(g.num_vertices(), maximal_cliques(g));
  LogPair out;
  for (int j = 1; j <= o.r(); ++j) out.lhs -= 0.5 * (o.clique_size(j) + 1) * log_det(sigma, o.clique(j));
  for (int j = 2; j <= o.r(); ++j) out.lhs += 0.5 * (o.separator_size(j) + 1) * log_det(sigma, o.separator(j));
  for (int v = 1; v <= d.num_vertices(); ++v) {
    VertexSet pa = d.parents(v);
    out.rhs -= 0.5 * (pa.size() + 2) * std::log(conditional_variance(sigma, v, pa));
    out.rhs -= 0.5 * log_det(sigma, pa);
  }
  return out;
}

/// Random symmetric positive definite matrix W W^T / p + eps I with Gaussian W.
template <class Rng>
Eigen::MatrixXd random_spd(int p, Rng& rng, double ridge = 0.5) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::MatrixXd w(p, p + 2);
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index k = 0; k < w.cols(); ++k) w(i, k) = n01(rng);
  return w * w.transpose() / static_cast<double>(p + 2) + ridge * Eigen::MatrixXd::Identity(p, p);
}

/// Random Sigma in PD_G (completion of a random partial PD matrix).
template <class Rng>
Eigen::MatrixXd random_sigma_in_pd_g(const UndirectedGraph& g, Rng& rng) {
  return pd_completion(GIncompleteMatrix(g, random_spd(g.num_vertices(), rng)));
}

/// Random perfect DAG on p vertices: a random chordal graph oriented along a
/// reversed perfect elimination ordering, with random labels.
template <class Rng>
Dag random_perfect_dag(int p, Rng& rng, double edge_prob = 0.5) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  // Build by attaching each new vertex to a random complete subset of earlier ones.
  UndirectedGraph g(p);
  for (int v = 2; v <= p; ++v) {
    std::vector<VertexSet> cl = maximal_cliques(g.induced(VertexSet::range(v - 1)));
    VertexSet base = cl[std::uniform_int_distribution<std::size_t>(0, cl.size() - 1)(rng)];
    for (int w : base.to_vector())
      if (u01(rng) < edge_prob) g.add_edge(w, v);
  }
  std::vector<int> perm(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) perm[i] = i + 1;
  std::shuffle(perm.begin(), perm.end(), rng);
  UndirectedGraph h(p);
  for (auto [a, b] : g.edges()) h.add_edge(perm[a - 1], perm[b - 1]);
  // Attachment order v = 1..p gives each vertex a complete set of earlier
  // neighbours; orienting earlier -> later keeps the parents complete.
  std::vector<std::pair<int, int>> arcs;
  for (auto [a, b] : g.edges()) arcs.emplace_back(perm[a - 1], perm[b - 1]);
  return Dag(p, arcs);
}

}  // namespace lmw
