#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lmwishart/error.hpp"
#include "lmwishart/markov_ratio.hpp"
#include "lmwishart/matrix.hpp"

namespace lmw {

/// Eta: density exp(-tr(Omega U)/2) prod D_jj^{-eta_j/2 + pa_j + 2}.
/// Gamma: density exp(-tr(Omega U)) prod D_jj^{gamma_j}.
enum class ShapeForm { Eta, Gamma };

struct DagWishartParams {
  ShapeForm form = ShapeForm::Gamma;
  Eigen::VectorXd shape;
  Eigen::MatrixXd U;
};

/// Same distribution in the gamma form: gamma_j = -eta_j/2 + pa_j + 2, U -> U/2.
inline DagWishartParams to_gamma_form(const Dag& d, const DagWishartParams& p) {
  if (p.form == ShapeForm::Gamma) return p;
  DagWishartParams out{ShapeForm::Gamma, p.shape, p.U / 2.0};
  for (int j = 1; j <= d.num_vertices(); ++j) out.shape(j - 1) = -p.shape(j - 1) / 2.0 + d.parents(j).size() + 2.0;
  return out;
}

inline DagWishartParams to_eta_form(const Dag& d, const DagWishartParams& p) {
  if (p.form == ShapeForm::Eta) return p;
  DagWishartParams out{ShapeForm::Eta, p.shape, p.U * 2.0};
  for (int j = 1; j <= d.num_vertices(); ++j) out.shape(j - 1) = 2.0 * (d.parents(j).size() + 2.0 - p.shape(j - 1));
  return out;
}

/// Vertices where the normalizing constant does not exist.
inline std::vector<int> out_of_domain_vertices(const Dag& d, const DagWishartParams& p) {
  if (p.shape.size() != d.num_vertices()) throw Error("shape vector has wrong length");
  std::vector<int> bad;
  for (int j = 1; j <= d.num_vertices(); ++j) {
    double pa = d.parents(j).size();
    bool ok = p.form == ShapeForm::Eta ? p.shape(j - 1) > pa + 2.0 : p.shape(j - 1) < pa / 2.0 + 1.0;
    if (!ok) bad.push_back(j);
  }
  return bad;
}

namespace detail {

inline void require_domain(const Dag& d, const DagWishartParams& p) {
  if (p.U.rows() != d.num_vertices() || !is_positive_definite(p.U)) throw NotPositiveDefinite("scale matrix U is not positive definite");
  std::vector<int> bad = out_of_domain_vertices(d, p);
  if (bad.empty()) return;
  std::string list;
  for (int v : bad) list += (list.empty() ? "" : ",") + std::to_string(v);
  throw OutOfDomain("DAG Wishart shape outside its domain at vertices " + list);
}

}  // namespace detail

/// log z_D in the form the parameters are given in.
inline double log_z_dag_wishart(const Dag& d, const DagWishartParams& p) {
  detail::require_domain(d, p);
  const double log_pi = std::log(std::numbers::pi);
  double out = 0;
  for (int j = 1; j <= d.num_vertices(); ++j) {
    VertexSet pa = d.parents(j);
    const double npa = pa.size();
    const double x = p.shape(j - 1);
    const double ld_pa = log_det(p.U, pa);
    if (p.form == ShapeForm::Gamma) {
      const double k = -x + npa / 2.0 + 1.0;
      out += std::lgamma(k) + npa / 2.0 * log_pi - k * std::log(conditional_variance(p.U, j, pa)) - 0.5 * ld_pa;
    } else {
      VertexSet fam = pa;
      fam.insert(j);
      const double k = x / 2.0 - npa / 2.0 - 1.0;
      out += std::lgamma(k) + (x / 2.0 - 1.0) * std::log(2.0) + npa / 2.0 * log_pi + (k - 0.5) * ld_pa - k * log_det(p.U, fam);
    }
  }
  return out;
}

/// Log of the unnormalized density at Omega in P_D.
inline double log_unnormalized_dag_wishart(const Dag& d, const DagWishartParams& p, const Eigen::MatrixXd& omega) {
  CholeskyFactors f = modified_cholesky(omega, d);
  const double tr = (omega * p.U).trace();
  double out = p.form == ShapeForm::Gamma ? -tr : -0.5 * tr;
  for (int j = 1; j <= d.num_vertices(); ++j) {
    double e = p.form == ShapeForm::Gamma ? p.shape(j - 1) : -p.shape(j - 1) / 2.0 + d.parents(j).size() + 2.0;
    out += e * std::log(f.D(j - 1));
  }
  return out;
}

struct DagWishartDraw {
  Eigen::MatrixXd omega;
  /// Unit lower factor with L(i, j) != 0 only for i in pa(j).
  Eigen::MatrixXd L;
  /// Conditional variances D_jj of Omega^{-1}.
  Eigen::VectorXd D;
};

/// One draw with Omega = L diag(1/D) L^T: 1/D_jj ~ Gamma(-gamma_j + pa_j/2 + 1,
/// rate U_{jj|pa}), and given D_jj the column L_{pa,j} ~ N(-U_pa^{-1} U_{pa,j}, D_jj U_pa^{-1} / 2).
template <class Rng>
DagWishartDraw draw_dag_wishart(const Dag& d, const DagWishartParams& params, Rng& rng) {
  DagWishartParams p = to_gamma_form(d, params);
  const int n = d.num_vertices();
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd D(n);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int j = 1; j <= n; ++j) {
    VertexSet pa = d.parents(j);
    const double shape = -p.shape(j - 1) + pa.size() / 2.0 + 1.0;
    const double rate = conditional_variance(p.U, j, pa);
    std::gamma_distribution<double> g(shape, 1.0 / rate);
    double lambda = g(rng);
    // Guard against underflow for tiny shapes.
    lambda = std::max(lambda, std::numeric_limits<double>::min());
    D(j - 1) = 1.0 / lambda;
    if (pa.empty()) continue;
    Eigen::MatrixXd upa = principal(p.U, pa);
    Eigen::LLT<Eigen::MatrixXd> llt(upa);
    Eigen::VectorXd mean = -llt.solve(block(p.U, pa, VertexSet{j}));
    Eigen::VectorXd z(pa.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = n01(rng);
    // cov = (2 lambda U_pa)^{-1}; with U_pa = R^T R (R = L^T), x = R^{-1} z / sqrt(2 lambda).
    Eigen::VectorXd x = llt.matrixU().solve(z) / std::sqrt(2.0 * lambda);
    std::vector<int> idx = indices(pa);
    for (std::size_t k = 0; k < idx.size(); ++k) L(idx[k], j - 1) = mean(static_cast<Eigen::Index>(k)) + x(static_cast<Eigen::Index>(k));
  }
  Eigen::MatrixXd omega = L * D.cwiseInverse().asDiagonal() * L.transpose();
  omega = 0.5 * (omega + omega.transpose());
  return {omega, L, D};
}

/// Deterministic sampler: `count` draws from one seed.
inline std::vector<Eigen::MatrixXd> sample_dag_wishart(const Dag& d, const DagWishartParams& params, std::uint64_t seed, int count = 1) {
  detail::require_domain(d, params);
  std::mt19937_64 rng(seed);
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < count; ++i) out.push_back(draw_dag_wishart(d, params, rng).omega);
  return out;
}

/// log Gamma_p(a), the multivariate gamma function.
inline double log_multivariate_gamma(int p, double a) {
  double out = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
  for (int i = 0; i < p; ++i) out += std::lgamma(a - 0.5 * i);
  return out;
}

/// tr(A B) over the diagonal and edges of g only.
inline double trace_on_E(const UndirectedGraph& g, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double t = 0;
  for (int i = 1; i <= g.num_vertices(); ++i) t += a(i - 1, i - 1) * b(i - 1, i - 1);
  for (auto [u, v] : g.edges()) t += 2.0 * a(u - 1, v - 1) * b(u - 1, v - 1);
  return t;
}

namespace detail {

inline std::vector<double> shifted(const std::vector<double>& x, const PerfectOrder& o, double sign) {
  if (static_cast<int>(x.size()) != 2 * o.r() - 1) throw Error("parameter vector must have 2r - 1 entries");
  std::vector<double> out = x;
  for (int j = 1; j <= o.r(); ++j) out[j - 1] += sign * (o.clique_size(j) + 1) / 2.0;
  for (int j = 2; j <= o.r(); ++j) out[o.r() + j - 2] += sign * (o.separator_size(j) + 1) / 2.0;
  return out;
}

inline void require_in_P_G(const UndirectedGraph& g, const Eigen::MatrixXd& omega, double tol = 1e-10) {
  if (!is_positive_definite(omega)) throw NotPositiveDefinite("Omega is not positive definite");
  const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  for (int i = 1; i <= g.num_vertices(); ++i)
    for (int j = i + 1; j <= g.num_vertices(); ++j)
      if (!g.adjacent(i, j) && std::abs(omega(i - 1, j - 1)) > tol * scale) throw SparsityViolation("Omega has a nonzero entry outside E");
}

}  // namespace detail

/// Type II log density with respect to Lebesgue measure on P_G:
/// -tr(Omega U) + log H_G(alpha + (c+1)/2, beta + (s+1)/2, Omega^{-E}).
/// x holds alpha_1..alpha_r then beta_2..beta_r.
inline double log_density_typeII(const PerfectOrder& o, const std::vector<double>& x, const GIncompleteMatrix& u_e, const Eigen::MatrixXd& omega) {
  const UndirectedGraph& g = u_e.graph();
  detail::require_in_P_G(g, omega);
  Eigen::MatrixXd sigma = omega.llt().solve(Eigen::MatrixXd::Identity(omega.rows(), omega.cols()));
  return -trace_on_E(g, omega, u_e.values()) + markov_ratio_at(o, sigma, x, Convention::TypeII);
}

/// Type I log density with respect to Lebesgue measure on Q_G:
/// -tr(Sigma U^{-1}) + log H_G(alpha - (c+1)/2, beta - (s+1)/2, Sigma^E),
/// with U^{-1} the inverse of the completion of U^E.
inline double log_density_typeI(const PerfectOrder& o, const std::vector<double>& x, const GIncompleteMatrix& u_e, const GIncompleteMatrix& sigma_e) {
  if (!sigma_e.is_partial_pd()) throw NotPartialPD("Sigma^E is not partial positive definite");
  Eigen::MatrixXd u = pd_completion(u_e);
  Eigen::MatrixXd u_inv = u.llt().solve(Eigen::MatrixXd::Identity(u.rows(), u.cols()));
  std::vector<double> xs = detail::shifted(x, o, -1.0);
  std::vector<double> a(xs.begin(), xs.begin() + o.r()), b(xs.begin() + o.r(), xs.end());
  return -trace_on_E(sigma_e.graph(), sigma_e.values(), u_inv) + markov_ratio_numeric(o, sigma_e.values(), a, b);
}

/// The U-dependence of (integral of omega) / H_G(alpha, beta, U^E) left after
/// the D-form has been integrated: prod over residual sets A of det(U_A)^{-eta_A}.
/// Empty when the decomposition is pure.
inline std::vector<ResidualTerm> closed_form_ratio_residuals(const MarkovRatioDecomposition& dec) {
  std::vector<ResidualTerm> out;
  for (const auto& t : dec.residuals) out.push_back({t.set, -t.exponent});
  return out;
}

/// Rendering such as "U_{4}^(-alpha_4 + beta_4 - 1/2)".
inline std::string describe(const std::vector<ResidualTerm>& terms, const std::string& matrix = "U") {
  std::string out;
  for (const auto& t : terms) out += (out.empty() ? "" : " * ") + matrix + "_" + t.set.to_string() + "^(" + t.exponent.to_string() + ")";
  return out.empty() ? "1" : out;
}

/// Gamma-form shape of the DAG Wishart matching a pure Type II decomposition at x.
inline DagWishartParams gamma_params_at(const MarkovRatioDecomposition& dec, const std::vector<double>& x, const Eigen::MatrixXd& U) {
  DagWishartParams p{ShapeForm::Gamma, Eigen::VectorXd(dec.dag.num_vertices()), U};
  for (const auto& [v, e] : dec.vertex_exponents) p.shape(v - 1) = e.evaluate(x, dec.r);
  return p;
}

}  // namespace lmw
