#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "lmwishart/dag_wishart.hpp"
#include "lmwishart/markov_ratio.hpp"

namespace lmw {

inline constexpr int kDefaultSamples = 200000;
inline constexpr double kEssGate = 0.1;
inline constexpr double kProposalScale = 0.7;
inline constexpr double kSecondProposalScale = 0.85;

/// Worker count from LMW_WORKERS, else the hardware concurrency.
inline int default_workers() {
  if (const char* env = std::getenv("LMW_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// SplitMix64 step, used to derive independent chunk seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct McEstimate {
  double log_estimate = std::numeric_limits<double>::quiet_NaN();
  /// Standard error of the estimate divided by the estimate.
  double rel_se = std::numeric_limits<double>::infinity();
  double ess = 0;
  int n = 0;
  int failures = 0;

  /// Standard error on the log scale (delta method).
  double log_se() const { return rel_se; }
  bool ess_ok(double gate = kEssGate) const { return failures == 0 && ess > gate * n; }
};

/// Summary of log weights: log mean, relative s.e. and effective sample size.
inline McEstimate summarize_log_weights(const std::vector<double>& lw, int failures = 0) {
  McEstimate e;
  e.n = static_cast<int>(lw.size()) + failures;
  e.failures = failures;
  if (lw.empty()) return e;
  const double m = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(m)) return e;
  double s1 = 0, s2 = 0;
  for (double v : lw) {
    double w = std::exp(v - m);
    s1 += w;
    s2 += w * w;
  }
  const double n = static_cast<double>(lw.size());
  const double mean = s1 / n;
  const double var = std::max(0.0, (s2 - n * mean * mean) / std::max(1.0, n - 1));
  e.log_estimate = m + std::log(mean);
  e.rel_se = std::sqrt(var / n) / mean;
  e.ess = s1 * s1 / s2;
  return e;
}

/// Runs `n` log-weight evaluations split into a fixed number of seeded chunks,
/// so the result does not depend on the worker count. `eval(rng)` returns a log
/// weight or throws on numerical failure.
inline McEstimate importance_sample(int n, std::uint64_t seed, const std::function<double(std::mt19937_64&)>& eval, int workers = 0) {
  constexpr int kChunks = 64;
  if (workers <= 0) workers = default_workers();
  std::vector<std::vector<double>> parts(kChunks);
  std::vector<int> fails(kChunks, 0);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int c = next++; c < kChunks; c = next++) {
      const int lo = static_cast<int>(static_cast<long long>(n) * c / kChunks);
      const int hi = static_cast<int>(static_cast<long long>(n) * (c + 1) / kChunks);
      std::mt19937_64 rng(mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(c))));
      parts[c].reserve(static_cast<std::size_t>(hi - lo));
      for (int i = lo; i < hi; ++i) {
        try {
          double v = eval(rng);
          if (std::isfinite(v))
            parts[c].push_back(v);
          else
            ++fails[c];
        } catch (const Error&) {
          ++fails[c];
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min(workers, kChunks); ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  std::vector<double> all;
  int failures = 0;
  for (int c = 0; c < kChunks; ++c) {
    all.insert(all.end(), parts[c].begin(), parts[c].end());
    failures += fails[c];
  }
  return summarize_log_weights(all, failures);
}

namespace detail {

inline double log_gamma_pdf(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

/// Log density of a draw from draw_dag_wishart under (gamma, U), with respect
/// to Lebesgue measure on P_D, computed from the gamma and normal densities of
/// the factors and the Jacobian prod_j lambda_j^{pa_j} of Omega = L Lambda L^T.
inline double log_proposal_density(const Dag& d, const DagWishartParams& gp, const DagWishartDraw& draw) {
  double out = 0;
  for (int j = 1; j <= d.num_vertices(); ++j) {
    VertexSet pa = d.parents(j);
    const double lambda = 1.0 / draw.D(j - 1);
    const double shape = -gp.shape(j - 1) + pa.size() / 2.0 + 1.0;
    out += log_gamma_pdf(lambda, shape, conditional_variance(gp.U, j, pa));
    if (pa.empty()) continue;
    Eigen::MatrixXd upa = principal(gp.U, pa);
    Eigen::LLT<Eigen::MatrixXd> llt(upa);
    Eigen::VectorXd mean = -llt.solve(block(gp.U, pa, VertexSet{j}));
    std::vector<int> idx = indices(pa);
    Eigen::VectorXd x(pa.size());
    for (std::size_t k = 0; k < idx.size(); ++k) x(static_cast<Eigen::Index>(k)) = draw.L(idx[k], j - 1);
    Eigen::VectorXd dx = x - mean;
    const double m = pa.size();
    const double quad = 2.0 * lambda * dx.dot(upa * dx);
    const double logdet_prec = m * std::log(2.0 * lambda) + log_det(upa);
    out += -0.5 * m * std::log(2.0 * std::numbers::pi) + 0.5 * logdet_prec - 0.5 * quad;
    out -= m * std::log(lambda);
  }
  return out;
}

/// log det (Omega^{-1})_A = log det Omega_{V - A} - log det Omega, with
/// log det Omega = -sum_j log D_jj. Avoids forming Omega^{-1}, which is badly
/// conditioned for extreme draws.
inline double log_det_sigma_block(const DagWishartDraw& draw, VertexSet a) {
  const int p = static_cast<int>(draw.D.size());
  VertexSet rest = VertexSet::range(p);
  for (int v : a.to_vector()) rest.erase(v);
  double out = draw.D.array().log().sum();
  if (!rest.empty()) {
    Eigen::LLT<Eigen::MatrixXd> llt(principal(draw.omega, rest));
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Omega block is not positive definite");
    out += 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }
  return out;
}

/// Proposal shape: the target shape pulled inside the domain by `margin`.
inline DagWishartParams proposal_for(const Dag& d, const Eigen::VectorXd& gamma, const Eigen::MatrixXd& U, double scale, double margin = 0.25) {
  DagWishartParams gp{ShapeForm::Gamma, gamma, scale * U};
  for (int j = 1; j <= d.num_vertices(); ++j) gp.shape(j - 1) = std::min(gamma(j - 1), d.parents(j).size() / 2.0 + 1.0 - margin);
  return gp;
}

}  // namespace detail

/// Importance-sampling estimate of integral over P_D of exp(-tr(Omega U)) * exp(target(Omega, draw)),
/// with proposal the DAG Wishart (gamma clipped into the domain, scale * U).
inline McEstimate mc_integral(const Dag& d, const Eigen::VectorXd& gamma, const Eigen::MatrixXd& U,
                              const std::function<double(const DagWishartDraw&)>& log_factor, int n, std::uint64_t seed, double scale,
                              int workers = 0) {
  DagWishartParams gp = detail::proposal_for(d, gamma, U, scale);
  return importance_sample(
      n, seed,
      [&](std::mt19937_64& rng) {
        DagWishartDraw draw = draw_dag_wishart(d, gp, rng);
        return -(draw.omega.cwiseProduct(U)).sum() + log_factor(draw) - detail::log_proposal_density(d, gp, draw);
      },
      workers);
}

/// IS estimate of the DAG Wishart normalizing constant in gamma form.
inline McEstimate mc_dag_wishart_constant(const Dag& d, const DagWishartParams& params, int n, std::uint64_t seed, double scale = kProposalScale,
                                          int workers = 0) {
  DagWishartParams p = to_gamma_form(d, params);
  Eigen::VectorXd g = p.shape;
  return mc_integral(
      d, g, p.U,
      [&](const DagWishartDraw& draw) {
        double s = 0;
        for (int j = 0; j < g.size(); ++j) s += g(j) * std::log(draw.D(j));
        return s;
      },
      n, seed, scale, workers);
}

struct B1Check {
  McEstimate first;   // proposal scale kProposalScale
  McEstimate second;  // proposal scale kSecondProposalScale
  /// Every D exponent satisfies gamma_j < pa_j/2 + 1 at the point.
  bool analytic_in_domain = false;
  /// Closed form log z_D(U, gamma) when the point has no residual minors and is in the domain.
  double closed_form = std::numeric_limits<double>::quiet_NaN();
  bool finite = false;
  bool matches_closed_form = false;

  double combined_se() const { return std::hypot(first.log_se(), second.log_se()); }
};

/// Numerical evidence for (B1) at the parameter point x: the Type II integral
/// of exp(-tr(Omega U)) H_G(alpha + (c+1)/2, beta + (s+1)/2, Omega^{-E}) over
/// P_G estimated by importance sampling with two proposal scales. The Markov
/// ratio is evaluated from complementary minors of Omega, not from `dec`.
inline B1Check mc_b1_check(const PerfectOrder& o, const MarkovRatioDecomposition& dec, const std::vector<double>& x, const Eigen::MatrixXd& U,
                           int n, std::uint64_t seed, int workers = 0) {
  if (dec.convention != Convention::TypeII) throw Error("mc_b1_check needs a Type II decomposition");
  const Dag& d = dec.dag;
  DagWishartParams gp = gamma_params_at(dec, x, U);
  B1Check out;
  out.analytic_in_domain = out_of_domain_vertices(d, gp).empty();
  bool residual_free = true;
  for (const auto& t : dec.residuals)
    if (std::abs(t.exponent.evaluate(x, dec.r)) > 1e-12) residual_free = false;
  if (out.analytic_in_domain && residual_free) out.closed_form = log_z_dag_wishart(d, gp);

  auto [a, b] = markov_exponents(o, Convention::TypeII);
  auto log_h = [&](const DagWishartDraw& draw) {
    double v = 0;
    for (int j = 1; j <= o.r(); ++j) v += a[j - 1].evaluate(x, o.r()) * detail::log_det_sigma_block(draw, o.clique(j));
    for (int j = 2; j <= o.r(); ++j) v -= b[j - 2].evaluate(x, o.r()) * detail::log_det_sigma_block(draw, o.separator(j));
    return v;
  };
  out.first = mc_integral(d, gp.shape, U, log_h, n, seed, kProposalScale, workers);
  out.second = mc_integral(d, gp.shape, U, log_h, n, mix_seed(seed + 1), kSecondProposalScale, workers);
  const bool agree = std::abs(out.first.log_estimate - out.second.log_estimate) < 3.0 * out.combined_se();
  out.finite = out.first.ess_ok() && out.second.ess_ok() && agree;
  if (std::isfinite(out.closed_form))
    out.matches_closed_form = std::abs(out.first.log_estimate - out.closed_form) < 3.0 * out.first.log_se();
  return out;
}

struct B2Check {
  /// log(integral / H_G(alpha, beta, U^E)) for each U.
  std::vector<double> values;
  std::vector<double> standard_errors;
  bool closed_form = false;
  double max_spread = 0;
  /// Closed form: 1e-9 relative. Monte Carlo: 3 combined standard errors of the worst pair.
  double threshold = 0;
  bool pass = false;
};

/// Numerical check of (B2) over several scale matrices. Uses log z_D(U, gamma)
/// when the point leaves no residual minor, importance sampling otherwise.
inline B2Check b2_numeric_check(const PerfectOrder& o, const MarkovRatioDecomposition& dec, const std::vector<double>& x,
                                const std::vector<Eigen::MatrixXd>& us, int n, std::uint64_t seed, int workers = 0) {
  if (us.size() < 3) throw Error("b2_numeric_check needs at least three scale matrices");
  B2Check out;
  bool residual_free = true;
  for (const auto& t : dec.residuals)
    if (std::abs(t.exponent.evaluate(x, dec.r)) > 1e-12) residual_free = false;
  DagWishartParams probe = gamma_params_at(dec, x, us.front());
  out.closed_form = residual_free && out_of_domain_vertices(dec.dag, probe).empty();
  for (std::size_t k = 0; k < us.size(); ++k) {
    const Eigen::MatrixXd& u = us[k];
    const double log_h_u = markov_ratio_at(o, u, x, Convention::TypeI);
    if (out.closed_form) {
      out.values.push_back(log_z_dag_wishart(dec.dag, gamma_params_at(dec, x, u)) - log_h_u);
      out.standard_errors.push_back(0);
    } else {
      B1Check b1 = mc_b1_check(o, dec, x, u, n, mix_seed(seed + 17 * k), workers);
      out.values.push_back(b1.first.log_estimate - log_h_u);
      out.standard_errors.push_back(b1.first.log_se());
    }
  }
  out.pass = true;
  double scale = 1.0;
  for (double v : out.values) scale = std::max(scale, std::abs(v));
  out.threshold = out.closed_form ? 1e-9 * scale : 0;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    for (std::size_t j = i + 1; j < out.values.size(); ++j) {
      const double spread = std::abs(out.values[i] - out.values[j]);
      const double limit = out.closed_form ? 1e-9 * scale : 3.0 * std::hypot(out.standard_errors[i], out.standard_errors[j]);
      if (spread > out.max_spread) {
        out.max_spread = spread;
        if (!out.closed_form) out.threshold = limit;
      }
      if (!(spread <= limit)) out.pass = false;
    }
  return out;
}

}  // namespace lmw
