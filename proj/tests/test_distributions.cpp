#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <cmath>
#include <random>

#include "lmwishart/fixtures.hpp"
#include "lmwishart/monte_carlo.hpp"
#include "lmwishart/parameter_sets.hpp"

using namespace lmw;
namespace fx = lmw::fixtures;

namespace {

const AffineForm a4 = alpha(4), a5 = alpha(5), b4 = beta(4), b5 = beta(5);

// int_0^inf w^{k-1} e^{-u w} dw by the trapezoid rule in t = log w.
double log_gamma_integral_by_quadrature(double k, double u) {
  const double lo = -60.0, hi = 8.0;
  const int n = 200000;
  const double h = (hi - lo) / n;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    double t = lo + i * h;
    double f = std::exp(k * t - u * std::exp(t));
    s += (i == 0 || i == n) ? 0.5 * f : f;
  }
  return std::log(s * h);
}

DagWishartParams gamma_params(const Dag& d, std::mt19937_64& rng, const Eigen::MatrixXd& u) {
  std::uniform_real_distribution<double> slack(0.6, 3.0);
  DagWishartParams p{ShapeForm::Gamma, Eigen::VectorXd(d.num_vertices()), u};
  for (int j = 1; j <= d.num_vertices(); ++j) p.shape(j - 1) = d.parents(j).size() / 2.0 + 1.0 - slack(rng);
  return p;
}

std::vector<double> witness(const MarkovRatioDecomposition& dec) {
  auto c = strict_center(integrability_set_from_decomposition(dec));
  if (!c) throw Error("integrability set is empty");
  return to_doubles(c->x);
}

}  // namespace

TEST(DagWishartConstant, SingleVertexEtaForm) {
  Dag d(1, {}, {1});
  DagWishartParams p{ShapeForm::Eta, Eigen::VectorXd::Constant(1, 4.0), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  EXPECT_NEAR(log_z_dag_wishart(d, p), 0.0, 1e-14);
  // exp(-w U / 2) w^{eta/2 - 2} integrated over w > 0.
  for (double eta : {3.0, 4.0, 7.5}) {
    for (double u : {0.5, 2.0, 9.0}) {
      p.shape(0) = eta;
      p.U(0, 0) = u;
      EXPECT_NEAR(log_z_dag_wishart(d, p), log_gamma_integral_by_quadrature(eta / 2 - 1, u / 2), 1e-8) << eta << " " << u;
    }
  }
}

TEST(DagWishartConstant, BoundaryIsOutOfDomain) {
  auto ex = fx::counterexample_one();
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(6, 6);
  DagWishartParams eta{ShapeForm::Eta, Eigen::VectorXd(6), u};
  for (int j = 1; j <= 6; ++j) eta.shape(j - 1) = ex.dag.parents(j).size() + 3.0;
  EXPECT_NO_THROW(log_z_dag_wishart(ex.dag, eta));
  eta.shape(4) = ex.dag.parents(5).size() + 2.0;
  eta.shape(1) = ex.dag.parents(2).size() + 2.0;
  try {
    log_z_dag_wishart(ex.dag, eta);
    FAIL() << "expected OutOfDomain";
  } catch (const OutOfDomain& e) {
    EXPECT_NE(std::string(e.what()).find("2,5"), std::string::npos) << e.what();
  }
  DagWishartParams g = to_gamma_form(ex.dag, eta);
  EXPECT_EQ(out_of_domain_vertices(ex.dag, g), (std::vector<int>{2, 5}));
  EXPECT_THROW(sample_dag_wishart(ex.dag, g, 1), OutOfDomain);
}

TEST(DagWishartConstant, ReparameterizationConsistency) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Dag d = random_perfect_dag(2 + trial % 6, rng);
    DagWishartParams g = gamma_params(d, rng, random_spd(d.num_vertices(), rng));
    DagWishartParams e = to_eta_form(d, g);
    EXPECT_TRUE(out_of_domain_vertices(d, e).empty());
    EXPECT_NEAR(log_z_dag_wishart(d, g), log_z_dag_wishart(d, e), 1e-12 * std::max(1.0, std::abs(log_z_dag_wishart(d, g))));
    DagWishartParams back = to_gamma_form(d, e);
    EXPECT_LT((back.shape - g.shape).norm(), 1e-12);
    EXPECT_LT((back.U - g.U).norm(), 1e-12);
  }
}

TEST(DagWishartConstant, ScaleEquivariance) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    Dag d = random_perfect_dag(2 + trial % 6, rng);
    DagWishartParams g = gamma_params(d, rng, random_spd(d.num_vertices(), rng));
    const double c = 0.3 + trial * 0.1;
    DagWishartParams scaled = g;
    scaled.U *= c;
    // Each vertex contributes (gamma_j - 1 - pa_j) log c.
    double predicted = 0;
    for (int j = 1; j <= d.num_vertices(); ++j) predicted += (g.shape(j - 1) - 1.0 - d.parents(j).size()) * std::log(c);
    EXPECT_NEAR(log_z_dag_wishart(d, scaled) - log_z_dag_wishart(d, g), predicted, 1e-10);
  }
}

TEST(DagWishartConstant, CompleteGraphIsClassicalWishart) {
  std::mt19937_64 rng(13);
  for (int p = 1; p <= 6; ++p) {
    Dag d = transitive_dag_version(fx::complete(p));
    Eigen::MatrixXd u = random_spd(p, rng);
    for (double lambda : {(p - 1) / 2.0 + 0.1, (p + 1) / 2.0, p + 2.5}) {
      DagWishartParams g{ShapeForm::Gamma, Eigen::VectorXd::Constant(p, (p + 1) / 2.0 - lambda), u};
      const double classical = log_multivariate_gamma(p, lambda) - lambda * log_det(u);
      EXPECT_NEAR(log_z_dag_wishart(d, g), classical, 1e-10) << p << " " << lambda;
    }
    // In the DAG domain exactly above the continuous Gindikin threshold.
    for (int q = 1; q <= 4 * p + 4; ++q) {
      Rational l = frac(q, 4);
      DagWishartParams at{ShapeForm::Gamma, Eigen::VectorXd::Constant(p, (p + 1) / 2.0 - l.get_d()), u};
      EXPECT_EQ(out_of_domain_vertices(d, at).empty(), l > frac(p - 1, 2)) << p << " " << l.get_str();
      if (l > frac(p - 1, 2)) EXPECT_TRUE(gindikin_membership(p, l));
    }
  }
}

TEST(DagWishartSampler, PatternAndDeterminism) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Dag d = random_perfect_dag(3 + trial % 5, rng);
    DagWishartParams g = gamma_params(d, rng, random_spd(d.num_vertices(), rng));
    auto draws = sample_dag_wishart(d, g, 1000 + trial, 25);
    auto again = sample_dag_wishart(d, g, 1000 + trial, 25);
    auto other = sample_dag_wishart(d, g, 2000 + trial, 1);
    UndirectedGraph skel = d.skeleton();
    for (std::size_t i = 0; i < draws.size(); ++i) {
      EXPECT_TRUE(is_positive_definite(draws[i]));
      for (int a = 1; a <= d.num_vertices(); ++a)
        for (int b = a + 1; b <= d.num_vertices(); ++b)
          if (!skel.adjacent(a, b)) EXPECT_NEAR(draws[i](a - 1, b - 1), 0.0, 1e-12);
      EXPECT_EQ(draws[i], again[i]);
    }
    EXPECT_NE(draws[0], other[0]);
  }
}

TEST(DagWishartSampler, ConditionalVarianceGoodnessOfFit) {
  auto ex = fx::counterexample_one();
  std::mt19937_64 rng(22);
  DagWishartParams g = gamma_params(ex.dag, rng, random_spd(6, rng));
  const int n = 10000, bins = 20;
  auto draws = sample_dag_wishart(ex.dag, g, 77, n);
  boost::math::chi_squared chi(bins - 1);
  for (int j = 1; j <= 6; ++j) {
    VertexSet pa = ex.dag.parents(j);
    boost::math::gamma_distribution<double> law(-g.shape(j - 1) + pa.size() / 2.0 + 1.0, 1.0 / conditional_variance(g.U, j, pa));
    std::vector<double> edges;
    for (int b = 1; b < bins; ++b) edges.push_back(boost::math::quantile(law, static_cast<double>(b) / bins));
    std::vector<int> counts(bins, 0);
    for (const auto& omega : draws) {
      double lambda = 1.0 / modified_cholesky(omega, ex.dag).D(j - 1);
      counts[std::upper_bound(edges.begin(), edges.end(), lambda) - edges.begin()]++;
    }
    double stat = 0, expected = static_cast<double>(n) / bins;
    for (int c : counts) stat += (c - expected) * (c - expected) / expected;
    // Bonferroni over the six coordinates at family level 0.01.
    EXPECT_GT(6.0 * boost::math::cdf(boost::math::complement(chi, stat)), 0.01) << "vertex " << j;
  }
}

TEST(DagWishartSampler, CompleteGraphMeanIsLambdaUInverse) {
  std::mt19937_64 rng(23);
  const int p = 4, n = 40000;
  const double lambda = 3.0;
  Dag d = transitive_dag_version(fx::complete(p));
  Eigen::MatrixXd u = random_spd(p, rng);
  DagWishartParams g{ShapeForm::Gamma, Eigen::VectorXd::Constant(p, (p + 1) / 2.0 - lambda), u};
  auto draws = sample_dag_wishart(d, g, 5, n);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(p, p), sq = Eigen::MatrixXd::Zero(p, p);
  for (const auto& w : draws) {
    mean += w;
    sq += w.cwiseProduct(w);
  }
  mean /= n;
  Eigen::MatrixXd se = ((sq / n - mean.cwiseProduct(mean)) / n).cwiseSqrt();
  Eigen::MatrixXd target = lambda * u.inverse();
  for (int i = 0; i < p; ++i)
    for (int k = 0; k < p; ++k) EXPECT_LT(std::abs(mean(i, k) - target(i, k)), 4.0 * se(i, k)) << i << "," << k;
}

TEST(ImportanceSampling, ReproducesDagWishartConstant) {
  std::mt19937_64 rng(31);
  auto check = [&](const Dag& d) {
    DagWishartParams g = gamma_params(d, rng, random_spd(d.num_vertices(), rng));
    McEstimate e = mc_dag_wishart_constant(d, g, 40000, 99);
    const double exact = log_z_dag_wishart(d, g);
    EXPECT_TRUE(e.ess_ok());
    EXPECT_LT(std::abs(e.log_estimate - exact), 3.0 * e.log_se() + 1e-12) << e.log_estimate << " vs " << exact << " se " << e.log_se();
  };
  check(fx::three_path().dag);
  check(fx::counterexample_one().dag);
  check(transitive_dag_version(fx::complete(4)));
}

TEST(ImportanceSampling, IndependentOfWorkerCount) {
  Dag d = fx::three_path().dag;
  DagWishartParams g{ShapeForm::Gamma, Eigen::VectorXd::Constant(3, -0.5), Eigen::MatrixXd::Identity(3, 3)};
  McEstimate one = mc_dag_wishart_constant(d, g, 5000, 3, kProposalScale, 1);
  McEstimate many = mc_dag_wishart_constant(d, g, 5000, 3, kProposalScale, 7);
  EXPECT_EQ(one.log_estimate, many.log_estimate);
  EXPECT_EQ(one.ess, many.ess);
}

TEST(TypeIIDensity, MeasureOffsetCancels) {
  auto ex = fx::counterexample_one();
  std::mt19937_64 rng(41);
  std::vector<double> x;
  for (int j = 1; j <= ex.order.r(); ++j) x.push_back(-(ex.order.clique_size(j) + 1) / 2.0);
  for (int j = 2; j <= ex.order.r(); ++j) x.push_back(-(ex.order.separator_size(j) + 1) / 2.0);
  Eigen::MatrixXd u = random_spd(6, rng);
  Eigen::MatrixXd omega = sample_dag_wishart(ex.dag, {ShapeForm::Gamma, Eigen::VectorXd::Zero(6), u}, 3).front();
  EXPECT_NEAR(log_density_typeII(ex.order, x, GIncompleteMatrix(ex.graph, u), omega), -(omega * u).trace(), 1e-10);
}

TEST(TypeIIDensity, AgreesWithDecomposition) {
  auto ex = fx::counterexample_one();
  auto dec = decompose_markov_ratio(ex.order, ex.dag);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(7);
    for (auto& v : x) v = unif(rng);
    Eigen::MatrixXd u = random_spd(6, rng);
    Eigen::MatrixXd omega = sample_dag_wishart(ex.dag, {ShapeForm::Gamma, Eigen::VectorXd::Zero(6), u}, trial).front();
    Eigen::MatrixXd sigma = omega.inverse();
    double direct = log_density_typeII(ex.order, x, GIncompleteMatrix(ex.graph, u), omega);
    EXPECT_NEAR(direct, -(omega * u).trace() + dec.evaluate_log(sigma, x), 1e-8 * std::max(1.0, std::abs(direct)));
  }
  // On the residual-free set the density is the DAG Wishart kernel.
  std::vector<double> w = witness(dec);
  Eigen::MatrixXd u = random_spd(6, rng);
  Eigen::MatrixXd omega = sample_dag_wishart(ex.dag, {ShapeForm::Gamma, Eigen::VectorXd::Zero(6), u}, 5).front();
  EXPECT_NEAR(log_density_typeII(ex.order, w, GIncompleteMatrix(ex.graph, u), omega),
              log_unnormalized_dag_wishart(ex.dag, gamma_params_at(dec, w, u), omega), 1e-9);
}

TEST(TypeIIDensity, RejectsMatricesOutsidePG) {
  auto ex = fx::counterexample_one();
  std::vector<double> x(7, 0.0);
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(6, 6);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(6, 6);
  omega(0, 5) = omega(5, 0) = 0.1;
  EXPECT_FALSE(ex.graph.adjacent(1, 6));
  EXPECT_THROW(log_density_typeII(ex.order, x, GIncompleteMatrix(ex.graph, u), omega), SparsityViolation);
  EXPECT_THROW(log_density_typeII(ex.order, x, GIncompleteMatrix(ex.graph, u), -Eigen::MatrixXd::Identity(6, 6)), NotPositiveDefinite);
  // Finite at the completion inverse of U^E with a point of B_P.
  auto center = strict_center(set_BP(ex.order));
  ASSERT_TRUE(center);
  std::mt19937_64 rng(4);
  GIncompleteMatrix ue(ex.graph, random_spd(6, rng));
  Eigen::MatrixXd k = pd_completion(ue).inverse();
  k = project_to_E(k, ex.graph).values();
  EXPECT_TRUE(std::isfinite(log_density_typeII(ex.order, to_doubles(center->x), ue, k)));
}

TEST(TypeIDensity, MeasureExponentsLeaveExponential) {
  auto ex = fx::counterexample_two();
  std::mt19937_64 rng(51);
  std::vector<double> x;
  for (int j = 1; j <= ex.order.r(); ++j) x.push_back((ex.order.clique_size(j) + 1) / 2.0);
  for (int j = 2; j <= ex.order.r(); ++j) x.push_back((ex.order.separator_size(j) + 1) / 2.0);
  GIncompleteMatrix ue(ex.graph, random_spd(8, rng)), se(ex.graph, random_spd(8, rng));
  Eigen::MatrixXd uinv = pd_completion(ue).inverse();
  EXPECT_NEAR(log_density_typeI(ex.order, x, ue, se), -trace_on_E(ex.graph, se.values(), uinv), 1e-10);
}

TEST(TypeIDensity, MatchesJacobianRewriting) {
  // H(alpha - (c+1)/2, beta - (s+1)/2) = H(alpha, beta) * prod_j D_j^{-(pa_j+2)/2} det(Sigma_pa)^{-1/2}.
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (auto ex : {fx::counterexample_one(), fx::counterexample_two(), fx::four_path()}) {
    Dag d = dag_induced_by_order(ex.order);
    auto dec = decompose_markov_ratio(ex.order, d, Convention::TypeI);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(2 * ex.order.r() - 1));
      for (auto& v : x) v = unif(rng);
      GIncompleteMatrix ue(ex.graph, random_spd(ex.graph.num_vertices(), rng));
      GIncompleteMatrix se(ex.graph, random_spd(ex.graph.num_vertices(), rng));
      Eigen::MatrixXd sigma = pd_completion(se);
      double rewritten = -trace_on_E(ex.graph, se.values(), pd_completion(ue).inverse()) + dec.evaluate_log(sigma, x);
      for (int v = 1; v <= d.num_vertices(); ++v) {
        VertexSet pa = d.parents(v);
        rewritten -= 0.5 * (pa.size() + 2) * std::log(conditional_variance(sigma, v, pa)) + 0.5 * log_det(sigma, pa);
      }
      const double direct = log_density_typeI(ex.order, x, ue, se);
      EXPECT_LE(std::abs(direct - rewritten), 1e-9 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(TypeIDensity, RejectsNonPartialPD) {
  auto ex = fx::four_path();
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
  bad(0, 1) = bad(1, 0) = 2.0;
  EXPECT_THROW(log_density_typeI(ex.order, std::vector<double>(5, 0.0), GIncompleteMatrix(ex.graph, Eigen::MatrixXd::Identity(4, 4)),
                                 GIncompleteMatrix(ex.graph, bad)),
               NotPartialPD);
}

TEST(ClosedFormRatio, FirstCounterexample) {
  auto ex = fx::counterexample_one();
  auto dec = decompose_markov_ratio(ex.order, ex.dag);
  auto terms = closed_form_ratio_residuals(dec);
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_EQ(terms[0].set, VertexSet{4});
  EXPECT_EQ(terms[0].exponent, -(a4 - b4 + frac(1, 2)));
  auto center = strict_center(integrability_set_from_decomposition(dec));
  ASSERT_TRUE(center);
  EXPECT_EQ(terms[0].exponent.evaluate(center->x, dec.r), 0);
}

TEST(ClosedFormRatio, SecondCounterexampleTypeI) {
  auto ex = fx::counterexample_two();
  auto dec = decompose_markov_ratio(ex.order, ex.dag, Convention::TypeI);
  auto terms = closed_form_ratio_residuals(dec);
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_EQ(terms[0].set, VertexSet{6});
  EXPECT_EQ(terms[0].exponent, -(a4 + a5 - b4 - b5));
  auto center = strict_center(integrability_set_from_decomposition(dec));
  ASSERT_TRUE(center);
  EXPECT_EQ(terms[0].exponent.evaluate(center->x, dec.r), 0);
}

TEST(ClosedFormRatio, HomogeneousGraphsHaveNoResidual) {
  for (auto ex : {fx::three_path(), fx::two_triangles()}) {
    for (Convention c : {Convention::TypeI, Convention::TypeII}) {
      auto dec = decompose_markov_ratio(ex.order, transitive_dag_version(ex.graph), c);
      EXPECT_TRUE(closed_form_ratio_residuals(dec).empty());
      EXPECT_EQ(describe(closed_form_ratio_residuals(dec)), "1");
    }
  }
}

TEST(B2Check, ClosedFormIsIndependentOfU) {
  auto ex = fx::counterexample_one();
  auto dec = decompose_markov_ratio(ex.order, ex.dag);
  std::vector<double> w = witness(dec);
  std::mt19937_64 rng(61);
  std::vector<Eigen::MatrixXd> us;
  for (int k = 0; k < 5; ++k) us.push_back(pd_completion(GIncompleteMatrix(ex.graph, random_spd(6, rng))));
  B2Check b2 = b2_numeric_check(ex.order, dec, w, us, 0, 1);
  EXPECT_TRUE(b2.closed_form);
  EXPECT_TRUE(b2.pass);
  EXPECT_LE(b2.max_spread, 1e-9);
}

TEST(B2Check, HomogeneousThreePath) {
  auto ex = fx::three_path();
  auto dec = decompose_markov_ratio(ex.order, ex.dag);
  std::mt19937_64 rng(62);
  std::vector<Eigen::MatrixXd> us;
  for (int k = 0; k < 4; ++k) us.push_back(random_spd(3, rng));
  for (const auto& x : sample_strict_points(integrability_set_from_decomposition(dec), 5, rng)) {
    B2Check b2 = b2_numeric_check(ex.order, dec, to_doubles(x), us, 0, 1);
    EXPECT_TRUE(b2.closed_form && b2.pass) << b2.max_spread;
  }
}

TEST(B2Check, OffConstraintDependsOnU) {
  auto ex = fx::counterexample_one();
  auto dec = decompose_markov_ratio(ex.order, ex.dag);
  std::vector<double> w = witness(dec);
  // beta_4 up by 1: residual exponent on Sigma_44 becomes -1.
  w[ex.order.r() + 2] += 1.0;
  // Diagonal congruences leave the ratio unchanged, so vary the correlation
  // of vertex 4 with its parents instead.
  std::vector<Eigen::MatrixXd> us;
  for (double t : {0.0, 0.6, 0.95}) {
    Eigen::MatrixXd u = Eigen::MatrixXd::Identity(6, 6);
    for (int i : {3, 4, 5})
      for (int k : {3, 4, 5})
        if (i != k) u(i, k) = t;
    us.push_back(u);
  }
  B2Check b2 = b2_numeric_check(ex.order, dec, w, us, 40000, 5);
  EXPECT_FALSE(b2.closed_form);
  EXPECT_FALSE(b2.pass) << "spread " << b2.max_spread << " threshold " << b2.threshold;
}

TEST(B1Check, WitnessIsFiniteAndMatchesClosedForm) {
  auto ex = fx::counterexample_one();
  auto dec = decompose_markov_ratio(ex.order, ex.dag);
  std::vector<double> w = witness(dec);
  std::mt19937_64 rng(71);
  Eigen::MatrixXd u = pd_completion(GIncompleteMatrix(ex.graph, random_spd(6, rng)));
  B1Check b1 = mc_b1_check(ex.order, dec, w, u, 40000, 8);
  EXPECT_TRUE(b1.analytic_in_domain);
  EXPECT_TRUE(b1.finite) << b1.first.ess << " " << b1.second.ess;
  EXPECT_TRUE(b1.matches_closed_form) << b1.first.log_estimate << " vs " << b1.closed_form;
}

TEST(B1Check, DivergentPointIsFlagged) {
  auto ex = fx::counterexample_one();
  auto dec = decompose_markov_ratio(ex.order, ex.dag);
  std::vector<double> w = witness(dec);
  w[0] = 1.0;
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(6, 6);
  B1Check b1 = mc_b1_check(ex.order, dec, w, u, 40000, 9);
  EXPECT_FALSE(b1.analytic_in_domain);
  EXPECT_FALSE(b1.finite);
}

TEST(B1Check, ClassicalWishartConstant) {
  const int p = 3;
  UndirectedGraph g = fx::complete(p);
  PerfectOrder o = derive_order(g, {VertexSet::range(p)});
  auto dec = decompose_markov_ratio(o, transitive_dag_version(g));
  std::mt19937_64 rng(72);
  Eigen::MatrixXd u = random_spd(p, rng);
  for (double lambda : {1.25, 2.0, 4.0}) {
    // H = det Sigma^{alpha + (p+1)/2} = det Omega^{lambda - (p+1)/2} at alpha = -lambda.
    std::vector<double> x{-lambda};
    B1Check b1 = mc_b1_check(o, dec, x, u, 40000, 10);
    const double classical = log_multivariate_gamma(p, lambda) - lambda * log_det(u);
    EXPECT_TRUE(b1.finite);
    EXPECT_LT(std::abs(b1.first.log_estimate - classical), 3.0 * b1.first.log_se()) << lambda;
  }
}
