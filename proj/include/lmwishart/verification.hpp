#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "lmwishart/chordal.hpp"
#include "lmwishart/dag_versions.hpp"
#include "lmwishart/dag_wishart.hpp"
#include "lmwishart/enumeration.hpp"
#include "lmwishart/homogeneous.hpp"
#include "lmwishart/monte_carlo.hpp"
#include "lmwishart/parameter_sets.hpp"

namespace lmw {

inline constexpr std::uint64_t kDefaultSeed = 20240501;
inline constexpr int kDefaultSearchCap = 8;

struct VerifyOptions {
  /// Monte Carlo budget per integral; 0 skips the numeric checks.
  int samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  /// Scale matrices for the U-independence check.
  int scale_matrices = 5;
  int workers = 0;
};

enum class Verdict { Refuted, Consistent, Inapplicable, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Refuted: return "refuted";
    case Verdict::Consistent: return "consistent";
    case Verdict::Inapplicable: return "inapplicable";
    default: return "inconclusive";
  }
}

struct CounterexampleReport {
  Convention convention = Convention::TypeII;
  UndirectedGraph graph;
  PerfectOrder order;
  Dag dag{1};
  int r = 0;
  AncestralSeparators ancestral;
  int conjectured_dimension = 0;
  /// Dimension with every non-ancestral separator minor kept whole.
  std::optional<int> achieved_dimension;
  /// Dimension after peeling leftover minors as far as the DAG allows.
  std::optional<int> refined_dimension;
  MarkovRatioDecomposition decomposition;
  MarkovRatioDecomposition refined_decomposition;
  LinearConstraintSet constraints;
  LinearConstraintSet refined_constraints;
  /// Which set the witness was drawn from: "achieved" or "refined".
  std::string witness_set;
  std::optional<RationalVector> witness;
  /// The witness lies outside B_P (Type II) or A_P (Type I) for every perfect order.
  bool witness_outside_identified = false;
  int orders_checked = 0;
  /// U-residuals of the closed-form ratio for the witness set's decomposition.
  std::vector<ResidualTerm> residuals;
  bool residuals_vanish = false;
  std::optional<B1Check> b1;
  std::optional<B2Check> b2;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;

  bool refuted() const { return verdict == Verdict::Refuted; }
  int dimension() const { return std::max(achieved_dimension.value_or(-1), refined_dimension.value_or(-1)); }
};

/// B_P (Type II) or A_P (Type I) for every perfect order of the graph of
/// `reference`, renamed to the parameters of `reference`.
inline std::vector<LinearConstraintSet> identified_sets(const PerfectOrder& reference, Convention c) {
  std::vector<LinearConstraintSet> out;
  for (const auto& o : enumerate_perfect_orders(graph_of(reference))) {
    LinearConstraintSet cs = c == Convention::TypeII ? set_BP(o) : set_AP(o);
    out.push_back(rename_to_reference(cs, o, reference));
  }
  return out;
}

namespace detail {

inline bool same_graph(const UndirectedGraph& a, const UndirectedGraph& b) {
  if (a.num_vertices() != b.num_vertices()) return false;
  for (int v = 1; v <= a.num_vertices(); ++v)
    if (!(a.neighbors(v) == b.neighbors(v))) return false;
  return true;
}

template <class Rng>
std::vector<Eigen::MatrixXd> random_scales(const UndirectedGraph& g, int count, Rng& rng) {
  std::vector<Eigen::MatrixXd> out;
  for (int k = 0; k < count; ++k) out.push_back(pd_completion(GIncompleteMatrix(g, random_spd(g.num_vertices(), rng))));
  return out;
}

}  // namespace detail

/// Runs the counterexample pipeline for LM (II) (Type II, sets B_P) or LM (I)
/// (Type I, sets A_P) on the DAG version induced by `o` with S_2 ancestral.
inline CounterexampleReport verify_counterexample(const UndirectedGraph& g, const PerfectOrder& o, Convention convention,
                                                  const VerifyOptions& opts = {}) {
  if (!is_decomposable(g).chordal) throw NotDecomposable("graph is not decomposable");
  if (!detail::same_graph(graph_of(o), g)) throw NotPerfectOrder("order does not cover exactly the cliques of the graph");
  CounterexampleReport rep;
  rep.convention = convention;
  rep.graph = g;
  rep.order = o;
  rep.r = o.r();
  rep.conjectured_dimension = o.r() + 1;
  if (o.r() == 1) {
    rep.dag = transitive_dag_version(g);
    rep.verdict = Verdict::Inapplicable;
    rep.note = "complete graph: no separators, the method does not apply";
    return rep;
  }
  rep.dag = dag_induced_by_order(o, true);
  rep.ancestral = ancestral_separators(o, rep.dag);
  rep.decomposition = decompose_markov_ratio(o, rep.dag, convention, Grouping::PerSeparator);
  rep.refined_decomposition = decompose_markov_ratio(o, rep.dag, convention, Grouping::Reduced);
  rep.constraints = integrability_set_from_decomposition(rep.decomposition);
  rep.refined_constraints = integrability_set_from_decomposition(rep.refined_decomposition);
  rep.achieved_dimension = feasible_dimension(rep.constraints);
  rep.refined_dimension = feasible_dimension(rep.refined_constraints);

  const bool use_refined = rep.refined_dimension.value_or(-1) > rep.achieved_dimension.value_or(-1);
  rep.witness_set = use_refined ? "refined" : "achieved";
  const LinearConstraintSet& cs = use_refined ? rep.refined_constraints : rep.constraints;
  const MarkovRatioDecomposition& dec = use_refined ? rep.refined_decomposition : rep.decomposition;
  rep.residuals = closed_form_ratio_residuals(dec);

  if (rep.dimension() <= rep.conjectured_dimension) {
    rep.verdict = Verdict::Consistent;
    rep.note = "integrability set dimension does not exceed r + 1";
    if (auto c = strict_center(cs)) rep.witness = c->x;
    return rep;
  }

  // A point of the set that no identified set contains: the strict center
  // first, then seeded points moved along the set's free directions.
  std::vector<LinearConstraintSet> identified = identified_sets(o, convention);
  rep.orders_checked = static_cast<int>(identified.size());
  std::mt19937_64 rng(opts.seed);
  std::vector<RationalVector> candidates;
  if (auto c = strict_center(cs)) candidates.push_back(c->x);
  for (auto& x : sample_strict_points(cs, 64, rng)) candidates.push_back(std::move(x));
  for (const auto& x : candidates) {
    bool outside = true;
    for (const auto& s : identified)
      if (s.contains(x)) {
        outside = false;
        break;
      }
    if (outside) {
      rep.witness = x;
      rep.witness_outside_identified = true;
      break;
    }
  }
  if (!rep.witness) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "no sampled point of the set avoids every identified set";
    if (!candidates.empty()) rep.witness = candidates.front();
    return rep;
  }
  rep.residuals_vanish = true;
  for (const auto& t : rep.residuals)
    if (t.exponent.evaluate(*rep.witness, rep.r) != 0) rep.residuals_vanish = false;

  bool numeric_ok = true;
  if (opts.samples > 0 && convention == Convention::TypeII) {
    std::vector<double> w = to_doubles(*rep.witness);
    std::mt19937_64 urng(mix_seed(opts.seed));
    std::vector<Eigen::MatrixXd> us = detail::random_scales(g, std::max(3, opts.scale_matrices), urng);
    rep.b1 = mc_b1_check(o, dec, w, us.front(), opts.samples, opts.seed, opts.workers);
    rep.b2 = b2_numeric_check(o, dec, w, us, opts.samples, opts.seed, opts.workers);
    numeric_ok = rep.b1->finite && rep.b1->matches_closed_form && rep.b2->pass;
  }
  if (rep.residuals_vanish && numeric_ok) {
    rep.verdict = Verdict::Refuted;
    rep.note = "integrability set of dimension " + std::to_string(rep.dimension()) + " > r + 1 = " + std::to_string(rep.conjectured_dimension);
    if (opts.samples <= 0 || convention == Convention::TypeI) rep.note += "; numeric checks not run, closed form only";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.note = rep.residuals_vanish ? "numeric checks did not confirm the witness" : "closed-form residuals do not vanish at the witness";
  }
  return rep;
}

inline CounterexampleReport verify_counterexample_II(const UndirectedGraph& g, const PerfectOrder& o, const VerifyOptions& opts = {}) {
  return verify_counterexample(g, o, Convention::TypeII, opts);
}

inline CounterexampleReport verify_counterexample_I(const UndirectedGraph& g, const PerfectOrder& o, const VerifyOptions& opts = {}) {
  return verify_counterexample(g, o, Convention::TypeI, opts);
}

struct SearchResult {
  std::vector<CounterexampleReport> reports;
  int graphs = 0;
  int homogeneous_skipped = 0;
  int orders = 0;
  /// (graph, order) pairs whose induced DAG has r_D >= 2.
  int candidates = 0;
};

/// Connected decomposable graphs on 2..max_vertices vertices up to
/// isomorphism; for every perfect order of a non-homogeneous graph the DAG
/// version induced with S_2 ancestral is checked and every refuted (g, P, D)
/// with r_D >= 2 is reported. Work is sharded by (graph, order) and merged in
/// canonical order.
inline SearchResult search_counterexamples(int max_vertices, Convention convention, const VerifyOptions& opts = {},
                                           int cap = kDefaultSearchCap) {
  if (max_vertices > cap) throw CombinatorialLimit("max_vertices " + std::to_string(max_vertices) + " exceeds the cap " + std::to_string(cap));
  struct Task {
    UndirectedGraph g;
    PerfectOrder o;
  };
  SearchResult res;
  std::vector<Task> tasks;
  for (int n = 2; n <= max_vertices; ++n)
    for (const auto& g : connected_decomposable_graphs(n)) {
      ++res.graphs;
      if (is_homogeneous(g)) {
        ++res.homogeneous_skipped;
        continue;
      }
      for (const auto& o : enumerate_perfect_orders(g)) tasks.push_back({g, o});
    }
  res.orders = static_cast<int>(tasks.size());
  std::vector<std::optional<CounterexampleReport>> out(tasks.size());
  std::vector<char> candidate(tasks.size(), 0);
  std::atomic<std::size_t> next{0};
  VerifyOptions inner = opts;
  inner.workers = 1;
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      if (ancestral_separators(t.o, dag_induced_by_order(t.o, true)).r_d < 2) continue;
      candidate[i] = 1;
      CounterexampleReport rep = verify_counterexample(t.g, t.o, convention, inner);
      if (rep.refuted()) out[i] = std::move(rep);
    }
  };
  const int workers = opts.workers > 0 ? opts.workers : default_workers();
  std::vector<std::thread> pool;
  for (int k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    res.candidates += candidate[i];
    if (out[i]) res.reports.push_back(std::move(*out[i]));
  }
  return res;
}

struct JacobianSweep {
  int instances = 0;
  double max_relative_error = 0;
};

/// Clique/separator product against the parent-set form on random perfect
/// DAGs and random Sigma in PD_G.
inline JacobianSweep jacobian_sweep(int instances, int max_vertices, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(1, max_vertices);
  JacobianSweep out;
  for (int i = 0; i < instances; ++i) {
    Dag d = random_perfect_dag(size(rng), rng);
    Eigen::MatrixXd sigma = random_sigma_in_pd_g(d.skeleton(), rng);
    LogPair lp = jacobian_identity_check(d, sigma);
    out.max_relative_error = std::max(out.max_relative_error, lp.relative_error());
    ++out.instances;
  }
  return out;
}

struct InclusionSweep {
  int graphs = 0;
  int orders = 0;
  int points = 0;
  int violations = 0;
  /// Orders whose B_P has no strictly feasible point.
  int empty_sets = 0;
};

/// For every connected decomposable graph up to `max_vertices` and every
/// perfect order, exact strictly feasible points of B_P are tested for
/// membership in the integrability set of the DAG version induced by the order.
inline InclusionSweep bp_inclusion_sweep(int max_vertices, int points_per_order, std::uint64_t seed) {
  InclusionSweep out;
  std::mt19937_64 rng(seed);
  for (int n = 1; n <= max_vertices; ++n)
    for (const auto& g : connected_decomposable_graphs(n)) {
      ++out.graphs;
      for (const auto& o : enumerate_perfect_orders(g)) {
        ++out.orders;
        LinearConstraintSet bp = set_BP(o);
        Dag d = o.r() == 1 ? transitive_dag_version(g) : dag_induced_by_order(o, true);
        LinearConstraintSet integ = integrability_set_from_decomposition(decompose_markov_ratio(o, d, Convention::TypeII, Grouping::PerSeparator));
        auto pts = sample_strict_points(bp, points_per_order, rng);
        if (pts.empty()) ++out.empty_sets;
        for (const auto& x : pts) {
          ++out.points;
          if (!bp.contains(x) || !integ.contains(x)) ++out.violations;
        }
      }
    }
  return out;
}

}  // namespace lmw
