#include <gtest/gtest.h>

#include "lmwishart/fixtures.hpp"
#include "lmwishart/verification.hpp"

using namespace lmw;
namespace fx = lmw::fixtures;

namespace {

const AffineForm a4 = alpha(4), a5 = alpha(5), b4 = beta(4), b5 = beta(5);

VerifyOptions fast() {
  VerifyOptions o;
  o.samples = 20000;
  return o;
}

VerifyOptions symbolic_only() {
  VerifyOptions o;
  o.samples = 0;
  return o;
}

bool isomorphic(const UndirectedGraph& a, const UndirectedGraph& b) {
  return a.num_vertices() == b.num_vertices() && canonical_form(a).code == canonical_form(b).code;
}

}  // namespace

TEST(VerifyTypeII, FirstCounterexample) {
  auto ex = fx::counterexample_one();
  auto rep = verify_counterexample_II(ex.graph, ex.order, fast());
  EXPECT_EQ(rep.ancestral.r_d, 2);
  EXPECT_EQ(rep.conjectured_dimension, 5);
  EXPECT_EQ(rep.achieved_dimension, 6);
  EXPECT_TRUE(rep.refuted()) << rep.note;
  EXPECT_TRUE(rep.witness_outside_identified);
  EXPECT_TRUE(rep.residuals_vanish);
  ASSERT_EQ(rep.residuals.size(), 1u);
  EXPECT_EQ(rep.residuals[0].set, VertexSet{4});
  EXPECT_EQ(rep.residuals[0].exponent, -(a4 - b4 + frac(1, 2)));
  ASSERT_TRUE(rep.b1 && rep.b2);
  EXPECT_TRUE(rep.b1->finite);
  EXPECT_TRUE(rep.b1->matches_closed_form);
  EXPECT_TRUE(rep.b2->closed_form);
  EXPECT_LE(rep.b2->max_spread, 1e-9);
}

TEST(VerifyTypeII, SecondCounterexample) {
  auto ex = fx::counterexample_two();
  auto rep = verify_counterexample_II(ex.graph, ex.order, fast());
  EXPECT_EQ(rep.ancestral.r_d, 2);
  EXPECT_EQ(rep.conjectured_dimension, 6);
  EXPECT_GE(rep.achieved_dimension.value_or(0), 7);
  EXPECT_GE(rep.refined_dimension.value_or(0), 8);
  EXPECT_TRUE(rep.refuted()) << rep.note;
  EXPECT_EQ(rep.witness_set, "refined");
}

TEST(VerifyTypeII, FourPathIsNotRefuted) {
  auto ex = fx::four_path();
  for (const auto& o : enumerate_perfect_orders(ex.graph)) {
    auto rep = verify_counterexample_II(ex.graph, o, symbolic_only());
    EXPECT_EQ(rep.verdict, Verdict::Consistent) << o.to_string();
    EXPECT_LE(rep.ancestral.r_d, 1);
  }
}

TEST(VerifyTypeII, RejectsMismatchedInput) {
  auto ex = fx::four_path();
  EXPECT_THROW(verify_counterexample_II(fx::cycle(4), ex.order), NotDecomposable);
  EXPECT_THROW(verify_counterexample_II(fx::path(4), fx::three_path().order), NotPerfectOrder);
}

TEST(VerifyTypeI, SecondCounterexample) {
  auto ex = fx::counterexample_two();
  auto rep = verify_counterexample_I(ex.graph, ex.order);
  EXPECT_GE(rep.dimension(), 8);
  EXPECT_TRUE(rep.refuted()) << rep.note;
  ASSERT_EQ(rep.residuals.size(), 1u);
  EXPECT_EQ(rep.residuals[0].set, VertexSet{6});
  EXPECT_EQ(rep.residuals[0].exponent, -(a4 + a5 - b4 - b5));
  EXPECT_TRUE(rep.residuals_vanish);
  EXPECT_FALSE(rep.b1.has_value());
}

TEST(VerifyTypeI, FirstCounterexample) {
  auto ex = fx::counterexample_one();
  auto rep = verify_counterexample_I(ex.graph, ex.order);
  EXPECT_TRUE(rep.refuted()) << rep.note;
  EXPECT_GT(rep.dimension(), rep.conjectured_dimension);
}

TEST(VerifyTypeI, CompleteGraphIsInapplicable) {
  UndirectedGraph g = fx::complete(4);
  PerfectOrder o = derive_order(g, {VertexSet::range(4)});
  auto rep = verify_counterexample_I(g, o);
  EXPECT_EQ(rep.verdict, Verdict::Inapplicable);
  EXPECT_FALSE(rep.refuted());
}

TEST(Verify, WitnessViolatesEveryIdentifiedSet) {
  for (auto ex : {fx::counterexample_one(), fx::counterexample_two()}) {
    for (Convention c : {Convention::TypeI, Convention::TypeII}) {
      auto rep = verify_counterexample(ex.graph, ex.order, c, symbolic_only());
      ASSERT_TRUE(rep.witness);
      const auto& cs = rep.witness_set == "refined" ? rep.refined_constraints : rep.constraints;
      EXPECT_TRUE(cs.contains(*rep.witness));
      int orders = 0;
      for (const auto& o : enumerate_perfect_orders(ex.graph)) {
        ++orders;
        auto id = rename_to_reference(c == Convention::TypeII ? set_BP(o) : set_AP(o), o, ex.order);
        EXPECT_FALSE(id.contains(*rep.witness)) << o.to_string();
        if (c == Convention::TypeII) EXPECT_FALSE(rename_to_reference(set_BP(o, BpForm::Literal), o, ex.order).contains(*rep.witness));
      }
      EXPECT_EQ(orders, rep.orders_checked);
    }
  }
}

TEST(Verify, DeterministicUnderSeed) {
  auto ex = fx::counterexample_one();
  VerifyOptions opts = fast();
  opts.samples = 5000;
  auto a = verify_counterexample_II(ex.graph, ex.order, opts);
  auto b = verify_counterexample_II(ex.graph, ex.order, opts);
  ASSERT_TRUE(a.b1 && b.b1);
  EXPECT_EQ(*a.witness, *b.witness);
  EXPECT_EQ(a.b1->first.log_estimate, b.b1->first.log_estimate);
  EXPECT_EQ(a.b2->values, b.b2->values);
  opts.workers = 3;
  auto c = verify_counterexample_II(ex.graph, ex.order, opts);
  EXPECT_EQ(a.b1->second.log_estimate, c.b1->second.log_estimate);
}

TEST(Search, NothingAtFiveVertices) {
  auto res = search_counterexamples(5, Convention::TypeII, symbolic_only());
  EXPECT_EQ(res.candidates, 0);
  EXPECT_TRUE(res.reports.empty());
  EXPECT_GT(res.graphs, 10);
  // The 4-path and 5-path have no order whose induced DAG makes two separators ancestral.
  for (int n : {4, 5}) {
    UndirectedGraph g = fx::path(n);
    for (const auto& o : enumerate_perfect_orders(g)) EXPECT_LE(ancestral_separators(o, dag_induced_by_order(o, true)).r_d, 1);
  }
}

TEST(Search, FindsFirstCounterexampleGraph) {
  auto res = search_counterexamples(6, Convention::TypeII, symbolic_only());
  ASSERT_FALSE(res.reports.empty());
  UndirectedGraph target = fx::counterexample_one().graph;
  bool found = false;
  for (const auto& rep : res.reports) {
    EXPECT_FALSE(is_homogeneous(rep.graph));
    EXPECT_GE(rep.ancestral.r_d, 2);
    EXPECT_TRUE(rep.witness_outside_identified);
    EXPECT_TRUE(rep.residuals_vanish);
    if (isomorphic(rep.graph, target)) found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_GT(res.homogeneous_skipped, 0);
}

TEST(Search, ShardingIsDeterministic) {
  VerifyOptions one = symbolic_only(), many = symbolic_only();
  one.workers = 1;
  many.workers = 4;
  auto a = search_counterexamples(6, Convention::TypeI, one);
  auto b = search_counterexamples(6, Convention::TypeI, many);
  ASSERT_EQ(a.reports.size(), b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    EXPECT_EQ(a.reports[i].order.to_string(), b.reports[i].order.to_string());
    EXPECT_EQ(*a.reports[i].witness, *b.reports[i].witness);
  }
}

TEST(Search, RespectsVertexCap) { EXPECT_THROW(search_counterexamples(9, Convention::TypeII, symbolic_only()), CombinatorialLimit); }

TEST(Sweeps, JacobianIdentity) {
  auto s = jacobian_sweep(200, 8, 7);
  EXPECT_EQ(s.instances, 200);
  EXPECT_LE(s.max_relative_error, 1e-10);
}

TEST(Sweeps, BpInsideInducedDagSet) {
  auto s = bp_inclusion_sweep(6, 10, 3);
  EXPECT_EQ(s.violations, 0);
  EXPECT_EQ(s.empty_sets, 0);
  EXPECT_EQ(s.points, 10 * s.orders);
}
