#include "cdineq/expr.hpp"
#include "cdineq/families.hpp"
#include "cdineq/induct.hpp"

#include <gtest/gtest.h>

using namespace cdineq;

namespace {

RootSystem roots(FieldTower& tw, const std::string& s) { return puiseux_roots(parse_poly(tw, s)); }

const ClusterPoint& point_at(const std::vector<ClusterPoint>& pts, const FieldElem& a) {
  for (auto& P : pts)
    if (!P.at_infinity && P.residue == a) return P;
  throw std::runtime_error("no such point");
}

std::vector<std::pair<int, QInf>> orbit_data(const RootSystem& rs) {
  std::vector<std::pair<int, QInf>> out;
  for (auto& o : rs.orbits) out.emplace_back(o.n, o.lambda);
  return out;
}

}  // namespace

TEST(Classify, Eisenstein) {
  FieldTower tw(101);
  auto pts = classify(roots(tw, "x^6 - t"));
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_TRUE(pts[0].residue.is_zero());
  EXPECT_EQ(pts[0].less.size(), 1u);
  EXPECT_EQ(pts[0].wt, 1);
  EXPECT_FALSE(pts[0].bad);
}

TEST(Classify, Pairs) {
  FieldTower tw(101);
  auto pts = classify(roots(tw, example_expression("pairs", 2, 101)));
  ASSERT_EQ(pts.size(), 2u);
  for (auto& P : pts) {
    EXPECT_EQ(P.wt, 2);
    EXPECT_TRUE(P.bad);
  }
}

TEST(Classify, OddDegreeWithContent) {
  FieldTower tw(101);
  RootSystem rs = roots(tw, "t*x*(x-1)*(x+1)");
  EXPECT_EQ(rs.b, 1);
  EXPECT_EQ(rs.parity(), 1);
  auto pts = classify(rs);
  ASSERT_EQ(pts.size(), 4u);
  int finite = 0;
  for (auto& P : pts) {
    EXPECT_EQ(P.wt, 2);
    EXPECT_TRUE(P.bad);
    if (!P.at_infinity) {
      ++finite;
      EXPECT_EQ(multiplicity_at(rs.chart.G, rs.b, P.residue), 2);
    }
  }
  EXPECT_EQ(finite, 3);
}

TEST(Replace, CollisionSmoothChart) {
  FieldTower tw(101);
  RootSystem rs = roots(tw, example_expression("collision", 0, 101));
  auto pts = classify(rs);
  const ClusterPoint& P = point_at(pts, FieldElem::zero(tw));
  EXPECT_EQ(P.wt, 3);
  RootSystem sm = replace_smooth(rs, P);
  EXPECT_EQ(sm.b, 1);
  ASSERT_EQ(sm.degree(), 3);
  // roots t, 2t, 3t
  std::vector<PuiseuxSeries> want;
  for (int c = 1; c <= 3; ++c) want.push_back(PuiseuxSeries::monomial(FieldElem::from_int(tw, c), Rat(1)));
  for (auto& w : want) {
    bool hit = false;
    for (auto& r : sm.all_roots()) hit = hit || agree(r, w);
    EXPECT_TRUE(hit);
  }
}

TEST(Replace, SmoothChartDividesByT) {
  FieldTower tw(101);
  RootSystem rs = roots(tw, "x*(x - t)*(x + t)*(x - 1)");
  auto pts = classify(rs);
  RootSystem sm = replace_smooth(rs, point_at(pts, FieldElem::zero(tw)));
  EXPECT_EQ(sm.b, 1);
  EXPECT_EQ(sm.degree(), 3);
  for (auto& o : sm.orbits) EXPECT_TRUE(o.lambda.is_inf());
}

TEST(Replace, InfinityChartSwapsPair) {
  FieldTower tw(101);
  RootSystem a = roots(tw, "x^3 - t^2");
  auto pa = classify(a);
  RootSystem ia = replace_infinity(a, pa[0]);
  EXPECT_EQ(orbit_data(ia), (std::vector<std::pair<int, QInf>>{{2, QInf(Rat(1))}}));
  EXPECT_EQ(ia.orbits[0].rep.valuation(), QInf(Rat(1, 2)));
  EXPECT_EQ(replace_smooth(a, pa[0]).degree(), 0);

  RootSystem c = roots(tw, "x^3 - t");
  RootSystem ic = replace_infinity(c, classify(c)[0]);
  EXPECT_EQ(orbit_data(ic), (std::vector<std::pair<int, QInf>>{{1, QInf(Rat(2))}}));
}

TEST(Replace, FigureTwoChain) {
  FieldTower tw(13);
  RootSystem rs = roots(tw, "x^6 - 2*t^2*x^3 - 9*t^3*x^2 - 6*t^4*x + t^4 - t^5");
  RootSystem r1 = replace_infinity(rs, classify(rs)[0]);
  MetricTree t1 = build_tree(r1);
  EXPECT_TRUE(rooted_isometric(t1, expected_infinity_tree(rs, classify(rs)[0])));
  RootSystem r2 = replace_infinity(r1, classify(r1)[0]);
  MetricTree t2 = build_tree(r2);
  EXPECT_EQ(canonical_signature(t1), "N0/1{N1/2{N3/4{L,L},N3/4{L,L}}}");
  // both roots have valuation 1; the unary trunk node is compressed away
  EXPECT_EQ(r2.orbits[0].rep.valuation(), QInf(Rat(1)));
  EXPECT_EQ(canonical_signature(t2), "N0/1{N3/2{L,L}}");
}

TEST(Conductor, Examples) {
  FieldTower tw(101);
  EXPECT_EQ(conductor(roots(tw, "(x - 1)*(x^2 - t)")), 1);
  EXPECT_EQ(conductor(roots(tw, "x^3 - t^2")), 4);
  EXPECT_EQ(conductor(roots(tw, "x^8 - t")), 7);
}

TEST(Discriminant, Examples) {
  FieldTower tw(101);
  EXPECT_EQ(discriminant_recursive(roots(tw, "x^3 - t^2")), 4);
  EXPECT_EQ(discriminant_recursive(roots(tw, "(x - 1)*(x^2 - t)")), 1);
  EXPECT_EQ(discriminant_recursive(roots(tw, example_expression("pairs", 3, 101))), 6);
  EXPECT_EQ(discriminant_recursive(roots(tw, example_expression("collision", 0, 101))), 12);
}

TEST(Step, CuspIsEqual) {
  FieldTower tw(101);
  RootSystem rs = roots(tw, "x^3 - t^2");
  StepTerms st = step_terms(rs, classify(rs));
  EXPECT_EQ(st.lhs, 3);
  EXPECT_EQ(st.rhs, 3);
  EXPECT_TRUE(st.equal);
}

TEST(Step, FourLinesIsStrict) {
  FieldTower tw(101);
  RootSystem rs = roots(tw, "(x - t)*(x - 2*t)*(x - 3*t)*(x - 4*t)");
  auto pts = classify(rs);
  StepTerms st = step_terms(rs, pts);
  EXPECT_LT(st.lhs, st.rhs);
  EXPECT_GE(st.lhs, 0);
  EXPECT_FALSE(st.equal);
}

TEST(Equality, Families) {
  FieldTower tw(101);
  EXPECT_TRUE(equality_criterion(roots(tw, "x^6 - t")).equal);
  EXPECT_TRUE(equality_criterion(roots(tw, example_expression("pairs", 3, 101))).equal);
  Verdict v = equality_criterion(roots(tw, example_expression("collision", 0, 101)));
  EXPECT_FALSE(v.equal);
  bool w4 = false;
  for (auto& w : v.witnesses) w4 = w4 || (w.weight == 4 && w.level >= 1);
  EXPECT_TRUE(w4);
}

TEST(Verify, Reports) {
  FieldTower tw(101);
  InductionReport a = verify_inequality(roots(tw, "x^3 - t^2"));
  EXPECT_EQ(a.minus_art, 4);
  EXPECT_EQ(a.disc, 4);
  EXPECT_TRUE(a.verdict.equal);
  EXPECT_TRUE(a.measure_ok);

  InductionReport b = verify_inequality(roots(tw, example_expression("collision", 0, 101)));
  EXPECT_EQ(b.disc, 12);
  EXPECT_LT(b.minus_art, b.disc);

  InductionReport c = verify_inequality(roots(tw, "(x - 1)*(x^2 - t)*(x - 2)*((x - 3)^3 - t)*(x - 4)"));
  EXPECT_EQ(c.minus_art, 3);
  EXPECT_EQ(c.disc, 3);
  EXPECT_EQ(c.nodes.size(), 1u);
  EXPECT_TRUE(c.nodes[0].base);
}

TEST(Verify, DepthCap) {
  FieldTower tw(101);
  InductConfig cfg;
  cfg.max_depth = 0;
  try {
    verify_inequality(roots(tw, "x^3 - t^2"), cfg);
    FAIL() << "expected DepthExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DepthExceeded);
    EXPECT_EQ(exit_code(e.kind()), 3);
  }
}
