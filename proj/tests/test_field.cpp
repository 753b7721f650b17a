#include "cdineq/field.hpp"

#include <gtest/gtest.h>

using namespace cdineq;

TEST(Field, PrimeArithmetic) {
  FieldTower tw(101);
  FieldElem a = FieldElem::from_int(tw, 7);
  EXPECT_TRUE((a * a.inverse()).is_one());
  EXPECT_EQ(FieldElem::from_int(tw, -1), FieldElem::from_int(tw, 100));
  EXPECT_EQ(to_string(FieldElem::from_int(tw, 205)), "3");
  EXPECT_TRUE(FieldElem::from_int(tw, 3).pow(100).is_one());
}

TEST(Field, EmbeddingsCommute) {
  FieldTower tw(13);
  FieldId f2 = tw.ensure_field(2), f4 = tw.ensure_field(4), f8 = tw.ensure_field(8);
  FieldElem g = tw.generator(f2);
  EXPECT_EQ(tw.embed(tw.embed(g, f4), f8), tw.embed(g, f8));
  FieldElem h = tw.generator(f4);
  EXPECT_EQ(tw.embed(h * h + g, f8), tw.embed(h, f8) * tw.embed(h, f8) + tw.embed(g, f8));
}

TEST(Field, RootsOfIrreducibleQuadratic) {
  FieldTower tw(3);
  // x^2 + 1 has no root in F_3
  UPoly f{FieldElem::one(tw), FieldElem::zero(tw), FieldElem::one(tw)};
  auto rs = roots_of(f);
  ASSERT_EQ(rs.size(), 2u);
  for (auto& [r, m] : rs) {
    EXPECT_EQ(m, 1);
    EXPECT_EQ(r.degree(), 2u);
    EXPECT_TRUE(poly_eval(f, r).is_zero());
  }
}

TEST(Field, RepeatedRoots) {
  FieldTower tw(11);
  // (x - 2)^2 (x + 1)
  FieldElem c = FieldElem::from_int(tw, 1);
  UPoly f{FieldElem::from_int(tw, 4), FieldElem::from_int(tw, 0), FieldElem::from_int(tw, -3), c};
  auto rs = roots_of(f);
  ASSERT_EQ(rs.size(), 2u);
  int total = 0;
  for (auto& [r, m] : rs) {
    total += m;
    if (r == FieldElem::from_int(tw, 2)) EXPECT_EQ(m, 2);
  }
  EXPECT_EQ(total, 3);
}

TEST(Field, RootsOfUnity) {
  FieldTower tw(13);
  auto z = tw.nth_roots_of_unity(6);
  ASSERT_EQ(z.size(), 6u);
  EXPECT_TRUE(z[0].is_one());
  EXPECT_TRUE(z[1].pow(6).is_one());
  EXPECT_FALSE(z[1].pow(2).is_one());
  EXPECT_FALSE(z[1].pow(3).is_one());
  // 5th roots of unity in F_13 need F_{13^4}
  auto w = tw.nth_roots_of_unity(5);
  EXPECT_EQ(w[1].degree(), 4u);
  EXPECT_TRUE(w[1].pow(5).is_one());
}

TEST(Field, ExtensionCap) {
  FieldTower tw(7, 2);
  // x^3 - 2 is irreducible over F_7
  UPoly f{FieldElem::from_int(tw, -2), FieldElem::zero(tw), FieldElem::zero(tw), FieldElem::one(tw)};
  try {
    roots_of(f);
    FAIL() << "expected ExtensionDegreeExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ExtensionDegreeExceeded);
    EXPECT_EQ(exit_code(e.kind()), 3);
  }
}

TEST(Field, LexOrderIsDeterministic) {
  FieldTower a(17), b(17);
  FieldId fa = a.ensure_field(2), fb = b.ensure_field(2);
  EXPECT_EQ(a.modulus(fa), b.modulus(fb));
  EXPECT_TRUE(lex_less(FieldElem::from_int(a, 1), FieldElem::from_int(a, 2)));
}
