#include "mhd/hopf.hpp"

#include <gtest/gtest.h>

namespace mhd {
namespace {

const CheckResult& get(const Report& r, const std::string& name) {
  const CheckResult* c = r.find(name);
  if (c == nullptr) throw std::runtime_error("missing check " + name);
  return *c;
}

TEST(FunctionAlgebra, FullSuiteOnS3) {
  Group g = Group::symmetric3();
  MhaStructure kg = make_kg(g);
  Window w = Window::full(g);
  Report r = hopf_suite(kg, w);
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_EQ(get(r, "hopf.T1 bijective").cases, 36u);
  EXPECT_EQ(get(r, "hopf.T2 bijective").cases, 36u);
  EXPECT_EQ(get(r, "hopf.coassociativity").cases, 216u);
}

TEST(FunctionAlgebra, CutMatchesHandComputation) {
  // Delta(delta_s)(1 (x) delta_q) = delta_{sq^-1} (x) delta_q.
  Group g = Group::symmetric3();
  MhaStructure kg = make_kg(g);
  for (Elem s : g.elements()) {
    for (Elem q : g.elements()) {
      const auto& c = kg.cut1(s, q);
      ASSERT_TRUE(c);
      EXPECT_EQ(c->left, g.mul(s, g.inv(q)));
      EXPECT_EQ(c->right, q);
      EXPECT_EQ(c->map, Matrix::identity(1));
    }
  }
}

TEST(FunctionAlgebra, IntegralsAreTheSum) {
  Group g = Group::symmetric3();
  MhaStructure kg = make_kg(g);
  Window w = Window::full(g);
  IntegralAnalysis a = analyze_integrals(kg, w);
  EXPECT_TRUE(a.report.passed()) << a.report.summary();
  ASSERT_EQ(a.left.dimension, 1u);
  for (Elem p : g.elements()) {
    EXPECT_EQ(a.left.basis[0].row(p), Vec::unit(1, 0));
    EXPECT_EQ(a.right.basis[0].row(p), Vec::unit(1, 0));
  }
  ASSERT_TRUE(a.modular);
  for (Elem p : g.elements()) EXPECT_EQ(a.modular->parts.at(p), Vec::unit(1, 0));
  ASSERT_TRUE(a.sigma);
  EXPECT_EQ(a.sigma->sigma, Matrix::identity(6));
}

TEST(FunctionAlgebra, NegativeFunctionalIsNotPositive) {
  Group g = Group::symmetric3();
  MhaStructure kg = make_kg(g);
  Window w = Window::full(g);
  GradedFunctional phi;
  for (Elem p : g.elements()) phi.rows[p] = Vec::unit(1, 0, p == 3 ? -1 : 1);
  EXPECT_FALSE(check_positive_integral(kg, phi, w).passed());
  EXPECT_FALSE(is_left_invariant(kg, phi, w).passed());
  EXPECT_THROW(modular_element(kg, phi, w), InconsistentSystem);
}

TEST(FunctionAlgebra, IntegersOnWindow) {
  Group z = Group::integers();
  MhaStructure kz = make_kg(z);
  Window w = Window::range(z, -5, 5);
  Report r = hopf_suite(kz, w);
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_EQ(get(r, "hopf.T1 bijective").cases, 121u);
  IntegralAnalysis a = analyze_integrals(kz, w);
  EXPECT_TRUE(a.report.passed()) << a.report.summary();
  ASSERT_TRUE(a.modular);
  GradedMultiplier delta = a.modular->multiplier();
  GradedElement x = GradedElement::basis(kz.algebra(), 4, 0);
  EXPECT_EQ(multiplier_times_element(kz.algebra(), delta, x), x);
}

TEST(GroupAlgebra, SuiteAndIntegral) {
  Group g = Group::symmetric3();
  MhaStructure ga = make_group_algebra(g);
  Window w = Window::full(g);
  Report r = hopf_suite(ga, w);
  EXPECT_TRUE(r.passed()) << r.summary();
  IntegralAnalysis a = analyze_integrals(ga, w);
  EXPECT_TRUE(a.report.passed()) << a.report.summary();
  ASSERT_EQ(a.left.dimension, 1u);
  for (Elem p : g.elements()) {
    EXPECT_EQ(a.left.basis[0].row(p), p == g.identity() ? Vec::unit(1, 0) : Vec(1));
  }
  ASSERT_TRUE(a.modular);
  for (Elem p : g.elements()) {
    EXPECT_EQ(a.modular->parts.at(p), p == g.identity() ? Vec::unit(1, 0) : Vec(1));
  }
}

TEST(GroupAlgebra, InfiniteGroupOnWindow) {
  Group z = Group::integers();
  MhaStructure ga = make_group_algebra(z);
  Report r = hopf_suite(ga, Window::range(z, -3, 3));
  EXPECT_TRUE(r.passed()) << r.summary();
}

// A cograded family whose coproduct blocks are scaled so that
// coassociativity fails on the triple (e, a, a) of Z2.
MhaStructure broken_kz2() {
  Group g = Group::cyclic(2);
  MhaStructure kg = make_kg(g);
  MhaStructure::Definition d;
  d.name = "broken";
  d.algebra = kg.algebra();
  d.typing = CoproductTyping::standard(g);
  d.delta = [](Elem p, Elem q) { return Matrix::identity(1).scaled(p == 0 && q == 1 ? 2 : 1); };
  d.counit = [kg](Elem p) { return kg.counit(p); };
  d.antipode_target = [g](Elem p) { return g.inv(p); };
  d.antipode_source = [g](Elem p) { return g.inv(p); };
  d.antipode = [](Elem) { return Matrix::identity(1); };
  return MhaStructure(std::move(d));
}

TEST(Suite, DetectsBrokenCoassociativity) {
  MhaStructure b = broken_kz2();
  Window w = Window::full(b.group());
  Report r = check_coassociativity(b, w);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(get(check_counit(b, w), "counit left").pass);
  EXPECT_TRUE(get(check_counit(b, w), "counit right").pass);
}

TEST(Flatten, ConstantFamilyRoundTrip) {
  MhaStructure cz2 = from_flat(flatten(make_group_algebra(Group::cyclic(2))));
  Window one = Window::full(Group::trivial());
  EXPECT_TRUE(hopf_suite(cz2, one).passed());
  Group s3 = Group::symmetric3();
  MhaStructure fam = make_constant_family(cz2, s3);
  Window w = Window::full(s3);
  Report r = hopf_suite(fam, w);
  EXPECT_TRUE(r.passed()) << r.summary();
  IntegralAnalysis a = analyze_integrals(fam, w);
  EXPECT_TRUE(a.report.passed()) << a.report.summary();
  // phi_p(u_g) = [g = 0] on every component.
  for (Elem p : s3.elements()) EXPECT_EQ(a.left.basis[0].row(p), Vec::unit(2, 0));
  EXPECT_THROW(make_constant_family(make_kg(s3), s3), StructureError);
}

TEST(Flatten, FunctionAlgebraIsCommutativeAndUnital) {
  Group s3 = Group::symmetric3();
  FlatHopf f = flatten(make_kg(s3));
  EXPECT_EQ(f.n, 6u);
  Matrix swap = permute_legs({6, 6}, {1, 0});
  EXPECT_EQ(f.mul * swap, f.mul);
  EXPECT_EQ(f.unit, Vec::from_dense({1, 1, 1, 1, 1, 1}));
  EXPECT_TRUE(hopf_suite(from_flat(f), Window::full(Group::trivial())).passed());
}

}  // namespace
}  // namespace mhd
