#include "mhd/double.hpp"

#include <gtest/gtest.h>

#include <random>

namespace mhd {
namespace {

Scalar random_scalar(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-4, 4);
  std::uniform_int_distribution<long> den(1, 3);
  return Scalar(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
}

GradedElement random_element(const GradedAlgebra& alg, const std::vector<Elem>& support, std::mt19937& rng) {
  GradedElement x(alg);
  for (Elem p : support) {
    std::vector<Scalar> xs;
    for (std::size_t k = 0; k < alg.dim(p); ++k) xs.push_back(random_scalar(rng));
    x.set(p, Vec::from_dense(xs));
  }
  return x;
}

GradedElement star(const GradedAlgebra& alg, const GradedElement& x) {
  GradedElement out(alg);
  for (const auto& [p, v] : x.components()) {
    const StarBlock& s = alg.star(p);
    out.add(s.target, s.star.apply(v));
  }
  return out;
}

GradedElement scaled(const GradedAlgebra& alg, const GradedElement& x, const Scalar& c) {
  GradedElement out(alg);
  for (const auto& [p, v] : x.components()) out.set(p, v.scaled(c));
  return out;
}

struct Case {
  std::string name;
  MhaStructure h;
};

std::vector<Case> cases() {
  Group s3 = Group::symmetric3();
  MhaStructure cz2 = from_flat(flatten(make_group_algebra(Group::cyclic(2))));
  MhaStructure fam = make_constant_family(cz2, s3);
  return {{"K(S3)", make_kg(s3)},
          {"C[S3]", make_group_algebra(s3)},
          {"constant family", fam},
          {"reduced dual", reduced_dual(fam).dual}};
}

// (xy)z = x(yz), (xy)* = y* x*, (cx)* = conj(c) x* on random elements.
TEST(GradedAlgebraProperty, RandomElements) {
  std::mt19937 rng(20261019);
  for (const auto& c : cases()) {
    const GradedAlgebra& alg = c.h.algebra();
    std::vector<Elem> all = c.h.group().elements();
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Elem> sx;
      std::vector<Elem> sy;
      std::vector<Elem> sz;
      for (Elem p : all) {
        if (rng() % 2) sx.push_back(p);
        if (rng() % 2) sy.push_back(p);
        if (rng() % 2) sz.push_back(p);
      }
      GradedElement x = random_element(alg, sx, rng);
      GradedElement y = random_element(alg, sy, rng);
      GradedElement z = random_element(alg, sz, rng);
      EXPECT_EQ(multiply(alg, multiply(alg, x, y), z), multiply(alg, x, multiply(alg, y, z))) << c.name;
      EXPECT_EQ(star(alg, multiply(alg, x, y)), multiply(alg, star(alg, y), star(alg, x))) << c.name;
      Scalar s = random_scalar(rng);
      EXPECT_EQ(star(alg, scaled(alg, x, s)), scaled(alg, star(alg, x), s.conj())) << c.name;
      EXPECT_EQ(star(alg, star(alg, x)), x) << c.name;
    }
  }
}

TEST(GradedAlgebra, CertificatesPassOnShippedAlgebras) {
  for (const auto& c : cases()) {
    Report r = check_graded_algebra(c.h.algebra(), Window::full(c.h.group()));
    EXPECT_TRUE(r.passed()) << c.name << "\n" << r.summary();
  }
}

// Unit e0 and e1 e1 = e2, e1 e2 = e1, e2 e1 = e2 e2 = 0:
// (e1 e1) e1 = 0 while e1 (e1 e1) = e1.
TEST(GradedAlgebra, NonAssociativeProductIsReported) {
  Group g = Group::trivial();
  GradedAlgebra::Definition d;
  d.group = g;
  d.mode = Mode::Cograded;
  d.dim = [](Elem) { return std::size_t{3}; };
  d.product = [](Elem, Elem) {
    // Column 3i + j holds e_i e_j.
    return Matrix::from_dense({{1, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 1, 0, 1, 0, 0, 0}, {0, 0, 1, 0, 1, 0, 1, 0, 0}});
  };
  d.unit = [](Elem) { return std::optional<Vec>(Vec::unit(3, 0)); };
  Report r = check_graded_algebra(GradedAlgebra(d), Window::full(g));
  const CheckResult* a = r.find("associativity");
  ASSERT_NE(a, nullptr);
  EXPECT_FALSE(a->pass);
  EXPECT_FALSE(a->witness.empty());
}

TEST(GradedAlgebra, CogradedComponentsAreOrthogonal) {
  MhaStructure kg = make_kg(Group::symmetric3());
  const GradedAlgebra& alg = kg.algebra();
  GradedElement x = GradedElement::basis(alg, 1, 0);
  GradedElement y = GradedElement::basis(alg, 2, 0);
  EXPECT_TRUE(multiply(alg, x, y).is_zero());
  EXPECT_EQ(multiply(alg, x, x), x);
}

}  // namespace
}  // namespace mhd
