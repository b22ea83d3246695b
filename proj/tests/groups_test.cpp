#include "mhd/groups.hpp"

#include <gtest/gtest.h>

#include <array>

namespace mhd {
namespace {

using Perm = std::array<int, 3>;

// Independent composition oracle: (a*b)(x) = a(b(x)).
Perm compose(const Perm& a, const Perm& b) { return {a[b[0]], a[b[1]], a[b[2]]}; }

const std::array<Perm, 6> kS3Perms = {{{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}}};

Elem index_of(const Perm& p) {
  for (std::size_t k = 0; k < kS3Perms.size(); ++k) {
    if (kS3Perms[k] == p) return static_cast<Elem>(k);
  }
  return -1;
}

TEST(Group, SymmetricGroupMatchesCompositionOracle) {
  Group g = Group::symmetric3();
  ASSERT_EQ(g.order(), 6u);
  for (Elem a : g.elements()) {
    for (Elem b : g.elements()) {
      EXPECT_EQ(g.mul(a, b), index_of(compose(kS3Perms[a], kS3Perms[b])));
    }
    EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
  }
  EXPECT_EQ(g.name(g.conj(g.parse("(12)"), g.parse("(123)"))), "(132)");
}

TEST(Group, RejectsNonAssociativeTable) {
  // A Latin square with identity 0 that is not associative.
  std::vector<std::vector<std::size_t>> t = {
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  try {
    Group::from_table("bad", {"e", "a", "b", "c", "d"}, t);
    FAIL() << "table accepted";
  } catch (const GroupError& e) {
    EXPECT_NE(std::string(e.what()).find("associativity fails at"), std::string::npos);
  }
}

TEST(Group, RejectsMissingIdentityAndBadEntries) {
  EXPECT_THROW(Group::from_table("x", {"a", "b"}, {{1, 0}, {0, 0}}), GroupError);
  EXPECT_THROW(Group::from_table("x", {"a", "b"}, {{0, 1}, {1, 2}}), GroupError);
}

TEST(Group, IntegersAreLazy) {
  Group z = Group::integers();
  EXPECT_FALSE(z.finite());
  EXPECT_EQ(z.mul(3, -5), -2);
  EXPECT_EQ(z.inv(7), -7);
  EXPECT_EQ(z.parse("-4"), -4);
  EXPECT_THROW(z.parse("x"), GroupError);
  EXPECT_THROW(z.order(), GroupError);
}

TEST(Window, MustContainIdentityAndInverses) {
  Group z = Group::integers();
  EXPECT_EQ(Window::range(z, -5, 5).size(), 11u);
  EXPECT_THROW(Window::of(z, {1, -1}), GroupError);
  EXPECT_THROW(Window::of(z, {0, 1}), GroupError);
  Group s3 = Group::symmetric3();
  EXPECT_THROW(Window::of(s3, {0, 4}), GroupError);
  EXPECT_NO_THROW(Window::of(s3, {0, 4, 5}));
}

TEST(GroupSelfAction, AdjointAndRightSolve) {
  Group g = Group::symmetric3();
  auto ad = GroupSelfAction::adjoint(g);
  for (Elem p : g.elements()) {
    for (Elem s : g.elements()) {
      auto q = ad.solve_right(p, s);
      ASSERT_TRUE(q);
      EXPECT_EQ(g.mul(ad(*q, p), *q), s);
    }
  }
  std::vector<std::vector<Elem>> t(6, std::vector<Elem>(6));
  for (Elem p : g.elements()) {
    for (Elem q : g.elements()) t[p][q] = ad(p, q);
  }
  auto tab = GroupSelfAction::from_table(g, t);
  EXPECT_EQ(tab.solve_right(1, 4), ad.solve_right(1, 4));
  EXPECT_EQ(ad.inverted_labels().kind(), GroupSelfAction::Kind::Adjoint);
}

}  // namespace
}  // namespace mhd
