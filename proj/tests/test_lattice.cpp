#include <gtest/gtest.h>

#include "prepdiag/errors.hpp"
#include "prepdiag/lattice.hpp"

using namespace prepdiag;

TEST(Lattice, BuiltinPartitions) {
  TypeLattice l = TypeLattice::builtin();
  EXPECT_EQ(l.partitions(),
            (std::vector<std::string>{"physical", "temporal", "abstract_set", "information"}));
  EXPECT_EQ(l.root("human"), "physical");
  EXPECT_TRUE(l.compatible("human", "physical"));
  EXPECT_FALSE(l.compatible("physical", "temporal"));
  EXPECT_FALSE(l.compatible("human", "information"));
}

TEST(Lattice, UnknownTypes) {
  TypeLattice l = TypeLattice::builtin();
  EXPECT_FALSE(l.contains("colour"));
  EXPECT_THROW(l.root("colour"), UnknownTypeError);
  EXPECT_THROW(l.compatible("colour", "physical"), UnknownTypeError);
}

TEST(Lattice, RegistrationRules) {
  TypeLattice l;
  l.add_partition("a");
  l.add_subtype("b", "a");
  l.add_subtype("c", "b");
  EXPECT_EQ(l.root("c"), "a");
  EXPECT_THROW(l.add_partition("a"), Error);
  EXPECT_THROW(l.add_subtype("b", "a"), Error);
  EXPECT_THROW(l.add_subtype("d", "missing"), Error);
}

TEST(Lattice, CompatibilityIsAnEquivalence) {
  TypeLattice l = TypeLattice::builtin();
  std::vector<std::string> all = l.partitions();
  all.push_back("human");
  for (const auto& a : all) {
    EXPECT_TRUE(l.compatible(a, a));
    for (const auto& b : all) {
      EXPECT_EQ(l.compatible(a, b), l.compatible(b, a));
      for (const auto& c : all) {
        if (l.compatible(a, b) && l.compatible(b, c)) EXPECT_TRUE(l.compatible(a, c));
      }
    }
  }
}
