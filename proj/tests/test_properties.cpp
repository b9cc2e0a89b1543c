#include <gtest/gtest.h>

#include "oracle.hpp"
#include "prepdiag/builtin_data.hpp"
#include "properties.hpp"

using namespace prepdiag;
namespace oc = prepdiag::oracle;

namespace {

std::string summary(const oc::PropertyReport& r) {
  std::string s;
  for (std::size_t i = 0; i < r.failures.size() && i < 5; ++i) s += r.failures[i] + "\n";
  return s;
}

class Seeded : public ::testing::TestWithParam<std::uint32_t> {};

}  // namespace

TEST_P(Seeded, Unification) {
  auto r = oc::unify_properties(GetParam(), 250);
  EXPECT_EQ(r.cases, 250u);
  EXPECT_TRUE(r.ok()) << summary(r);
}

TEST_P(Seeded, OccursCheck) {
  auto r = oc::occurs_check_properties(GetParam(), 250);
  EXPECT_TRUE(r.ok()) << summary(r);
}

TEST_P(Seeded, BetaConfluence) {
  auto r = oc::confluence_properties(GetParam(), 250);
  EXPECT_TRUE(r.ok()) << summary(r);
}

TEST_P(Seeded, AlphaLaws) {
  auto r = oc::alpha_properties(GetParam(), 250);
  EXPECT_TRUE(r.ok()) << summary(r);
}

TEST_P(Seeded, SaturationAgainstNaive) {
  auto r = oc::saturation_properties(builtin_kb(), GetParam(), 40);
  EXPECT_EQ(r.cases, 40u);
  EXPECT_TRUE(r.ok()) << summary(r);
}

INSTANTIATE_TEST_SUITE_P(Seeds, Seeded, ::testing::Values(11u, 12345u, 987654321u));

TEST(SaturationOracle, IsSensitiveToTheDepthCap) {
  std::mt19937 rng(7);
  std::size_t differing = 0;
  for (int i = 0; i < 30; ++i) {
    auto facts = oc::random_facts(rng, builtin_kb(), 12);
    auto capped = oc::naive_model(facts, builtin_kb(), Language::En, 1);
    auto full = oc::naive_model(facts, builtin_kb(), Language::En, 2);
    differing += capped.facts != full.facts;
  }
  EXPECT_GT(differing, 0u);
}

TEST(SaturationOracle, DetectsInconsistency) {
  std::vector<Literal> facts{parse_literal("type(#1, human)"), parse_literal("type(#1, temporal)")};
  EXPECT_TRUE(oc::naive_model(facts, builtin_kb(), Language::En).inconsistent);
}

TEST(BankMinimality, EveryResultIsMinimal) {
  auto r = oc::bank_minimality(builtin_kb(), parse_bank(builtin::bank_text()));
  EXPECT_GT(r.cases, 10u);
  EXPECT_TRUE(r.ok()) << summary(r);
}
