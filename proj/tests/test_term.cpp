#include <gtest/gtest.h>

#include "oracle.hpp"
#include "prepdiag/errors.hpp"
#include "prepdiag/term.hpp"

using namespace prepdiag;

namespace {

Term T(const char* s) { return parse_term(s); }

}  // namespace

TEST(TermText, RoundTrips) {
  for (const char* s : {"f(X, a, #3)", "lam(X, and(p(X), q(X, #user)))", "ref(lam(Y, floor(Y)))",
                        "app(lam(X, p(X)), b)", "second(#2, lam(B, floor(B)))", "_G12"}) {
    EXPECT_EQ(to_string(T(s)), s);
  }
}

TEST(TermText, KindsFromSpelling) {
  EXPECT_TRUE(T("X").is_var());
  EXPECT_TRUE(T("X12").is_var());
  EXPECT_TRUE(T("_tmp").is_var());
  EXPECT_TRUE(T("Xy").is_const());
  EXPECT_TRUE(T("office").is_const());
  EXPECT_TRUE(T("#7").is_entity());
  EXPECT_TRUE(T("lam(X, X)").is_lambda());
  EXPECT_TRUE(T("ref(lam(X, p(X)))").is_ref());
  EXPECT_TRUE(T("app(F, a)").is_app());
}

TEST(TermText, RejectsMalformedInput) {
  EXPECT_THROW(T("f(a"), ParseError);
  EXPECT_THROW(T("f(a,)"), ParseError);
  EXPECT_THROW(T("lam(a, b)"), ParseError);
}

TEST(FreeVars, LambdaBindsItsParameter) {
  EXPECT_EQ(free_vars(T("lam(X, f(X, Y))")), (std::set<std::string>{"Y"}));
  EXPECT_TRUE(is_ground(T("f(a, #1)")));
  EXPECT_FALSE(is_ground(T("f(a, X)")));
}

TEST(Unify, BindsBothSides) {
  auto s = unify(T("f(X, b)"), T("f(a, Y)"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->apply(T("g(X, Y)")), T("g(a, b)"));
}

TEST(Unify, ClashAndArity) {
  EXPECT_FALSE(unify(T("f(a)"), T("f(b)")));
  EXPECT_FALSE(unify(T("f(a)"), T("f(a, b)")));
  EXPECT_FALSE(unify(T("#1"), T("#2")));
  EXPECT_FALSE(unify(T("a"), T("#1")));
}

TEST(Unify, OccursCheck) {
  EXPECT_FALSE(unify(T("X"), T("f(X)")));
  EXPECT_FALSE(unify(T("g(X, Y)"), T("g(Y, f(X))")));
}

TEST(Unify, ResultIsIdempotent) {
  auto s = unify(T("f(X, Y, Z)"), T("f(Y, Z, a)"));
  ASSERT_TRUE(s);
  for (const auto& [v, value] : s->bindings()) EXPECT_TRUE(free_vars(value).empty()) << v;
}

TEST(Unify, LambdasOnlyAlphaEqual) {
  EXPECT_TRUE(unify(T("p(lam(X, f(X)))"), T("p(lam(Y, f(Y)))")));
  EXPECT_FALSE(unify(T("p(lam(X, f(X)))"), T("p(lam(Y, g(Y)))")));
  auto s = unify(T("p(Z)"), T("p(lam(Y, g(Y)))"));
  ASSERT_TRUE(s);
  EXPECT_TRUE(alpha_equal(s->apply(T("Z")), T("lam(X, g(X))")));
}

TEST(Substitution, RefusesDoubleBindingAndCycles) {
  Substitution s;
  EXPECT_TRUE(s.bind("X", T("a")));
  EXPECT_FALSE(s.bind("X", T("b")));
  EXPECT_FALSE(s.bind("Y", T("f(Y)")));
}

TEST(Substitution, AvoidsCapture) {
  Term t = substitute(T("lam(Y, f(X, Y))"), "X", T("Y"));
  EXPECT_TRUE(alpha_equal(t, T("lam(Z, f(Y, Z))")));
  EXPECT_FALSE(alpha_equal(t, T("lam(Y, f(Y, Y))")));
}

TEST(Beta, ReducesToNormalForm) {
  EXPECT_EQ(beta_reduce(T("app(lam(X, p(X)), a)")), T("p(a)"));
  Term det = T("app(lam(N, ref(lam(X, app(N, X)))), lam(Y, floor(Y)))");
  EXPECT_TRUE(alpha_equal(beta_reduce(det), T("ref(lam(X, floor(X)))")));
}

TEST(Beta, NormalOrderTerminatesWhereInnermostWouldNot) {
  Term omega = T("app(lam(X, app(X, X)), lam(X, app(X, X)))");
  Term t = Term::apply(T("lam(Y, a)"), omega);
  EXPECT_EQ(beta_reduce(t), T("a"));
}

TEST(Beta, StepCap) {
  Term omega = T("app(lam(X, app(X, X)), lam(X, app(X, X)))");
  BetaOptions options;
  options.max_steps = 50;
  EXPECT_THROW(beta_reduce(omega, options), ReductionLimitError);
}

TEST(Beta, CaptureAvoidingContraction) {
  Term t = T("app(lam(X, lam(Y, f(X, Y))), Y)");
  Term r = beta_reduce(t);
  ASSERT_TRUE(r.is_lambda());
  EXPECT_NE(r.name(), "Y");
  EXPECT_TRUE(alpha_equal(r, T("lam(Z, f(Y, Z))")));
}

TEST(Beta, RedexPositionsAndContraction) {
  Term t = T("f(app(lam(X, X), a), app(lam(Y, b), c))");
  auto paths = redex_positions(t);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(contract_at(t, paths[1]), T("f(app(lam(X, X), a), b)"));
  EXPECT_THROW(contract_at(t, TermPath{}), Error);
}

TEST(Alpha, BoundNamesDoNotMatter) {
  EXPECT_TRUE(alpha_equal(T("lam(X, lam(Y, f(X, Y)))"), T("lam(A, lam(B, f(A, B)))")));
  EXPECT_FALSE(alpha_equal(T("lam(X, lam(Y, f(X, Y)))"), T("lam(A, lam(B, f(B, A)))")));
  EXPECT_FALSE(alpha_equal(T("lam(X, f(X, Y))"), T("lam(X, f(X, Z))")));
}

TEST(Alpha, EntityBijection) {
  EntityBijection bij;
  EXPECT_TRUE(alpha_equal(T("on(#1, #2)"), T("on(#7, #9)"), bij));
  EXPECT_EQ(bij.forward.at("1"), "7");
  EntityBijection clash;
  EXPECT_FALSE(alpha_equal(T("on(#1, #1)"), T("on(#7, #9)"), clash));
  EntityBijection inj;
  EXPECT_FALSE(alpha_equal(T("on(#1, #2)"), T("on(#7, #7)"), inj));
}

TEST(Alpha, CanonicalNames) {
  EXPECT_EQ(canonical_bound_names(T("lam(Q, p(Q))")), canonical_bound_names(T("lam(Z, p(Z))")));
  EXPECT_EQ(canonical_free_names(T("f(Q, Z, Q)")), T("f(A, B, A)"));
}

TEST(Literals, ParseAndConjunctions) {
  Literal l = parse_literal("embedding(B, #3, r2)");
  EXPECT_EQ(l.predicate, "embedding");
  EXPECT_EQ(l.arity(), 3u);
  EXPECT_FALSE(l.ground());
  EXPECT_EQ(to_string(l), "embedding(B, #3, r2)");
  EXPECT_EQ(flatten_conjunction(T("and(p(a), and(q(b), r(c)))")).size(), 3u);
}

TEST(Oracles, RobinsonAgreesOnSmallCases) {
  auto s = oracle::robinson(T("f(X, g(Y))"), T("f(a, g(X))"));
  ASSERT_TRUE(s);
  EXPECT_EQ(oracle::resolve(T("Y"), *s), T("a"));
  EXPECT_FALSE(oracle::robinson(T("X"), T("f(X)")));
  EXPECT_TRUE(oracle::variant(T("f(X, Y)"), T("f(A, B)")));
  EXPECT_FALSE(oracle::variant(T("f(X, X)"), T("f(A, B)")));
}
