#include <gtest/gtest.h>

#include "symvalic/reasoner.hpp"

namespace {

using namespace symvalic::sym;

const Expr x = Expr::symbol("x", Binding::Free);
const Expr y = Expr::symbol("y", Binding::Free);
const Expr sender = Expr::symbol("sender", Binding::Free);

TEST(Normalize, FoldsSafeArithmetic) { EXPECT_EQ(normalize(div(mul(num(200), num(90)), num(100))), num(180)); }

TEST(Normalize, Identities) {
  EXPECT_EQ(normalize(mul(x, num(1))), x);
  EXPECT_EQ(normalize(add(x, num(0))), x);
  EXPECT_EQ(normalize(mul(x, num(0))), num(0));
  EXPECT_EQ(normalize(sub(x, x)), num(0));
  EXPECT_EQ(normalize(eq(x, x)), num(1));
  EXPECT_EQ(normalize(land(lt(x, y), num(1))), lt(x, y));
  EXPECT_EQ(normalize(land(lt(x, y), num(0))), num(0));
  EXPECT_EQ(normalize(lnot(lnot(lt(x, y)))), lt(x, y));
}

TEST(Normalize, Wraparound) { EXPECT_EQ(normalize(add(num(kU256Max), num(2))), num(1)); }

TEST(Normalize, CanonicalOperandOrder) {
  EXPECT_EQ(normalize(add(x, num(3))), normalize(add(num(3), x)));
  EXPECT_EQ(normalize(mul(y, x)), normalize(mul(x, y)));
  EXPECT_EQ(normalize(eq(y, x)), normalize(eq(x, y)));
}

TEST(Normalize, Idempotent) {
  Expr e = normalize(add(mul(x, num(2)), add(num(3), sub(y, num(1)))));
  EXPECT_EQ(normalize(e), e);
}

TEST(Normalize, HashedConcatStaysIntact) {
  // Identities must not expose a byte string where a word is expected.
  Expr c = Expr::concat(x, hex(1));
  Expr e = Expr::sha3(add(c, num(0)));
  std::map<std::string, U256> a{{"x", 9}};
  EXPECT_EQ(evalConcrete(normalize(e), a), evalConcrete(e, a));
}

TEST(Normalize, TruthOf) {
  EXPECT_EQ(truthOf(num(5)), num(1));
  EXPECT_EQ(truthOf(lt(x, y)), lt(x, y));
}

TEST(Implies, Reflexive) {
  EXPECT_EQ(implies(eq(sender, Expr::owner()), eq(sender, Expr::owner())), Implication::True);
}

TEST(Implies, ConjunctionElimination) {
  Expr a = lt(x, num(5)), b = gt(y, num(2));
  EXPECT_EQ(implies(land(a, b), a), Implication::True);
  EXPECT_EQ(implies(land(a, b), b), Implication::True);
}

TEST(Implies, NoWeakeningOfBounds) { EXPECT_EQ(implies(lt(x, num(5)), lt(x, num(3))), Implication::Unknown); }

TEST(Implies, TighterBound) { EXPECT_EQ(implies(lt(x, num(3)), lt(x, num(5))), Implication::True); }

TEST(Implies, FalseImpliesAnything) { EXPECT_EQ(implies(num(0), lt(x, num(3))), Implication::True); }

TEST(Implies, ConjunctList) {
  std::vector<Expr> facts{lt(x, num(5)), eq(y, num(2))};
  EXPECT_EQ(implies(facts, eq(y, num(2))), Implication::True);
  EXPECT_EQ(implies(facts, eq(y, num(3))), Implication::Unknown);
}

TEST(ValueForVar, Equality) { EXPECT_EQ(valueForVar(x, eq(x, num(42))), std::vector<Expr>{num(42)}); }

TEST(ValueForVar, PeelsHashedSlot) {
  Expr c = eq(Expr::sha3(Expr::concat(x, num(0))), Expr::sha3(Expr::concat(Expr::owner(), num(0))));
  EXPECT_EQ(valueForVar(x, c), std::vector<Expr>{Expr::owner()});
}

TEST(ValueForVar, Unsatisfiable) { EXPECT_TRUE(valueForVar(x, land(eq(x, num(7)), lt(x, num(3)))).empty()); }

TEST(ValueForVar, BoundSymbolsAreNotSolved) { EXPECT_TRUE(valueForVar(Expr::owner(), eq(Expr::owner(), num(1))).empty()); }

TEST(ValueForVar, CandidatesSatisfy) {
  Expr c = eq(add(num(3), x), num(10));
  auto cands = valueForVar(x, c);
  ASSERT_FALSE(cands.empty());
  for (const auto& v : cands) EXPECT_EQ(normalize(substitute(c, x, v)), num(1));
}

TEST(Conjuncts, Split) {
  Expr a = lt(x, num(5)), b = gt(y, num(2)), d = eq(x, y);
  EXPECT_EQ(conjunctsOf(normalize(land(a, land(b, d)))).size(), 3u);
  EXPECT_EQ(conjunctsOf(a).size(), 1u);
}

}  // namespace
