#include <gtest/gtest.h>

#include "properties.hpp"

namespace {

using namespace symvalic::testing;

void expectHolds(const PropertyOutcome& o) {
  EXPECT_EQ(o.violations, 0) << o.name << ": " << o.counterexample;
  EXPECT_GT(o.nonTrivial, 0) << o.name << " never exercised its interesting case";
}

// Smaller runs than the acceptance gate, with different seeds.
constexpr int kCases = 1500;

TEST(Properties, NormalizeIdempotent) { expectHolds(normalizeIdempotent(11, kCases)); }
TEST(Properties, NormalizePreservesSemantics) { expectHolds(normalizePreservesSemantics(12, kCases)); }
TEST(Properties, ImpliesSound) { expectHolds(impliesSound(13, kCases, 200)); }
TEST(Properties, ValueForVarSound) { expectHolds(valueForVarSound(14, kCases)); }
TEST(Properties, CombineCommutative) { expectHolds(combineCommutative(15, kCases)); }
TEST(Properties, CombineAssociative) { expectHolds(combineAssociative(16, kCases)); }
TEST(Properties, CombineIdentity) { expectHolds(combineIdentity(17, kCases)); }
TEST(Properties, CombineIdempotent) { expectHolds(combineIdempotent(18, kCases)); }
TEST(Properties, ConflictAbsorbing) { expectHolds(conflictAbsorbing(19, kCases)); }

}  // namespace
