#include <gtest/gtest.h>

#include "symvalic/deps.hpp"

namespace {

using namespace symvalic;
using deps::DepKey;
using deps::DependencyMap;
using sym::hex;
using sym::num;

DependencyMap safeDeps(int balance) {
  DependencyMap d;
  d.local[DepKey::argument(0, "to")] = hex(0x42);
  d.local[DepKey::argument(1, "amount")] = num(200);
  d.local[DepKey::storageLoad(0, "curBalance")] = num(balance);
  d.transaction[DepKey::sender()] = sym::Expr::owner();
  return d;
}

TEST(Deps, PrintedForm) {
  EXPECT_EQ(safeDeps(1).str(), "<{to -> 0x42, amount -> 200, curBalance -> 1} ; {sender -> <<owner>>}>");
  EXPECT_EQ(DependencyMap{}.str(), "<{} ; {}>");
}

TEST(Deps, ConflictOnCurBalance) {
  auto c = deps::combine(safeDeps(1), safeDeps(80));
  auto* k = std::get_if<deps::Conflict>(&c);
  ASSERT_NE(k, nullptr);
  EXPECT_EQ(k->key.name, "curBalance");
  EXPECT_FALSE(k->transaction);
  EXPECT_FALSE(deps::compatible(safeDeps(1), safeDeps(80)));
}

TEST(Deps, EmptyIsIdentity) {
  auto c = deps::combine(DependencyMap{}, safeDeps(1));
  ASSERT_TRUE(std::holds_alternative<DependencyMap>(c));
  EXPECT_EQ(std::get<DependencyMap>(c), safeDeps(1));
}

TEST(Deps, DisjointUnion) {
  DependencyMap a, b;
  a.local[DepKey::argument(0, "x")] = num(1);
  b.local[DepKey::argument(1, "y")] = num(2);
  b.transaction[DepKey::sender()] = sym::Expr::owner();
  auto c = deps::combine(a, b);
  ASSERT_TRUE(std::holds_alternative<DependencyMap>(c));
  EXPECT_EQ(std::get<DependencyMap>(c).str(), "<{x -> 1, y -> 2} ; {sender -> <<owner>>}>");
}

TEST(Deps, SenderConflictIsTransactional) {
  auto c = deps::combine(DependencyMap::withSender(sym::Expr::owner()),
                         DependencyMap::withSender(sym::Expr::unprivilegedUser()));
  auto* k = std::get_if<deps::Conflict>(&c);
  ASSERT_NE(k, nullptr);
  EXPECT_TRUE(k->transaction);
  EXPECT_EQ(k->key, DepKey::sender());
}

TEST(Deps, SenderAccessor) {
  EXPECT_EQ(DependencyMap{}.sender(), nullptr);
  ASSERT_NE(safeDeps(1).sender(), nullptr);
  EXPECT_EQ(*safeDeps(1).sender(), sym::Expr::owner());
}

TEST(Restrict, KeepsFirstThreeArguments) {
  DependencyMap d;
  for (int i = 0; i < 4; ++i) d.local[DepKey::argument(i, std::string(1, char('a' + i)))] = num(i);
  auto r = deps::restrict(d, deps::DependencyBudget{});
  EXPECT_EQ(r.local.size(), 3u);
  EXPECT_FALSE(r.local.count(DepKey::argument(3, "d")));
  EXPECT_TRUE(deps::withinBudget(r, deps::DependencyBudget{}));
  EXPECT_FALSE(deps::withinBudget(d, deps::DependencyBudget{}));
}

TEST(Restrict, KeepsFirstStorageLoad) {
  DependencyMap d;
  d.local[DepKey::storageLoad(0, "first")] = num(1);
  d.local[DepKey::storageLoad(1, "second")] = num(2);
  auto r = deps::restrict(d, deps::DependencyBudget{});
  EXPECT_EQ(r.local.size(), 1u);
  EXPECT_TRUE(r.local.count(DepKey::storageLoad(0, "first")));
}

TEST(Restrict, EmptyStaysEmpty) {
  EXPECT_TRUE(deps::restrict(DependencyMap{}, deps::DependencyBudget{0, 0, 0}).empty());
}

TEST(Restrict, SenderSurvivesZeroBudget) {
  DependencyMap d = safeDeps(1);
  d.transaction[DepKey::entryArgument(0, "f", "p")] = num(1);
  auto r = deps::restrict(d, deps::DependencyBudget{0, 0, 0});
  EXPECT_TRUE(r.local.empty());
  EXPECT_EQ(r.transaction.size(), 1u);
  EXPECT_TRUE(r.transaction.count(DepKey::sender()));
}

TEST(Restrict, TransactionArgumentBound) {
  DependencyMap d;
  for (int i = 0; i < 3; ++i) d.transaction[DepKey::entryArgument(i, "f", std::to_string(i))] = num(i);
  EXPECT_EQ(deps::restrict(d, deps::DependencyBudget{}).transaction.size(), 2u);
}

}  // namespace
