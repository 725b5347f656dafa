#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "symvalic/analysis.hpp"
#include "symvalic/reasoner.hpp"

namespace {

using namespace symvalic;
using flow::DepsPattern;
using sym::Expr;
namespace fs = std::filesystem;

ir::Contract fixture(const std::string& name) {
  std::ifstream in(fs::path(SYMVALIC_FIXTURES) / name);
  std::stringstream s;
  s << in.rdbuf();
  return ir::parse(s.str());
}

ir::StmtId firstOf(const ir::Contract& c, const std::string& function, ir::Op op) {
  for (const auto& b : c.function(function)->blocks)
    for (const auto& s : b.stmts)
      if (s.op == op) return s.id;
  return -1;
}

std::set<std::string> values(const std::vector<flow::Inference>& fs) {
  std::set<std::string> out;
  for (const auto& f : fs) out.insert(f.value.str());
  return out;
}

TEST(Seeding, AddressParameter) {
  auto c = fixture("safe.svc");
  auto seeds = flow::seedInputs(*c.function("deposit"), c, 0x5eed);
  ASSERT_EQ(seeds.params.size(), 2u);
  std::set<Expr> to;
  for (const auto& v : seeds.params[0]) to.insert(v.value);
  EXPECT_EQ(to, (std::set<Expr>{sym::hex(0x42), Expr::ownerUniqueValue(), Expr::userUniqueValue()}));
}

TEST(Seeding, SenderHypotheses) {
  auto c = fixture("safe.svc");
  auto seeds = flow::seedInputs(*c.function("deposit"), c, 0x5eed);
  std::set<Expr> sender;
  for (const auto& v : seeds.sender) sender.insert(v.value);
  EXPECT_TRUE(sender.contains(Expr::owner()));
  EXPECT_TRUE(sender.contains(Expr::unprivilegedUser()));
}

TEST(Seeding, NoProgramConstants) {
  auto c = ir::parse("contract N { uint s; function f(uint a) public { s = a; } }");
  auto seeds = flow::seedInputs(*c.function("f"), c, 1);
  std::set<Expr> a;
  for (const auto& v : seeds.params[0]) a.insert(v.value);
  EXPECT_EQ(a, (std::set<Expr>{sym::num(0), sym::num(1), sym::num(sym::kU256Max)}));
}

TEST(Seeding, SmallConstantsAreCapped) {
  auto c = ir::parse("contract K { uint s; function f(uint a) public { s = a + 2 + 3 + 4 + 5 + 6 + 7; } }");
  auto seeds = flow::seedInputs(*c.function("f"), c, 1);
  // 0, 1, max, three drawn small constants and three more from the remainder.
  EXPECT_EQ(seeds.params[0].size(), 9u);
  EXPECT_EQ(flow::seedInputs(*c.function("f"), c, 1).params, seeds.params);
}

TEST(Analyze, WhichPaths) {
  auto r = flow::analyze(fixture("which_paths.svc"), flow::AnalysisConfig{});
  EXPECT_EQ(values(flow::returnValues(r, "whichPaths")), (std::set<std::string>{"3", "9", "16"}));
  EXPECT_FALSE(r.truncated);
}

TEST(Analyze, SafeDeposit) {
  flow::AnalysisConfig cfg;
  cfg.transactionRounds = 1;
  flow::Scenario sc;
  sc.entryFunctions = {"deposit"};
  sc.argumentSeeds["deposit.to"] = {sym::hex(0x42)};
  sc.argumentSeeds["deposit.amount"] = {sym::num(200)};
  sc.storage.push_back({Expr::sha3(Expr::concat(sym::hex(0x42), sym::hex(1))), sym::num(80)});
  auto r = flow::analyze(fixture("safe.svc"), cfg, sc);
  auto all = flow::varMayBe(r, "deposit", "nextBalance", std::nullopt, DepsPattern::any());
  EXPECT_EQ(values(all), (std::set<std::string>{"181", "260"}));
  EXPECT_EQ(all.size(), 2u);
  for (const auto& f : all) ASSERT_NE(f.deps.sender(), nullptr);
  EXPECT_TRUE(flow::varMayBe(r, "deposit", "nextBalance", sym::num(181), DepsPattern::sender(Expr::unprivilegedUser()))
                  .empty());
  EXPECT_EQ(flow::varMayBe(r, "deposit", "nextBalance", sym::num(181), DepsPattern::sender(Expr::owner())).size(), 1u);
}

TEST(Analyze, ReturnZero) {
  auto c = ir::parse("contract Z { function f() public { return 0; } }");
  auto r = flow::analyze(c, flow::AnalysisConfig{});
  auto rs = flow::returnValues(r, "f");
  ASSERT_EQ(values(rs), std::set<std::string>{"0"});
  for (const auto& f : rs) EXPECT_TRUE(f.deps.local.empty());
  auto ret = firstOf(c, "f", ir::Op::Return);
  EXPECT_FALSE(flow::stmtReachable(r, ret, DepsPattern::sender(Expr::owner())).empty());
  EXPECT_FALSE(flow::stmtReachable(r, ret, DepsPattern::sender(Expr::unprivilegedUser())).empty());
}

TEST(Analyze, GuardedSelfdestruct) {
  auto c = fixture("guarded_selfdestruct.svc");
  auto r = flow::analyze(c, flow::AnalysisConfig{});
  auto sd = firstOf(c, "sensitive", ir::Op::SelfDestruct);
  EXPECT_TRUE(flow::stmtReachable(r, sd, DepsPattern::sender(Expr::unprivilegedUser())).empty());
  EXPECT_EQ(flow::stmtReachable(r, sd, DepsPattern::sender(Expr::owner())).size(), 1u);
}

TEST(Analyze, RequireFalseIsDead) {
  auto c = ir::parse("contract D { uint s; function f() public { require(false); s = 1; } }");
  auto r = flow::analyze(c, flow::AnalysisConfig{});
  EXPECT_TRUE(flow::stmtReachable(r, firstOf(c, "f", ir::Op::SStore), DepsPattern::any()).empty());
}

TEST(Analyze, WildcardReturnsAll) {
  auto r = flow::analyze(fixture("which_paths.svc"), flow::AnalysisConfig{});
  auto x = flow::varMayBe(r, "whichPaths", "x", std::nullopt, DepsPattern::any());
  std::size_t expected = 0;
  for (const auto& i : r.inferences) expected += i.function == "whichPaths" && i.var == "x";
  EXPECT_EQ(x.size(), expected);
  EXPECT_EQ(values(x).size(), 6u);
  EXPECT_TRUE(flow::varMayBe(r, "whichPaths", "nope", std::nullopt, DepsPattern::any()).empty());
}

TEST(Analyze, TaintWitness) {
  auto r = flow::analyze(fixture("transfer_from_taint.svc"), flow::AnalysisConfig{});
  auto w = flow::varMayBe(r, "pull", "from", Expr::userUniqueValue(), DepsPattern::sender(Expr::unprivilegedUser()));
  EXPECT_FALSE(w.empty());
}

TEST(Analyze, Deterministic) {
  auto c = fixture("safe.svc");
  EXPECT_EQ(flow::toJson(flow::analyze(c, flow::AnalysisConfig{})), flow::toJson(flow::analyze(c, flow::AnalysisConfig{})));
}

TEST(Analyze, TruncationIsReported) {
  flow::AnalysisConfig cfg;
  cfg.maxInferencesPerVariable = 1;
  auto r = flow::analyze(fixture("which_paths.svc"), cfg);
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.truncationReason.empty());
}

TEST(Analyze, TimeBudgetIsReported) {
  flow::AnalysisConfig cfg;
  cfg.timeBudget = std::chrono::milliseconds(0);
  EXPECT_TRUE(flow::analyze(fixture("safe.svc"), cfg).truncated);
}

TEST(Analyze, DepsStayWithinBudget) {
  auto r = flow::analyze(fixture("safe.svc"), flow::AnalysisConfig{});
  for (const auto& i : r.inferences) EXPECT_TRUE(deps::withinBudget(i.deps, deps::DependencyBudget{}));
}

TEST(Patterns, Matching) {
  auto d = deps::DependencyMap::withSender(Expr::owner());
  d.local[deps::DepKey::argument(0, "to")] = sym::hex(0x42);
  EXPECT_TRUE(DepsPattern::any().matches(d));
  EXPECT_TRUE(DepsPattern::sender(Expr::owner()).matches(d));
  EXPECT_FALSE(DepsPattern::sender(Expr::unprivilegedUser()).matches(d));
  EXPECT_TRUE((DepsPattern{{{"to", sym::num(0x42)}}, {}}).matches(d));
  EXPECT_FALSE((DepsPattern{{{"to", sym::num(1)}}, {}}).matches(d));
}

}  // namespace
