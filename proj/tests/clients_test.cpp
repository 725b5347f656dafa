#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symvalic/clients.hpp"
#include "symvalic/corpus.hpp"

namespace {

using namespace symvalic;
using clients::WarningKind;
namespace fs = std::filesystem;

flow::AnalysisResult analyzeText(const std::string& text) { return flow::analyze(ir::parse(text), flow::AnalysisConfig{}); }

flow::AnalysisResult analyzeFixture(const std::string& name) {
  std::ifstream in(fs::path(SYMVALIC_FIXTURES) / name);
  std::stringstream s;
  s << in.rdbuf();
  return analyzeText(s.str());
}

corpus::DomainFacts reentrant(const std::string& sig) {
  corpus::DomainFacts f;
  f.reentrancyAllowing.push_back({sig, 1, 1});
  return f;
}

corpus::DomainFacts usuallyGuarded(const std::string& sig, std::size_t guarded, std::size_t unguarded) {
  corpus::DomainFacts f;
  f.usuallyGuarded.push_back({sig, guarded, unguarded, double(guarded) / double(guarded + unguarded), 1});
  f.monetary.insert(sig);
  return f;
}

TEST(Unguarded, FlagsSelfdestruct) {
  auto ws = clients::detectUnguardedSensitive(analyzeFixture("unguarded_selfdestruct.svc"));
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_EQ(ws[0].kind, WarningKind::UnguardedSensitive);
  EXPECT_EQ(ws[0].function, "sensitive");
  ASSERT_NE(ws[0].witness.deps.sender(), nullptr);
  EXPECT_EQ(*ws[0].witness.deps.sender(), sym::Expr::unprivilegedUser());
}

TEST(Unguarded, GuardedIsQuiet) {
  EXPECT_TRUE(clients::detectUnguardedSensitive(analyzeFixture("guarded_selfdestruct.svc")).empty());
}

TEST(Unguarded, NothingSensitive) {
  EXPECT_TRUE(clients::detectUnguardedSensitive(analyzeFixture("which_paths.svc")).empty());
}

TEST(TaintedArg, TransferFrom) {
  auto ws = clients::detectTaintedSensitiveArg(analyzeFixture("transfer_from_taint.svc"), clients::builtinSpecs());
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_EQ(ws[0].kind, WarningKind::TaintedSensitiveArg);
  EXPECT_EQ(ws[0].witness.position, 0);
  ASSERT_TRUE(ws[0].witness.value.has_value());
  EXPECT_EQ(*ws[0].witness.value, sym::Expr::userUniqueValue());
  EXPECT_EQ(*ws[0].witness.deps.sender(), sym::Expr::unprivilegedUser());
}

TEST(TaintedArg, OwnerGuardedIsQuiet) {
  EXPECT_TRUE(clients::detectTaintedSensitiveArg(analyzeFixture("transfer_from_safe.svc"), clients::builtinSpecs()).empty());
}

TEST(TaintedArg, NoSpecs) {
  EXPECT_TRUE(clients::detectTaintedSensitiveArg(analyzeFixture("transfer_from_taint.svc"), {}).empty());
}

TEST(TaintedArg, BadSpecIsSkippedWithDiagnostic) {
  std::vector<std::string> diagnostics;
  std::vector<clients::SensitiveOpSpec> specs{{"", {0}}, {"transferFrom", {7}}};
  EXPECT_TRUE(clients::detectTaintedSensitiveArg(analyzeFixture("transfer_from_taint.svc"), specs, &diagnostics).empty());
  EXPECT_EQ(diagnostics.size(), 2u);
}

TEST(TaintedArg, Definition) {
  EXPECT_TRUE(clients::tainted(sym::Expr::userUniqueValue()));
  EXPECT_TRUE(clients::tainted(sym::add(sym::Expr::userUniqueValue(), sym::num(1))));
  EXPECT_FALSE(clients::tainted(sym::Expr::ownerUniqueValue()));
  EXPECT_FALSE(clients::tainted(sym::Expr::unprivilegedUser()));
}

const char* kCallThenStore = R"(contract V {
  address n;
  mapping balance;
  constructor() { n = 0x77; }
  function withdraw() public {
    call n.notify(msg.sender);
    balance[msg.sender] = 0;
  }
})";

const char* kStoreThenCall = R"(contract V {
  address n;
  mapping balance;
  constructor() { n = 0x77; }
  function withdraw() public {
    balance[msg.sender] = 0;
    call n.notify(msg.sender);
  }
})";

TEST(Reentrancy, StoreAfterCall) {
  auto ws = clients::detectReentrancy(analyzeText(kCallThenStore), reentrant("notify"));
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_EQ(ws[0].kind, WarningKind::Reentrancy);
  EXPECT_EQ(ws[0].function, "withdraw");
}

TEST(Reentrancy, ChecksEffectsInteractions) {
  EXPECT_TRUE(clients::detectReentrancy(analyzeText(kStoreThenCall), reentrant("notify")).empty());
}

TEST(Reentrancy, FactsGateTheDetector) {
  EXPECT_TRUE(clients::detectReentrancy(analyzeText(kCallThenStore), corpus::DomainFacts{}).empty());
  EXPECT_TRUE(clients::detectReentrancy(analyzeText(kCallThenStore), reentrant("ping")).empty());
}

const char* kPublicSwap = R"(contract P {
  address dex;
  address token;
  constructor() { dex = 0xde0; token = 0x2013; }
  function convert(uint amount) public { call dex.swap(token, amount); }
})";

const char* kOwnerSwap = R"(contract P {
  address owner;
  address dex;
  address token;
  constructor() { owner = msg.sender; dex = 0xde0; token = 0x2013; }
  function convert(uint amount) public {
    require(msg.sender == owner);
    call dex.swap(token, amount);
  }
})";

TEST(Untrusted, UsuallyGuardedSwap) {
  auto ws = clients::detectUntrustedReachability(analyzeText(kPublicSwap), usuallyGuarded("swap", 19, 1));
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_EQ(ws[0].kind, WarningKind::UntrustedReachability);
  EXPECT_NE(ws[0].explanation.find("fraction=0.95"), std::string::npos);
  EXPECT_NE(ws[0].explanation.find("samples=20"), std::string::npos);
}

TEST(Untrusted, OwnerOnly) {
  EXPECT_TRUE(clients::detectUntrustedReachability(analyzeText(kOwnerSwap), usuallyGuarded("swap", 19, 1)).empty());
}

TEST(Untrusted, NoFactNoWarning) {
  EXPECT_TRUE(clients::detectUntrustedReachability(analyzeText(kPublicSwap), corpus::DomainFacts{}).empty());
}

TEST(Report, SortedAndSerialized) {
  auto r = analyzeFixture("unguarded_selfdestruct.svc");
  auto ws = clients::detectAll(r, corpus::DomainFacts{});
  ASSERT_FALSE(ws.empty());
  auto copy = ws;
  clients::sortWarnings(copy);
  EXPECT_EQ(clients::toJson(copy), clients::toJson(ws));
  auto doc = nlohmann::json::parse(clients::toJson(ws, {"note"}));
  EXPECT_EQ(doc.at("schema"), "symvalic-warnings/1");
  EXPECT_EQ(doc.at("warnings").size(), ws.size());
  EXPECT_EQ(doc.at("diagnostics")[0], "note");
  EXPECT_EQ(doc.at("warnings")[0].at("kind"), "UNGUARDED_SENSITIVE");
  EXPECT_NE(clients::toText(ws).find("UNGUARDED_SENSITIVE"), std::string::npos);
  EXPECT_EQ(clients::toText({}), "no warnings\n");
}

TEST(Report, KindNames) {
  EXPECT_EQ(clients::toString(WarningKind::TaintedSensitiveArg), "TAINTED_SENSITIVE_ARG");
  EXPECT_EQ(clients::toString(WarningKind::Reentrancy), "REENTRANCY");
  EXPECT_EQ(clients::toString(WarningKind::UntrustedReachability), "UNTRUSTED_REACHABILITY");
  EXPECT_EQ(clients::toString(WarningKind::CorpusAnomaly), "CORPUS_ANOMALY");
}

}  // namespace
