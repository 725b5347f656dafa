#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "symvalic/deps.hpp"
#include "symvalic/ir.hpp"

namespace symvalic::flow {

using deps::DependencyMap;
using sym::Expr;

struct AnalysisConfig {
  deps::DependencyBudget dependencyBudget;
  int arithmeticDepthLimit = 5;
  int transactionRounds = 3;
  std::uint64_t seedRandomness = 0x5eed;
  /// Facts kept per variable (and per statement for reachability); the rest
  /// is dropped and the result flagged as truncated.
  std::size_t maxInferencesPerVariable = 1024;
  std::chrono::milliseconds timeBudget{10000};
};

/// Narrows an analysis to a hand-picked situation. Everything left empty keeps
/// the default behaviour.
struct Scenario {
  /// Only these public functions act as transaction entry points.
  std::set<std::string> entryFunctions;
  /// Replaces the seeds of a parameter, keyed `function.param`.
  std::map<std::string, std::vector<Expr>> argumentSeeds;
  /// Replaces the sender hypotheses of transaction rounds.
  std::vector<Expr> senders;
  /// Replaces the numeric seed pool of every uint parameter.
  std::optional<std::vector<Expr>> numericSeeds;
  /// Extra storage cells present before the first transaction.
  std::vector<std::pair<Expr, Expr>> storage;
  bool runConstructor = true;
};

/// A value a variable may hold, with the dependencies under which it does.
struct ValueFact {
  Expr value;
  DependencyMap deps;

  friend auto operator<=>(const ValueFact& a, const ValueFact& b) {
    if (auto c = a.value <=> b.value; c != 0) return c;
    return a.deps <=> b.deps;
  }
  friend bool operator==(const ValueFact&, const ValueFact&) = default;
};

struct Inference {
  std::string function;
  std::string var;
  Expr value;
  DependencyMap deps;
};

struct ReachabilityFact {
  std::string function;
  ir::StmtId stmt = 0;
  DependencyMap deps;
};

/// An external call or sensitive intrinsic that was reached.
struct CallFact {
  std::string function;
  ir::StmtId stmt = 0;
  ir::Op op = ir::Op::CallExternal;
  /// Method name for external calls, else TRANSFER / SELFDESTRUCT / DELEGATECALL.
  std::string signature;
  /// Values of the call target (external calls only).
  std::vector<ValueFact> target;
  /// Values per argument position.
  std::vector<std::vector<ValueFact>> args;
};

struct StoreFact {
  std::string function;
  ir::StmtId stmt = 0;
  Expr address;
  Expr value;
  DependencyMap deps;
};

struct StorageCell {
  Expr address;
  Expr value;
  int depthBudget = 0;
};

struct AnalysisResult {
  std::shared_ptr<const ir::Contract> contract;
  std::vector<Inference> inferences;
  std::vector<ReachabilityFact> reachability;
  std::vector<CallFact> calls;
  std::vector<StoreFact> stores;
  std::vector<StorageCell> storage;
  int roundsRun = 0;
  bool truncated = false;
  std::string truncationReason;
};

/// Seeds for an entry point: per parameter (in order) and for the sender.
struct SeedSet {
  std::vector<std::vector<ValueFact>> params;
  std::vector<ValueFact> sender;
};

/// Initial values of `f`'s parameters and of the implicit sender. Symbolic
/// address seeds carry the sender hypothesis that can choose them.
SeedSet seedInputs(const ir::Function& f, const ir::Contract& c, std::uint64_t seed);

AnalysisResult analyze(std::shared_ptr<const ir::Contract> c, const AnalysisConfig& cfg, const Scenario& scenario = {});

inline AnalysisResult analyze(const ir::Contract& c, const AnalysisConfig& cfg, const Scenario& scenario = {}) {
  return analyze(std::make_shared<const ir::Contract>(c), cfg, scenario);
}

/// Required dependency entries, by key name; absent entries are wildcards.
struct DepsPattern {
  std::map<std::string, Expr> local;
  std::map<std::string, Expr> transaction;

  static DepsPattern any() { return {}; }
  static DepsPattern sender(const Expr& who) { return {{}, {{"sender", who}}}; }

  bool matches(const DependencyMap& d) const;
};

/// Inferences for `var` of `function` (any function if empty).
std::vector<Inference> varMayBe(const AnalysisResult& r, std::string_view function, std::string_view var,
                                const std::optional<Expr>& value, const DepsPattern& pattern);

std::vector<ReachabilityFact> stmtReachable(const AnalysisResult& r, ir::StmtId stmt, const DepsPattern& pattern);

/// Values returned by `function`, gathered from its RETURN operands.
std::vector<Inference> returnValues(const AnalysisResult& r, std::string_view function);

/// The statement with the given id, if any, and the function holding it.
const ir::Statement* findStatement(const ir::Contract& c, ir::StmtId id, const ir::Function** owner = nullptr);

/// `symvalic-result/1` JSON document (sorted keys, stable order).
std::string toJson(const AnalysisResult& r);
std::string toText(const AnalysisResult& r);

}  // namespace symvalic::flow
