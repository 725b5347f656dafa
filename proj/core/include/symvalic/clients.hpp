#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "symvalic/analysis.hpp"
#include "symvalic/facts.hpp"

namespace symvalic::clients {

enum class WarningKind : std::uint8_t {
  UnguardedSensitive,
  TaintedSensitiveArg,
  Reentrancy,
  UntrustedReachability,
  CorpusAnomaly,
};

std::string_view toString(WarningKind k);

enum class SpecSource : std::uint8_t { Builtin, CorpusInferred };

struct SensitiveOpSpec {
  /// External method name, or TRANSFER / SELFDESTRUCT / DELEGATECALL.
  std::string signature;
  std::set<int> positions;
  SpecSource source = SpecSource::Builtin;
  /// Corpus support, for inferred specs.
  std::size_t samples = 0;
  double fraction = 0;
};

/// TRANSFER(to, amount), SELFDESTRUCT(beneficiary), DELEGATECALL(target),
/// transferFrom(from, to, amount).
std::vector<SensitiveOpSpec> builtinSpecs();

struct Witness {
  /// Set for value witnesses; reachability witnesses only carry deps.
  std::optional<sym::Expr> value;
  int position = -1;
  deps::DependencyMap deps;
};

struct Warning {
  std::string contract;
  std::string function;
  WarningKind kind = WarningKind::UnguardedSensitive;
  ir::StmtId stmt = 0;
  Witness witness;
  std::string explanation;
};

/// Orders by contract, function, statement, kind.
void sortWarnings(std::vector<Warning>& ws);

/// True if `e` is, or contains, <<user-unique-value>>.
bool tainted(const sym::Expr& e);

std::vector<Warning> detectUnguardedSensitive(const flow::AnalysisResult& r);

/// Specs whose positions do not fit a call site are skipped; a note is
/// appended to `diagnostics` if given.
std::vector<Warning> detectTaintedSensitiveArg(const flow::AnalysisResult& r, const std::vector<SensitiveOpSpec>& specs,
                                               std::vector<std::string>* diagnostics = nullptr);

std::vector<Warning> detectReentrancy(const flow::AnalysisResult& r, const corpus::DomainFacts& facts);

std::vector<Warning> detectUntrustedReachability(const flow::AnalysisResult& r, const corpus::DomainFacts& facts);

/// Every detector above with the builtin specs, sorted.
std::vector<Warning> detectAll(const flow::AnalysisResult& r, const corpus::DomainFacts& facts,
                               std::vector<std::string>* diagnostics = nullptr);

/// `symvalic-warnings/1` JSON document.
std::string toJson(const std::vector<Warning>& ws, const std::vector<std::string>& diagnostics = {});
std::string toText(const std::vector<Warning>& ws);

}  // namespace symvalic::clients
