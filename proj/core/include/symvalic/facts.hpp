#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace symvalic::corpus {

struct Thresholds {
  std::size_t minSamples = 10;
  double untaintedFraction = 0.9;
  double guardedFraction = 0.9;
};

/// (signature, position) is usually untainted across the corpus.
struct ArgFact {
  std::string signature;
  int position = 0;
  std::size_t tainted = 0;
  std::size_t untainted = 0;
  double fraction = 0;  // untainted / samples
  int round = 0;

  std::size_t samples() const { return tainted + untainted; }
};

/// Calls to `signature` are usually reachable only by trusted callers.
struct GuardFact {
  std::string signature;
  std::size_t guarded = 0;
  std::size_t unguarded = 0;
  double fraction = 0;  // guarded / samples
  int round = 0;

  std::size_t samples() const { return guarded + unguarded; }
};

/// Some implementation of `signature` yields control to a caller-chosen party.
struct ReentrancyFact {
  std::string signature;
  std::size_t votes = 0;
  int round = 0;
};

struct DomainFacts {
  std::vector<ArgFact> sensitiveArgs;
  std::vector<ReentrancyFact> reentrancyAllowing;
  std::vector<GuardFact> usuallyGuarded;
  /// Signatures whose arguments carry quantities with monetary significance.
  std::set<std::string> monetary;

  bool allowsReentrancy(const std::string& signature) const;
  const GuardFact* guard(const std::string& signature) const;
  bool empty() const { return sensitiveArgs.empty() && reentrancyAllowing.empty() && usuallyGuarded.empty(); }

  /// Same facts, ignoring counts and rounds.
  bool sameFacts(const DomainFacts& other) const;
  /// Adds facts of `newer` not yet present; existing facts keep their round.
  void absorb(const DomainFacts& newer);
};

/// `symvalic-facts/1` document for the facts in force after `round`.
std::string factsToJson(const DomainFacts& facts, const Thresholds& thresholds, int round, bool converged);
/// Throws std::runtime_error on malformed input.
DomainFacts factsFromJson(std::string_view text);

}  // namespace symvalic::corpus
