#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symvalic/analysis.hpp"
#include "symvalic/clients.hpp"
#include "symvalic/facts.hpp"

namespace symvalic::corpus {

struct ArgTaint {
  std::size_t tainted = 0;
  std::size_t untainted = 0;

  friend bool operator==(const ArgTaint&, const ArgTaint&) = default;
};

struct ExternalCallSummary {
  std::string signature;
  ir::StmtId stmt = 0;
  /// Every reachability fact of the call requires the owner as sender.
  bool guarded = false;
  /// One entry per argument position; each site counts once per position.
  std::vector<ArgTaint> argTaint;
};

struct FunctionSummary {
  std::string contract;
  std::string function;
  bool reachesDelegatecall = false;
  std::set<int> monetaryArgPositions;
  bool performsInit = false;
  bool manipulableReturn = false;
  bool allowsReentrancy = false;
  bool checkedTransfer = false;
  std::vector<ExternalCallSummary> externalCalls;
};

/// One summary per public or internal function of the analyzed contract.
/// `facts` feeds the corpus-dependent flags (transitive reentrancy,
/// monetary argument propagation).
std::vector<FunctionSummary> summarize(const flow::AnalysisResult& r, const DomainFacts& facts = {});

struct GuardCounts {
  std::size_t guarded = 0;
  std::size_t unguarded = 0;

  friend bool operator==(const GuardCounts&, const GuardCounts&) = default;
};

struct CorpusStats {
  std::map<std::pair<std::string, int>, ArgTaint> args;
  std::map<std::string, GuardCounts> guards;
  std::map<std::string, std::size_t> reentrancyVotes;
  /// Function names with at least one monetary argument position.
  std::set<std::string> monetary;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

CorpusStats aggregate(std::span<const FunctionSummary> summaries);

/// `round` is stamped on every emitted fact.
DomainFacts inferDomainFacts(const CorpusStats& stats, const Thresholds& thresholds, int round = 1);

/// Tainted-argument and untrusted-reachability warnings backed by corpus
/// facts, relabeled CORPUS_ANOMALY.
std::vector<clients::Warning> anomalies(const flow::AnalysisResult& r, const DomainFacts& facts);

/// Specs for each inferred (signature, position), with their support.
std::vector<clients::SensitiveOpSpec> corpusSpecs(const DomainFacts& facts);

struct RefineResult {
  DomainFacts facts;
  /// Rounds actually run.
  int rounds = 0;
  /// The last round reproduced the facts of the one before.
  bool converged = false;
  /// Facts in force after each round, starting with round 1.
  std::vector<DomainFacts> history;
};

/// Refinement over already analyzed contracts. Analyses are reused across
/// rounds; only summaries are recomputed.
RefineResult refine(std::span<const flow::AnalysisResult> results, const Thresholds& thresholds, int rounds = 3);

struct CorpusEntry {
  std::string name;
  std::filesystem::path path;
  std::optional<flow::AnalysisResult> result;
  /// Parse or analysis failure; such entries are skipped.
  std::string error;
};

struct CorpusRun {
  std::filesystem::path dir;
  std::vector<CorpusEntry> entries;

  std::vector<flow::AnalysisResult> results() const;
  bool truncated() const;
};

/// Parses and analyzes every `*.svc` file of `dir` (sorted by file name),
/// using up to `jobs` worker threads.
CorpusRun analyzeCorpus(const std::filesystem::path& dir, const flow::AnalysisConfig& cfg, unsigned jobs = 1);

/// Writes `out/<contract>.result.json` for each analyzed entry.
void writeResults(const CorpusRun& run);

/// Writes `out/facts.round-N.json` for every round of `refined`.
void writeFacts(const std::filesystem::path& dir, const RefineResult& refined, const Thresholds& thresholds);

/// Facts of the newest `out/facts.round-N.json`, if any.
std::optional<DomainFacts> latestFacts(const std::filesystem::path& dir);

}  // namespace symvalic::corpus
