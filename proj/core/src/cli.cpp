#include "symvalic/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "symvalic/corpus.hpp"

namespace symvalic::cli {

namespace {

using nlohmann::json;

struct Options {
  flow::AnalysisConfig analysis;
  corpus::Thresholds thresholds;
  std::string format = "json";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  int rounds = 3;
  std::string input;
  std::string factsFile;
  long long timeBudgetMs = 10000;
};

/// Thrown for failures that map to the usage/parse exit status.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path + ": cannot read file");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::shared_ptr<const ir::Contract> load(const std::string& path) {
  std::string text = slurp(path);
  try {
    return std::make_shared<const ir::Contract>(ir::parse(text));
  } catch (const ir::ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

int exitFor(bool failed, bool truncated, bool warned) {
  if (failed) return kUsage;
  if (truncated) return kTruncated;
  return warned ? kWarnings : kClean;
}

void reportTruncation(const flow::AnalysisResult& r, const std::string& where, std::ostream& err) {
  if (r.truncated) err << where << ": analysis truncated: " << r.truncationReason << '\n';
}

json summariesJson(const std::vector<corpus::FunctionSummary>& summaries) {
  json list = json::array();
  for (const auto& s : summaries) {
    json calls = json::array();
    for (const auto& c : s.externalCalls) {
      json taint = json::array();
      for (const auto& t : c.argTaint) taint.push_back(t.tainted ? "tainted" : "untainted");
      calls.push_back({{"signature", c.signature}, {"stmt", c.stmt}, {"guarded", c.guarded}, {"argTaint", taint}});
    }
    list.push_back({{"contract", s.contract},
                    {"function", s.function},
                    {"reachesDelegatecall", s.reachesDelegatecall},
                    {"monetaryArgPositions", s.monetaryArgPositions},
                    {"performsInit", s.performsInit},
                    {"manipulableReturn", s.manipulableReturn},
                    {"allowsReentrancy", s.allowsReentrancy},
                    {"checkedTransfer", s.checkedTransfer},
                    {"externalCalls", calls}});
  }
  return list;
}

std::string factsText(const corpus::DomainFacts& f, int rounds, bool converged) {
  std::ostringstream os;
  os << "rounds " << rounds << (converged ? " (converged)" : " (not converged)") << '\n';
  for (const auto& a : f.sensitiveArgs)
    os << "sensitive-arg " << a.signature << '#' << a.position << " fraction=" << a.fraction << " samples=" << a.samples()
       << " round=" << a.round << '\n';
  for (const auto& g : f.usuallyGuarded)
    os << "usually-guarded " << g.signature << " fraction=" << g.fraction << " samples=" << g.samples()
       << " round=" << g.round << '\n';
  for (const auto& r : f.reentrancyAllowing)
    os << "reentrancy-allowing " << r.signature << " votes=" << r.votes << " round=" << r.round << '\n';
  for (const auto& m : f.monetary) os << "monetary " << m << '\n';
  return os.str();
}

/// Analyzes a corpus directory; per-file failures go to `err`.
corpus::CorpusRun analyzeDir(const Options& o, std::ostream& err, bool& failed) {
  auto run = corpus::analyzeCorpus(o.input, o.analysis, o.jobs);
  for (const auto& e : run.entries) {
    if (!e.error.empty()) {
      err << e.error << '\n';
      failed = true;
    } else if (e.result) {
      reportTruncation(*e.result, e.path.string(), err);
    }
  }
  corpus::writeResults(run);
  return run;
}

int cmdAnalyze(const Options& o, std::ostream& out, std::ostream& err) {
  auto r = flow::analyze(load(o.input), o.analysis);
  reportTruncation(r, o.input, err);
  out << (o.format == "text" ? flow::toText(r) : flow::toJson(r));
  return exitFor(false, r.truncated, false);
}

int cmdScan(const Options& o, std::ostream& out, std::ostream& err) {
  auto r = flow::analyze(load(o.input), o.analysis);
  reportTruncation(r, o.input, err);
  corpus::DomainFacts facts;
  if (!o.factsFile.empty()) {
    try {
      facts = corpus::factsFromJson(slurp(o.factsFile));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(o.factsFile + ": " + e.what());
    }
  }
  std::vector<std::string> diagnostics;
  auto warnings = clients::detectAll(r, facts, &diagnostics);
  if (!facts.empty()) {
    auto extra = corpus::anomalies(r, facts);
    warnings.insert(warnings.end(), extra.begin(), extra.end());
    clients::sortWarnings(warnings);
  }
  for (const auto& d : diagnostics) err << d << '\n';
  out << (o.format == "text" ? clients::toText(warnings) : clients::toJson(warnings, diagnostics));
  return exitFor(false, r.truncated, !warnings.empty());
}

int cmdCorpusBuild(const Options& o, std::ostream& out, std::ostream& err) {
  bool failed = false;
  auto run = analyzeDir(o, err, failed);
  std::vector<corpus::FunctionSummary> summaries;
  for (const auto& r : run.results()) {
    auto s = corpus::summarize(r);
    summaries.insert(summaries.end(), s.begin(), s.end());
  }
  if (o.format == "text") {
    for (const auto& s : summaries) {
      out << s.contract << '.' << s.function << ": calls=" << s.externalCalls.size()
          << (s.reachesDelegatecall ? " delegatecall" : "") << (s.performsInit ? " init" : "")
          << (s.manipulableReturn ? " manipulable-return" : "") << (s.allowsReentrancy ? " reentrancy" : "")
          << (s.checkedTransfer ? " checked-transfer" : "") << '\n';
    }
  } else {
    json doc{{"schema", "symvalic-summaries/1"}, {"summaries", summariesJson(summaries)}};
    out << doc.dump(2) << '\n';
  }
  return exitFor(failed, run.truncated(), false);
}

int cmdCorpusInfer(const Options& o, std::ostream& out, std::ostream& err) {
  bool failed = false;
  auto run = analyzeDir(o, err, failed);
  auto results = run.results();
  auto refined = corpus::refine(results, o.thresholds, o.rounds);
  corpus::writeFacts(o.input, refined, o.thresholds);
  if (o.format == "text") out << factsText(refined.facts, refined.rounds, refined.converged);
  else out << corpus::factsToJson(refined.facts, o.thresholds, refined.rounds, refined.converged);
  return exitFor(failed, run.truncated(), false);
}

int cmdCorpusScan(const Options& o, std::ostream& out, std::ostream& err) {
  bool failed = false;
  auto run = analyzeDir(o, err, failed);
  auto results = run.results();
  auto refined = corpus::refine(results, o.thresholds, o.rounds);
  corpus::writeFacts(o.input, refined, o.thresholds);
  std::vector<clients::Warning> warnings;
  for (const auto& r : results) {
    auto ws = corpus::anomalies(r, refined.facts);
    warnings.insert(warnings.end(), ws.begin(), ws.end());
  }
  clients::sortWarnings(warnings);
  out << (o.format == "text" ? clients::toText(warnings) : clients::toJson(warnings));
  return exitFor(failed, run.truncated(), !warnings.empty());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Symbolic value-flow analysis for contracts", "symvalic"};
  app.require_subcommand(1);

  auto& budget = o.analysis.dependencyBudget;
  app.add_option("--dep-args", budget.localArguments, "Local argument dependencies kept")->check(CLI::NonNegativeNumber);
  app.add_option("--dep-storage-loads", budget.storageLoads, "Storage-load dependencies kept")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--dep-tx-args", budget.txArguments, "Transaction argument dependencies kept")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--arith-depth", o.analysis.arithmeticDepthLimit, "Arithmetic depth limit")->check(CLI::Range(0, 64));
  app.add_option("--tx-rounds", o.analysis.transactionRounds, "Transaction rounds")->check(CLI::Range(1, 64));
  app.add_option("--seed", o.analysis.seedRandomness, "Seed for input sampling")->envname("SYMVALIC_SEED");
  app.add_option("--max-inferences", o.analysis.maxInferencesPerVariable, "Facts kept per variable")
      ->check(CLI::PositiveNumber);
  app.add_option("--time-budget-ms", o.timeBudgetMs, "Per-contract time budget")->check(CLI::PositiveNumber);
  app.add_option("--min-samples", o.thresholds.minSamples, "Corpus samples required for a fact");
  app.add_option("--untainted-frac", o.thresholds.untaintedFraction, "Untainted fraction for a sensitive argument")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--guarded-frac", o.thresholds.guardedFraction, "Guarded fraction for a usually-guarded call")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--jobs", o.jobs, "Worker threads for corpus commands")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto* analyze = app.add_subcommand("analyze", "Emit the analysis result of one contract");
  analyze->add_option("file", o.input, "Contract source")->required();
  auto* scan = app.add_subcommand("scan", "Run the detectors on one contract");
  scan->add_option("file", o.input, "Contract source")->required();
  scan->add_option("--facts", o.factsFile, "Corpus facts file");
  auto* build = app.add_subcommand("corpus-build", "Analyze and summarize every .svc file of a directory");
  build->add_option("dir", o.input, "Corpus directory")->required();
  auto* infer = app.add_subcommand("corpus-infer", "Infer domain facts over a corpus");
  infer->add_option("dir", o.input, "Corpus directory")->required();
  infer->add_option("--rounds", o.rounds, "Refinement rounds")->check(CLI::Range(1, 64));
  auto* cscan = app.add_subcommand("corpus-scan", "Report corpus anomalies");
  cscan->add_option("dir", o.input, "Corpus directory")->required();
  cscan->add_option("--rounds", o.rounds, "Refinement rounds")->check(CLI::Range(1, 64));
  for (auto* sub : {analyze, scan, build, infer, cscan}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kClean;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  o.analysis.timeBudget = std::chrono::milliseconds(o.timeBudgetMs);

  try {
    if (analyze->parsed()) return cmdAnalyze(o, out, err);
    if (scan->parsed()) return cmdScan(o, out, err);
    if (build->parsed()) return cmdCorpusBuild(o, out, err);
    if (infer->parsed()) return cmdCorpusInfer(o, out, err);
    return cmdCorpusScan(o, out, err);
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace symvalic::cli
