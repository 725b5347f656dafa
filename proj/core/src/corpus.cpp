#include "symvalic/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace symvalic::corpus {

namespace {

using flow::AnalysisResult;
using sym::Expr;

const Expr* senderOf(const deps::DependencyMap& d) { return d.sender(); }

bool under(const deps::DependencyMap& d, const Expr& who) {
  const Expr* s = senderOf(d);
  return s && *s == who;
}

bool attackerChosen(const flow::ValueFact& f) {
  return clients::tainted(f.value) && under(f.deps, Expr::unprivilegedUser());
}

std::vector<const flow::ReachabilityFact*> reachOf(const AnalysisResult& r, ir::StmtId stmt) {
  std::vector<const flow::ReachabilityFact*> out;
  for (const auto& f : r.reachability)
    if (f.stmt == stmt) out.push_back(&f);
  return out;
}

bool onlyOwner(const std::vector<const flow::ReachabilityFact*>& reach) {
  return !reach.empty() && std::all_of(reach.begin(), reach.end(),
                                       [](const auto* f) { return under(f->deps, Expr::owner()); });
}

/// Variables of `f` computed, directly or not, from parameter `p`.
std::set<std::string> derivedFrom(const ir::Function& f, const std::string& p) {
  std::set<std::string> vars{p};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& b : f.blocks)
      for (const auto& s : b.stmts) {
        if (!s.result || vars.contains(*s.result)) continue;
        bool uses = std::any_of(s.operands.begin(), s.operands.end(),
                                [&](const ir::Operand& o) { return o.isVariable() && vars.contains(o.name); });
        if (uses) grew = vars.insert(*s.result).second || grew;
      }
  }
  return vars;
}

std::set<int> monetaryPositions(const ir::Function& f, const DomainFacts& facts) {
  std::set<int> out;
  for (std::size_t p = 0; p < f.params.size(); ++p) {
    auto vars = derivedFrom(f, f.params[p].name);
    auto hit = [&](const ir::Operand& o) { return o.isVariable() && vars.contains(o.name); };
    bool monetary = false;
    for (const auto& b : f.blocks)
      for (const auto& s : b.stmts) {
        if (s.op == ir::Op::Transfer && s.operands.size() > 1 && hit(s.operands[1])) monetary = true;
        if (s.op == ir::Op::CallExternal && facts.monetary.contains(s.callee))
          monetary = monetary || std::any_of(s.operands.begin() + 1, s.operands.end(), hit);
      }
    if (monetary) out.insert(static_cast<int>(p));
  }
  return out;
}

/// Addresses the SLOAD defining `var` in `fn` may read.
std::vector<Expr> loadAddresses(const AnalysisResult& r, const ir::Function& fn, const std::string& var) {
  std::vector<Expr> out;
  for (const auto& b : fn.blocks)
    for (const auto& s : b.stmts) {
      if (s.op != ir::Op::SLoad || s.result != var) continue;
      const auto& a = s.operands.at(0);
      if (a.kind == ir::Operand::Kind::Slot) out.push_back(Expr::constant(a.value, sym::Radix::Hex));
      else if (a.isVariable())
        for (const auto& inf : r.inferences)
          if (inf.function == fn.name && inf.var == a.name) out.push_back(inf.value);
    }
  return out;
}

bool writableByUser(const AnalysisResult& r, const Expr& address) {
  return std::any_of(r.stores.begin(), r.stores.end(), [&](const flow::StoreFact& s) {
    return s.address == address && under(s.deps, Expr::unprivilegedUser());
  });
}

FunctionSummary summarizeOne(const AnalysisResult& r, const ir::Function& fn, const DomainFacts& facts) {
  const ir::Contract& c = *r.contract;
  FunctionSummary out;
  out.contract = c.name;
  out.function = fn.name;
  out.monetaryArgPositions = monetaryPositions(fn, facts);

  bool anyTransfer = false;
  bool transferOnlyOwner = true;
  for (const auto& call : r.calls) {
    if (call.function != fn.name) continue;
    auto reach = reachOf(r, call.stmt);
    if (reach.empty()) continue;
    switch (call.op) {
    case ir::Op::DelegateCall: out.reachesDelegatecall = true; break;
    case ir::Op::Transfer:
      anyTransfer = true;
      transferOnlyOwner = transferOnlyOwner && onlyOwner(reach);
      break;
    case ir::Op::CallExternal: {
      ExternalCallSummary site;
      site.signature = call.signature;
      site.stmt = call.stmt;
      site.guarded = onlyOwner(reach);
      for (const auto& arg : call.args) {
        bool t = std::any_of(arg.begin(), arg.end(), attackerChosen);
        site.argTaint.push_back(t ? ArgTaint{1, 0} : ArgTaint{0, 1});
        if (t && facts.allowsReentrancy(call.signature)) out.allowsReentrancy = true;
      }
      if (std::any_of(call.target.begin(), call.target.end(), attackerChosen)) out.allowsReentrancy = true;
      out.externalCalls.push_back(std::move(site));
      break;
    }
    default: break;
    }
  }
  out.checkedTransfer = anyTransfer && transferOnlyOwner;

  if (const ir::Function* ctor = c.constructor()) {
    std::set<Expr> initialized;
    for (const auto& s : r.stores)
      if (s.function == ctor->name) initialized.insert(s.address);
    for (const auto& s : r.stores)
      if (s.function == fn.name && initialized.contains(s.address) && !under(s.deps, Expr::owner()) &&
          !reachOf(r, s.stmt).empty())
        out.performsInit = true;
  }

  for (const auto& ret : flow::returnValues(r, fn.name)) {
    for (const auto& [key, value] : ret.deps.local) {
      if (key.kind != deps::KeyKind::StorageLoad) continue;
      for (const auto& addr : loadAddresses(r, fn, key.name))
        if (writableByUser(r, addr)) out.manipulableReturn = true;
    }
  }
  return out;
}

bool atLeast(std::size_t part, std::size_t total, double fraction) {
  return static_cast<double>(part) >= fraction * static_cast<double>(total) - 1e-9;
}

}  // namespace

std::vector<FunctionSummary> summarize(const AnalysisResult& r, const DomainFacts& facts) {
  std::vector<FunctionSummary> out;
  if (!r.contract) return out;
  for (const auto& fn : r.contract->functions)
    if (!fn.isConstructor()) out.push_back(summarizeOne(r, fn, facts));
  return out;
}

CorpusStats aggregate(std::span<const FunctionSummary> summaries) {
  CorpusStats stats;
  for (const auto& s : summaries) {
    for (const auto& call : s.externalCalls) {
      for (std::size_t p = 0; p < call.argTaint.size(); ++p) {
        auto& counts = stats.args[{call.signature, static_cast<int>(p)}];
        counts.tainted += call.argTaint[p].tainted;
        counts.untainted += call.argTaint[p].untainted;
      }
      auto& g = stats.guards[call.signature];
      (call.guarded ? g.guarded : g.unguarded) += 1;
    }
    if (s.allowsReentrancy) ++stats.reentrancyVotes[s.function];
    if (!s.monetaryArgPositions.empty()) stats.monetary.insert(s.function);
  }
  return stats;
}

DomainFacts inferDomainFacts(const CorpusStats& stats, const Thresholds& th, int round) {
  DomainFacts facts;
  facts.monetary = stats.monetary;
  for (const auto& [key, counts] : stats.args) {
    std::size_t n = counts.tainted + counts.untainted;
    if (n == 0 || n < th.minSamples || !atLeast(counts.untainted, n, th.untaintedFraction)) continue;
    facts.sensitiveArgs.push_back({key.first, key.second, counts.tainted, counts.untainted,
                                   static_cast<double>(counts.untainted) / static_cast<double>(n), round});
  }
  for (const auto& [sig, g] : stats.guards) {
    std::size_t n = g.guarded + g.unguarded;
    if (!facts.monetary.contains(sig)) continue;
    if (n == 0 || n < th.minSamples || !atLeast(g.guarded, n, th.guardedFraction)) continue;
    facts.usuallyGuarded.push_back(
        {sig, g.guarded, g.unguarded, static_cast<double>(g.guarded) / static_cast<double>(n), round});
  }
  for (const auto& [sig, votes] : stats.reentrancyVotes)
    if (votes > 0) facts.reentrancyAllowing.push_back({sig, votes, round});
  return facts;
}

std::vector<clients::SensitiveOpSpec> corpusSpecs(const DomainFacts& facts) {
  std::vector<clients::SensitiveOpSpec> specs;
  for (const auto& f : facts.sensitiveArgs)
    specs.push_back({f.signature, {f.position}, clients::SpecSource::CorpusInferred, f.samples(), f.fraction});
  return specs;
}

std::vector<clients::Warning> anomalies(const AnalysisResult& r, const DomainFacts& facts) {
  auto out = clients::detectTaintedSensitiveArg(r, corpusSpecs(facts));
  auto reach = clients::detectUntrustedReachability(r, facts);
  std::move(reach.begin(), reach.end(), std::back_inserter(out));
  for (auto& w : out) w.kind = clients::WarningKind::CorpusAnomaly;
  clients::sortWarnings(out);
  return out;
}

RefineResult refine(std::span<const AnalysisResult> results, const Thresholds& thresholds, int rounds) {
  RefineResult out;
  DomainFacts current;
  for (int k = 1; k <= std::max(rounds, 1); ++k) {
    std::vector<FunctionSummary> summaries;
    for (const auto& r : results) {
      auto s = summarize(r, current);
      std::move(s.begin(), s.end(), std::back_inserter(summaries));
    }
    DomainFacts next = current;
    next.absorb(inferDomainFacts(aggregate(summaries), thresholds, k));
    out.rounds = k;
    out.history.push_back(next);
    bool same = next.sameFacts(current);
    current = std::move(next);
    if (same) {
      out.converged = true;
      break;
    }
  }
  out.facts = std::move(current);
  return out;
}

std::vector<AnalysisResult> CorpusRun::results() const {
  std::vector<AnalysisResult> out;
  for (const auto& e : entries)
    if (e.result) out.push_back(*e.result);
  return out;
}

bool CorpusRun::truncated() const {
  return std::any_of(entries.begin(), entries.end(), [](const CorpusEntry& e) { return e.result && e.result->truncated; });
}

CorpusRun analyzeCorpus(const std::filesystem::path& dir, const flow::AnalysisConfig& cfg, unsigned jobs) {
  namespace fs = std::filesystem;
  CorpusRun run;
  run.dir = dir;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".svc") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  run.entries.resize(files.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      CorpusEntry& entry = run.entries[i];
      entry.path = files[i];
      entry.name = files[i].stem().string();
      try {
        std::ifstream in(files[i]);
        std::stringstream text;
        text << in.rdbuf();
        auto contract = std::make_shared<const ir::Contract>(ir::parse(text.str()));
        entry.name = contract->name;
        entry.result = flow::analyze(contract, cfg);
      } catch (const ir::ParseError& e) {
        entry.error = files[i].filename().string() + ":" + e.what();
      } catch (const std::exception& e) {
        entry.error = files[i].filename().string() + ": " + e.what();
      }
    }
  };
  unsigned n = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  return run;
}

void writeResults(const CorpusRun& run) {
  auto out = run.dir / "out";
  std::filesystem::create_directories(out);
  for (const auto& e : run.entries) {
    if (!e.result) continue;
    std::ofstream(out / (e.name + ".result.json")) << flow::toJson(*e.result);
  }
}

void writeFacts(const std::filesystem::path& dir, const RefineResult& refined, const Thresholds& thresholds) {
  auto out = dir / "out";
  std::filesystem::create_directories(out);
  for (std::size_t i = 0; i < refined.history.size(); ++i) {
    int round = static_cast<int>(i) + 1;
    bool converged = refined.converged && i + 1 == refined.history.size();
    std::ofstream(out / ("facts.round-" + std::to_string(round) + ".json"))
        << factsToJson(refined.history[i], thresholds, round, converged);
  }
}

std::optional<DomainFacts> latestFacts(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  auto out = dir / "out";
  if (!fs::is_directory(out)) return std::nullopt;
  int best = 0;
  fs::path bestPath;
  for (const auto& e : fs::directory_iterator(out)) {
    auto name = e.path().filename().string();
    const std::string prefix = "facts.round-";
    if (!name.starts_with(prefix) || !name.ends_with(".json")) continue;
    try {
      int round = std::stoi(name.substr(prefix.size()));
      if (round > best) {
        best = round;
        bestPath = e.path();
      }
    } catch (const std::exception&) {
    }
  }
  if (best == 0) return std::nullopt;
  std::ifstream in(bestPath);
  std::stringstream text;
  text << in.rdbuf();
  return factsFromJson(text.str());
}

}  // namespace symvalic::corpus
