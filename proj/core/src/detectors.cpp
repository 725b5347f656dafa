#include <algorithm>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "symvalic/clients.hpp"

namespace symvalic::clients {

namespace {

using flow::AnalysisResult;
using flow::CallFact;
using flow::ReachabilityFact;
using sym::Expr;

bool underUser(const deps::DependencyMap& d) {
  const Expr* s = d.sender();
  return s && *s == Expr::unprivilegedUser();
}

/// The smallest reachability fact of `stmt` under the unprivileged user.
const ReachabilityFact* userReach(const AnalysisResult& r, ir::StmtId stmt) {
  const ReachabilityFact* best = nullptr;
  for (const auto& f : r.reachability)
    if (f.stmt == stmt && underUser(f.deps) && (!best || f.deps < best->deps)) best = &f;
  return best;
}

std::string contractName(const AnalysisResult& r) { return r.contract ? r.contract->name : std::string(); }

Warning make(const AnalysisResult& r, const std::string& function, WarningKind kind, ir::StmtId stmt) {
  Warning w;
  w.contract = contractName(r);
  w.function = function;
  w.kind = kind;
  w.stmt = stmt;
  return w;
}

bool intrinsic(ir::Op op) { return op == ir::Op::Transfer || op == ir::Op::SelfDestruct || op == ir::Op::DelegateCall; }

std::string fmtFraction(double f) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << f;
  return os.str();
}

}  // namespace

std::string_view toString(WarningKind k) {
  switch (k) {
  case WarningKind::UnguardedSensitive: return "UNGUARDED_SENSITIVE";
  case WarningKind::TaintedSensitiveArg: return "TAINTED_SENSITIVE_ARG";
  case WarningKind::Reentrancy: return "REENTRANCY";
  case WarningKind::UntrustedReachability: return "UNTRUSTED_REACHABILITY";
  case WarningKind::CorpusAnomaly: return "CORPUS_ANOMALY";
  }
  return "?";
}

std::vector<SensitiveOpSpec> builtinSpecs() {
  return {
      {"TRANSFER", {0, 1}, SpecSource::Builtin, 0, 0},
      {"SELFDESTRUCT", {0}, SpecSource::Builtin, 0, 0},
      {"DELEGATECALL", {0}, SpecSource::Builtin, 0, 0},
      {"transferFrom", {0, 1, 2}, SpecSource::Builtin, 0, 0},
  };
}

void sortWarnings(std::vector<Warning>& ws) {
  std::stable_sort(ws.begin(), ws.end(), [](const Warning& a, const Warning& b) {
    return std::tie(a.contract, a.function, a.stmt, a.kind) < std::tie(b.contract, b.function, b.stmt, b.kind);
  });
}

bool tainted(const Expr& e) { return sym::contains(e, Expr::userUniqueValue()); }

std::vector<Warning> detectUnguardedSensitive(const AnalysisResult& r) {
  std::vector<Warning> out;
  for (const auto& c : r.calls) {
    if (!intrinsic(c.op)) continue;
    const ReachabilityFact* reach = userReach(r, c.stmt);
    if (!reach) continue;
    Warning w = make(r, c.function, WarningKind::UnguardedSensitive, c.stmt);
    w.witness.deps = reach->deps;
    w.explanation = c.signature + " is reachable by an unprivileged sender";
    out.push_back(std::move(w));
  }
  sortWarnings(out);
  return out;
}

std::vector<Warning> detectTaintedSensitiveArg(const AnalysisResult& r, const std::vector<SensitiveOpSpec>& specs,
                                               std::vector<std::string>* diagnostics) {
  std::vector<Warning> out;
  for (const auto& spec : specs) {
    if (spec.signature.empty()) {
      if (diagnostics) diagnostics->push_back("sensitive-op spec without a signature skipped");
      continue;
    }
    for (const auto& c : r.calls) {
      if (c.signature != spec.signature) continue;
      for (int pos : spec.positions) {
        if (pos < 0 || static_cast<std::size_t>(pos) >= c.args.size()) {
          if (diagnostics)
            diagnostics->push_back(contractName(r) + "." + c.function + ": " + spec.signature + " has no argument " +
                                   std::to_string(pos) + "; spec skipped");
          continue;
        }
        const flow::ValueFact* witness = nullptr;
        for (const auto& f : c.args[static_cast<std::size_t>(pos)])
          if (tainted(f.value) && underUser(f.deps) && (!witness || f < *witness)) witness = &f;
        if (!witness) continue;
        Warning w = make(r, c.function, WarningKind::TaintedSensitiveArg, c.stmt);
        w.witness.value = witness->value;
        w.witness.position = pos;
        w.witness.deps = witness->deps;
        w.explanation = "argument " + std::to_string(pos) + " of " + spec.signature + " can be chosen by an unprivileged sender";
        if (spec.source == SpecSource::CorpusInferred)
          w.explanation += " (corpus: fraction=" + fmtFraction(spec.fraction) + ", samples=" + std::to_string(spec.samples) + ")";
        out.push_back(std::move(w));
      }
    }
  }
  sortWarnings(out);
  return out;
}

std::vector<Warning> detectReentrancy(const AnalysisResult& r, const corpus::DomainFacts& facts) {
  std::vector<Warning> out;
  if (!r.contract) return out;
  for (const auto& c : r.calls) {
    if (c.op != ir::Op::CallExternal || !facts.allowsReentrancy(c.signature)) continue;
    const ReachabilityFact* reach = userReach(r, c.stmt);
    if (!reach) continue;
    const ir::Function* fn = r.contract->function(c.function);
    if (!fn) continue;
    for (ir::StmtId later : ir::statementsAfter(*fn, c.stmt)) {
      const ir::Statement* s = flow::findStatement(*r.contract, later);
      if (!s || s->op != ir::Op::SStore || !userReach(r, later)) continue;
      Warning w = make(r, c.function, WarningKind::Reentrancy, c.stmt);
      w.witness.deps = reach->deps;
      w.explanation = "call to " + c.signature + " may re-enter before the storage write at statement " +
                      std::to_string(later);
      out.push_back(std::move(w));
      break;
    }
  }
  sortWarnings(out);
  return out;
}

std::vector<Warning> detectUntrustedReachability(const AnalysisResult& r, const corpus::DomainFacts& facts) {
  std::vector<Warning> out;
  for (const auto& c : r.calls) {
    if (c.op != ir::Op::CallExternal) continue;
    const corpus::GuardFact* g = facts.guard(c.signature);
    if (!g) continue;
    const ReachabilityFact* reach = userReach(r, c.stmt);
    if (!reach) continue;
    Warning w = make(r, c.function, WarningKind::UntrustedReachability, c.stmt);
    w.witness.deps = reach->deps;
    w.explanation = c.signature + " is usually guarded but reachable by an unprivileged sender (corpus: fraction=" +
                    fmtFraction(g->fraction) + ", samples=" + std::to_string(g->samples()) + ")";
    out.push_back(std::move(w));
  }
  sortWarnings(out);
  return out;
}

std::vector<Warning> detectAll(const AnalysisResult& r, const corpus::DomainFacts& facts,
                               std::vector<std::string>* diagnostics) {
  std::vector<Warning> out = detectUnguardedSensitive(r);
  auto add = [&](std::vector<Warning> ws) { std::move(ws.begin(), ws.end(), std::back_inserter(out)); };
  add(detectTaintedSensitiveArg(r, builtinSpecs(), diagnostics));
  add(detectReentrancy(r, facts));
  add(detectUntrustedReachability(r, facts));
  sortWarnings(out);
  return out;
}

std::string toJson(const std::vector<Warning>& ws, const std::vector<std::string>& diagnostics) {
  using nlohmann::json;
  auto side = [](const deps::Mappings& m) {
    json o = json::object();
    for (const auto& [k, v] : m) o[k.name] = v.str();
    return o;
  };
  json list = json::array();
  for (const auto& w : ws) {
    json witness{{"deps", w.witness.deps.str()},
                 {"localDeps", side(w.witness.deps.local)},
                 {"txDeps", side(w.witness.deps.transaction)}};
    if (w.witness.value) witness["value"] = w.witness.value->str();
    if (w.witness.position >= 0) witness["position"] = w.witness.position;
    list.push_back({{"contract", w.contract},
                    {"function", w.function},
                    {"kind", std::string(toString(w.kind))},
                    {"stmt", w.stmt},
                    {"witness", std::move(witness)},
                    {"explanation", w.explanation}});
  }
  json doc{{"schema", "symvalic-warnings/1"}, {"warnings", std::move(list)}, {"diagnostics", diagnostics}};
  return doc.dump(2) + "\n";
}

std::string toText(const std::vector<Warning>& ws) {
  std::ostringstream os;
  for (const auto& w : ws) {
    os << toString(w.kind) << ' ' << w.contract << '.' << w.function << " @" << w.stmt << ": " << w.explanation << '\n';
    os << "  witness: ";
    if (w.witness.value) os << w.witness.value->str() << ' ';
    os << w.witness.deps.str() << '\n';
  }
  if (ws.empty()) os << "no warnings\n";
  return os.str();
}

}  // namespace symvalic::clients
