#include <algorithm>
#include <set>
#include <variant>

#include "symvalic/analysis.hpp"
#include "symvalic/reasoner.hpp"

namespace symvalic::flow {

namespace {

bool matchSide(const std::map<std::string, Expr>& want, const deps::Mappings& have) {
  for (const auto& [name, value] : want) {
    auto it = std::find_if(have.begin(), have.end(), [&](const auto& kv) { return kv.first.name == name; });
    if (it == have.end() || !(sym::normalize(it->second) == sym::normalize(value))) return false;
  }
  return true;
}

}  // namespace

bool DepsPattern::matches(const DependencyMap& d) const {
  return matchSide(local, d.local) && matchSide(transaction, d.transaction);
}

std::vector<Inference> varMayBe(const AnalysisResult& r, std::string_view function, std::string_view var,
                                const std::optional<Expr>& value, const DepsPattern& pattern) {
  std::optional<Expr> want;
  if (value) want = sym::normalize(*value);
  std::vector<Inference> out;
  for (const auto& inf : r.inferences) {
    if (!function.empty() && inf.function != function) continue;
    if (inf.var != var) continue;
    if (want && !(inf.value == *want)) continue;
    if (!pattern.matches(inf.deps)) continue;
    out.push_back(inf);
  }
  return out;
}

std::vector<ReachabilityFact> stmtReachable(const AnalysisResult& r, ir::StmtId stmt, const DepsPattern& pattern) {
  std::vector<ReachabilityFact> out;
  for (const auto& f : r.reachability)
    if (f.stmt == stmt && pattern.matches(f.deps)) out.push_back(f);
  return out;
}

const ir::Statement* findStatement(const ir::Contract& c, ir::StmtId id, const ir::Function** owner) {
  for (const auto& f : c.functions)
    for (const auto& b : f.blocks)
      for (const auto& s : b.stmts)
        if (s.id == id) {
          if (owner) *owner = &f;
          return &s;
        }
  return nullptr;
}

std::vector<Inference> returnValues(const AnalysisResult& r, std::string_view function) {
  std::vector<Inference> out;
  const ir::Function* f = r.contract->function(function);
  if (!f) return out;
  std::set<std::pair<Expr, DependencyMap>> seen;
  for (const auto& b : f->blocks)
    for (const auto& s : b.stmts) {
      if (s.op != ir::Op::Return || s.operands.empty() || !s.operands[0].isVariable()) continue;
      // A value only counts where the RETURN itself is reachable under compatible deps.
      for (const auto& inf : r.inferences) {
        if (inf.function != function || inf.var != s.operands[0].name) continue;
        for (const auto& reach : r.reachability) {
          if (reach.function != function || reach.stmt != s.id) continue;
          auto joined = deps::combine(inf.deps, reach.deps);
          auto* d = std::get_if<DependencyMap>(&joined);
          if (d && seen.insert({inf.value, *d}).second) out.push_back({inf.function, inf.var, inf.value, *d});
        }
      }
    }
  return out;
}

}  // namespace symvalic::flow
