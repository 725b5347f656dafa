#include <algorithm>
#include <deque>
#include <functional>

#include "symvalic/analysis.hpp"
#include "symvalic/reasoner.hpp"

namespace symvalic::flow {

namespace {

using deps::DepKey;
using deps::KeyKind;
using ir::Op;
using ir::Operand;
using ir::Statement;

/// Fact -> remaining arithmetic depth (the largest seen).
using FactMap = std::map<ValueFact, int>;

// Values this large only arise from runaway storage feedback.
constexpr std::size_t kMaxExprSize = 256;
// Solver proposals accepted per parameter.
constexpr std::size_t kMaxProposalsPerParam = 16;

struct Exit {
  bool hasValue = false;
  ValueFact fact;

  friend auto operator<=>(const Exit&, const Exit&) = default;
  friend bool operator==(const Exit&, const Exit&) = default;
};

struct FunctionIndex {
  const ir::Function* fn = nullptr;
  std::vector<const Statement*> stmts;
  std::vector<std::vector<int>> succ;
  std::map<std::string, std::vector<int>> users;
  std::vector<int> loadOrdinal;  // named SLOAD results, in statement order; -1 otherwise
  int entry = 0;
};

bool isTemp(const std::string& name) { return !name.empty() && name[0] == '%'; }

const DependencyMap* merged(const DependencyMap& a, const DependencyMap& b, DependencyMap& out) {
  auto c = deps::combine(a, b);
  if (auto* d = std::get_if<DependencyMap>(&c)) {
    out = std::move(*d);
    return &out;
  }
  return nullptr;
}

class Engine {
public:
  Engine(std::shared_ptr<const ir::Contract> c, const AnalysisConfig& cfg, const Scenario& scenario)
      : contract_(std::move(c)), cfg_(cfg), scenario_(scenario) {
    index();
    buildAxioms();
  }

  AnalysisResult run() {
    deadline_ = std::chrono::steady_clock::now() + cfg_.timeBudget;
    const ir::Contract& c = *contract_;

    if (const ir::Function* ctor = c.constructor(); ctor && scenario_.runConstructor) {
      int fi = fnByName_.at(ctor->name);
      seedEntry(fi, {Expr::owner()});
      pushFunction(fi);
      drain();
      commit();
      for (const auto& [addr, values] : committed_) initialized_.insert(addr);
    }
    for (const auto& [addr, value] : scenario_.storage) {
      Expr key = sym::normalize(addr);
      committed_[key].emplace(sym::normalize(value), cfg_.arithmeticDepthLimit);
      initialized_.insert(key);
    }

    for (int round = 1; round <= cfg_.transactionRounds && !stopped_; ++round) {
      if (round == 1) {
        for (std::size_t fi = 0; fi < fns_.size(); ++fi)
          if (isEntry(*fns_[fi].fn)) seedEntry(static_cast<int>(fi), {});
      }
      for (std::size_t fi = 0; fi < fns_.size(); ++fi)
        if (!fns_[fi].fn->isConstructor()) pushFunction(static_cast<int>(fi));
      drain();
      roundsRun_ = round;
      if (!commit()) break;
    }
    return collect();
  }

private:
  // ---- setup ----

  void index() {
    const ir::Contract& c = *contract_;
    for (const auto& f : c.functions) {
      FunctionIndex fx;
      fx.fn = &f;
      std::map<ir::BlockId, int> firstOfBlock;
      for (const auto& b : f.blocks) {
        firstOfBlock[b.id] = static_cast<int>(fx.stmts.size());
        for (const auto& s : b.stmts) fx.stmts.push_back(&s);
      }
      fx.entry = firstOfBlock.at(f.entryBlock);
      fx.succ.resize(fx.stmts.size());
      fx.loadOrdinal.assign(fx.stmts.size(), -1);
      int loads = 0;
      for (std::size_t i = 0; i < fx.stmts.size(); ++i) {
        const Statement& s = *fx.stmts[i];
        if (s.op == Op::Jump || s.op == Op::Branch) {
          for (auto t : s.targets) fx.succ[i].push_back(firstOfBlock.at(t));
        } else if (!s.isTerminator()) {
          fx.succ[i].push_back(static_cast<int>(i + 1));
        }
        for (const auto& o : s.operands)
          if (o.isVariable()) fx.users[o.name].push_back(static_cast<int>(i));
        if (s.op == Op::SLoad && s.result && !isTemp(*s.result)) fx.loadOrdinal[i] = loads++;
      }
      fnByName_[f.name] = static_cast<int>(fns_.size());
      fns_.push_back(std::move(fx));
    }
    vars_.resize(fns_.size());
    reach_.resize(fns_.size());
    exits_.resize(fns_.size());
    seeded_.resize(fns_.size());
    queued_.resize(fns_.size());
    for (std::size_t fi = 0; fi < fns_.size(); ++fi) {
      reach_[fi].resize(fns_[fi].stmts.size());
      queued_[fi].assign(fns_[fi].stmts.size(), 0);
      seeded_[fi].resize(fns_[fi].fn->params.size());
      for (std::size_t i = 0; i < fns_[fi].stmts.size(); ++i) {
        const Statement& s = *fns_[fi].stmts[i];
        if (s.op == Op::CallInternal) {
          if (auto it = fnByName_.find(s.callee); it != fnByName_.end())
            callers_[it->second].push_back({static_cast<int>(fi), static_cast<int>(i)});
        }
      }
    }
  }

  // Distinct identities differ from each other and from every program constant.
  void buildAxioms() {
    auto constants = ir::harvestConstants(*contract_);
    std::set<sym::U256> ks = constants.numeric;
    ks.insert(0);
    ks.insert(1);
    const Expr ids[] = {Expr::owner(), Expr::unprivilegedUser(), Expr::ownerUniqueValue(), Expr::userUniqueValue()};
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j)
        axioms_.push_back(sym::makeNot(sym::makeBinary(sym::BinOpKind::Eq, ids[i], ids[j])));
      for (const auto& k : ks)
        axioms_.push_back(sym::makeNot(sym::makeBinary(sym::BinOpKind::Eq, Expr::constant(k), ids[i])));
    }
  }

  bool isEntry(const ir::Function& f) const {
    if (!f.isPublic()) return false;
    return scenario_.entryFunctions.empty() || scenario_.entryFunctions.contains(f.name);
  }

  void seedEntry(int fi, std::vector<Expr> senders) {
    const ir::Function& f = *fns_[fi].fn;
    SeedSet seeds = seedInputs(f, *contract_, cfg_.seedRandomness);
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      const auto& p = f.params[i];
      std::vector<ValueFact> values = seeds.params[i];
      if (auto it = scenario_.argumentSeeds.find(f.name + "." + p.name); it != scenario_.argumentSeeds.end()) {
        values.clear();
        for (const auto& v : it->second) values.push_back({v, {}});
      } else if (p.type == ir::ParamType::Uint256 && scenario_.numericSeeds) {
        values.clear();
        for (const auto& v : *scenario_.numericSeeds) values.push_back({v, {}});
      }
      for (const auto& v : values) addSeed(fi, static_cast<int>(i), v);
    }
    if (senders.empty()) {
      if (!scenario_.senders.empty()) senders = scenario_.senders;
      else
        for (const auto& s : seeds.sender) senders.push_back(s.value);
    }
    for (const auto& s : senders) addReach(fi, fns_[fi].entry, DependencyMap::withSender(s));
  }

  bool addSeed(int fi, int position, const ValueFact& seed) {
    const auto& p = fns_[fi].fn->params[static_cast<std::size_t>(position)];
    Expr v = sym::normalize(seed.value);
    seeded_[fi][static_cast<std::size_t>(position)].insert(v);
    DependencyMap d = seed.deps;
    if (position < cfg_.dependencyBudget.localArguments) d.local[DepKey::argument(position, p.name)] = seed.value;
    return addFact(fi, p.name, {seed.value, d}, cfg_.arithmeticDepthLimit);
  }

  // ---- fact stores ----

  void push(int fi, int idx) {
    auto& q = queued_[static_cast<std::size_t>(fi)][static_cast<std::size_t>(idx)];
    if (q) return;
    q = 1;
    work_.push_back({fi, idx});
  }

  void pushFunction(int fi) {
    for (std::size_t i = 0; i < fns_[fi].stmts.size(); ++i) push(fi, static_cast<int>(i));
  }

  void truncate(const std::string& why) {
    if (!truncated_) reason_ = why;
    truncated_ = true;
  }

  bool addFact(int fi, const std::string& var, ValueFact f, int depth) {
    if (f.value.size() > kMaxExprSize) {
      truncate("expression size limit reached for " + var);
      return false;
    }
    FactMap& m = vars_[fi][var];
    auto it = m.find(f);
    if (it != m.end()) {
      if (it->second >= depth) return false;
      it->second = depth;
    } else {
      if (m.size() >= cfg_.maxInferencesPerVariable) {
        truncate("inference cap reached for " + fns_[fi].fn->name + "." + var);
        return false;
      }
      m.emplace(std::move(f), depth);
    }
    if (auto u = fns_[fi].users.find(var); u != fns_[fi].users.end())
      for (int idx : u->second) push(fi, idx);
    return true;
  }

  bool addReach(int fi, int idx, const DependencyMap& d) {
    auto& set = reach_[fi][static_cast<std::size_t>(idx)];
    if (set.contains(d)) return false;
    if (set.size() >= cfg_.maxInferencesPerVariable) {
      truncate("reachability cap reached in " + fns_[fi].fn->name);
      return false;
    }
    set.insert(d);
    push(fi, idx);
    return true;
  }

  void flowOn(int fi, int idx, const DependencyMap& d) {
    for (int s : fns_[fi].succ[static_cast<std::size_t>(idx)]) addReach(fi, s, d);
  }

  const FactMap& factsOf(int fi, const Operand& o) {
    if (o.isVariable()) {
      auto& m = vars_[fi][o.name];
      return m;
    }
    auto [it, fresh] = literals_.try_emplace(&o);
    if (fresh) {
      Expr v = Expr::constant(o.value, o.hex ? sym::Radix::Hex : sym::Radix::Decimal);
      it->second.emplace(ValueFact{v, {}}, cfg_.arithmeticDepthLimit);
    }
    return it->second;
  }

  // Calls `fn` for each reach fact combined with one fact per operand, skipping
  // conflicting combinations.
  using ComboFn = std::function<void(const DependencyMap& reach, const DependencyMap& d,
                                     const std::vector<const ValueFact*>& vals, int depth)>;

  void forEachCombo(int fi, const std::set<DependencyMap>& reach, const std::vector<Operand>& ops, const ComboFn& fn) {
    std::vector<const FactMap*> sets;
    for (const auto& o : ops) {
      sets.push_back(&factsOf(fi, o));
      if (sets.back()->empty()) return;
    }
    std::vector<const ValueFact*> vals(ops.size());
    std::function<void(std::size_t, const DependencyMap&, const DependencyMap&, int)> rec =
        [&](std::size_t k, const DependencyMap& r, const DependencyMap& acc, int depth) {
          if (k == sets.size()) {
            fn(r, acc, vals, depth);
            return;
          }
          for (const auto& [f, dep] : *sets[k]) {
            DependencyMap next;
            if (!merged(acc, f.deps, next)) continue;
            vals[k] = &f;
            rec(k + 1, r, next, std::min(depth, dep));
          }
        };
    for (const auto& r : reach) rec(0, r, r, cfg_.arithmeticDepthLimit);
  }

  // ---- worklist ----

  void drain() {
    std::size_t steps = 0;
    while (!work_.empty() && !stopped_) {
      auto [fi, idx] = work_.front();
      work_.pop_front();
      queued_[fi][static_cast<std::size_t>(idx)] = 0;
      step(fi, idx);
      if (++steps % 64 == 1 && std::chrono::steady_clock::now() >= deadline_) {
        truncate("time budget exhausted");
        stopped_ = true;
      }
    }
    if (stopped_) {
      work_.clear();
      for (auto& q : queued_) std::fill(q.begin(), q.end(), 0);
    }
  }

  bool holds(const Expr& truth) const {
    if (truth.isConst()) return truth.value() != 0;
    return sym::implies(std::span<const Expr>(axioms_), truth) == sym::Implication::True;
  }

  void step(int fi, int idx) {
    const Statement& s = *fns_[fi].stmts[static_cast<std::size_t>(idx)];
    // Copy: successors of a statement may feed back into the same set via loops of calls.
    const std::set<DependencyMap> reach = reach_[fi][static_cast<std::size_t>(idx)];
    if (reach.empty()) return;
    const int limit = cfg_.arithmeticDepthLimit;

    switch (s.op) {
    case Op::Const:
      addFact(fi, *s.result, {factsOf(fi, s.operands[0]).begin()->first.value, {}}, limit);
      break;
    case Op::Copy:
    case Op::BinOp:
    case Op::Not:
    case Op::Sha3:
    case Op::Concat:
      forEachCombo(fi, reach, s.operands, [&](const DependencyMap&, const DependencyMap& d, const auto& v, int depth) {
        addFact(fi, *s.result, {compute(s, v), d}, depth);
      });
      break;
    case Op::Caller:
      for (const auto& r : reach)
        if (const Expr* who = r.sender()) addFact(fi, *s.result, {*who, r}, limit);
      break;
    case Op::SLoad: load(fi, idx, s, reach); break;
    case Op::SStore:
      forEachCombo(fi, reach, s.operands, [&](const DependencyMap&, const DependencyMap& d, const auto& v, int depth) {
        Expr key = v[0]->value;
        stores_.insert({fi, s.id, key, v[1]->value, d});
        if (depth >= 1) {
          int& slot = pending_[key].try_emplace(v[1]->value, depth - 1).first->second;
          slot = std::max(slot, depth - 1);
        }
      });
      break;
    case Op::Require:
      forEachCombo(fi, reach, s.operands, [&](const DependencyMap&, const DependencyMap& d, const auto& v, int) {
        Expr truth = sym::truthOf(v[0]->value);
        if (holds(truth)) flowOn(fi, idx, d);
        else propose(fi, truth, d);
      });
      break;
    case Op::Branch: {
      const auto& succ = fns_[fi].succ[static_cast<std::size_t>(idx)];
      forEachCombo(fi, reach, s.operands, [&](const DependencyMap&, const DependencyMap& d, const auto& v, int) {
        Expr truth = sym::truthOf(v[0]->value);
        Expr negated = sym::makeNot(truth);
        bool thenOk = holds(truth);
        bool elseOk = !thenOk && holds(negated);
        if (thenOk) addReach(fi, succ[0], d);
        if (elseOk) addReach(fi, succ[1], d);
        if (!thenOk && !elseOk) {
          propose(fi, truth, d);
          propose(fi, negated, d);
        }
      });
      break;
    }
    case Op::Jump:
      for (const auto& r : reach) flowOn(fi, idx, r);
      break;
    case Op::Return:
      if (s.operands.empty()) {
        for (const auto& r : reach) addExit(fi, {false, {Expr(), r}});
      } else {
        forEachCombo(fi, reach, s.operands, [&](const DependencyMap&, const DependencyMap& d, const auto& v, int) {
          addExit(fi, {true, {v[0]->value, d}});
        });
      }
      break;
    case Op::CallExternal:
    case Op::Transfer:
    case Op::SelfDestruct:
    case Op::DelegateCall:
      recordCall(fi, s, reach);
      for (const auto& r : reach) flowOn(fi, idx, r);
      break;
    case Op::CallInternal: callInternal(fi, idx, s, reach); break;
    }
    switch (s.op) {
    case Op::Const:
    case Op::Copy:
    case Op::BinOp:
    case Op::Not:
    case Op::Sha3:
    case Op::Concat:
    case Op::Caller:
    case Op::SLoad:
    case Op::SStore:
      for (const auto& r : reach) flowOn(fi, idx, r);
      break;
    default: break;
    }
  }

  static Expr compute(const Statement& s, const std::vector<const ValueFact*>& v) {
    switch (s.op) {
    case Op::Copy: return v[0]->value;
    case Op::BinOp: return sym::makeBinary(s.binop, v[0]->value, v[1]->value);
    case Op::Not: return sym::makeNot(v[0]->value);
    case Op::Sha3: return Expr::sha3(v[0]->value);
    case Op::Concat: return Expr::concat(v[0]->value, v[1]->value);
    default: return v[0]->value;
    }
  }

  void addExit(int fi, Exit e) {
    if (!exits_[fi].insert(std::move(e)).second) return;
    for (auto [cfi, cidx] : callers_[fi]) push(cfi, cidx);
  }

  void load(int fi, int idx, const Statement& s, const std::set<DependencyMap>& reach) {
    int ordinal = fns_[fi].loadOrdinal[static_cast<std::size_t>(idx)];
    bool tracked = ordinal >= 0 && ordinal < cfg_.dependencyBudget.storageLoads;
    forEachCombo(fi, reach, s.operands, [&](const DependencyMap& r, const DependencyMap& d, const auto& v, int) {
      Expr key = v[0]->value;
      std::vector<std::pair<Expr, int>> values;
      if (auto it = committed_.find(key); it != committed_.end())
        for (const auto& [val, depth] : it->second) values.push_back({val, depth});
      if (!initialized_.contains(key)) values.push_back({Expr::constant(0), cfg_.arithmeticDepthLimit});
      for (const auto& [val, depth] : values) {
        DependencyMap out = d;
        if (tracked) {
          DependencyMap extra;
          extra.local[DepKey::storageLoad(ordinal, *s.result)] = val;
          DependencyMap combined;
          if (!merged(out, extra, combined)) continue;
          out = std::move(combined);
        }
        addFact(fi, *s.result, {val, out}, depth);
      }
      // A symbolic address may be steered onto a cell that holds something.
      if (!sym::freeSymbolsOf(key).empty()) {
        for (const auto& [stored, cell] : committed_) {
          if (stored == key) continue;
          propose(fi, sym::makeBinary(sym::BinOpKind::Eq, key, stored), d);
        }
      }
      (void)r;
    });
  }

  void recordCall(int fi, const Statement& s, const std::set<DependencyMap>& reach) {
    auto& acc = calls_[{fi, s.id}];
    std::size_t first = s.op == Op::CallExternal ? 1 : 0;
    acc.args.resize(s.operands.size() - first);
    for (std::size_t k = 0; k < s.operands.size(); ++k) {
      auto& dest = k < first ? acc.target : acc.args[k - first];
      for (const auto& [f, depth] : factsOf(fi, s.operands[k])) {
        for (const auto& r : reach) {
          DependencyMap d;
          if (merged(r, f.deps, d)) dest.insert({f.value, d});
        }
      }
    }
  }

  void callInternal(int fi, int idx, const Statement& s, const std::set<DependencyMap>& reach) {
    auto found = fnByName_.find(s.callee);
    if (found == fnByName_.end()) return;
    int cg = found->second;
    const ir::Function& caller = *fns_[fi].fn;
    const ir::Function& callee = *fns_[cg].fn;
    const auto& budget = cfg_.dependencyBudget;

    std::set<DependencyMap> resumed;
    forEachCombo(fi, reach, s.operands, [&](const DependencyMap& r, const DependencyMap& d, const auto& v, int depth) {
      DependencyMap calleeCtx;
      calleeCtx.transaction = d.transaction;
      bool hasEntryArgs = std::any_of(d.transaction.begin(), d.transaction.end(),
                                      [](const auto& kv) { return kv.first.kind == KeyKind::EntryArgument; });
      if (caller.isPublic() && !hasEntryArgs) {
        int kept = 0;
        for (const auto& [k, val] : d.local) {
          if (k.kind != KeyKind::Argument || kept >= budget.txArguments) continue;
          calleeCtx.transaction[DepKey::entryArgument(k.position, caller.name, k.name)] = val;
          ++kept;
        }
      }
      addReach(cg, fns_[cg].entry, calleeCtx);
      for (std::size_t i = 0; i < callee.params.size() && i < v.size(); ++i) {
        DependencyMap pd = calleeCtx;
        if (static_cast<int>(i) < budget.localArguments)
          pd.local[DepKey::argument(static_cast<int>(i), callee.params[i].name)] = v[i]->value;
        addFact(cg, callee.params[i].name, {v[i]->value, pd}, depth);
      }
      for (const auto& e : exits_[cg]) {
        if (!exitMatches(e.fact.deps, calleeCtx, v)) continue;
        if (s.result && e.hasValue) addFact(fi, *s.result, {e.fact.value, d}, depth);
        resumed.insert(r);
      }
    });
    for (const auto& r : resumed) flowOn(fi, idx, r);
  }

  static bool exitMatches(const DependencyMap& exit, const DependencyMap& ctx,
                          const std::vector<const ValueFact*>& args) {
    for (const auto& [k, val] : exit.local) {
      if (k.kind != KeyKind::Argument) continue;
      auto pos = static_cast<std::size_t>(k.position);
      if (pos < args.size() && !(args[pos]->value == val)) return false;
    }
    DependencyMap txOnly;
    txOnly.transaction = exit.transaction;
    return deps::compatible(txOnly, ctx);
  }

  // Turns solver proposals for free symbols in `truth` into new parameter seeds.
  void propose(int fi, const Expr& truth, const DependencyMap& d) {
    auto symbols = sym::freeSymbolsOf(truth);
    if (symbols.empty()) return;
    const Expr* sender = d.sender();
    for (const auto& symbol : symbols) {
      auto candidates = sym::valueForVar(symbol, truth);
      if (candidates.empty()) continue;
      for (const auto& [fn, pos] : paramsHolding(fi, symbol, d)) {
        for (const auto& cand : candidates) {
          if (!acceptProposal(fn, pos, cand)) continue;
          DependencyMap seedDeps = sender ? DependencyMap::withSender(*sender) : DependencyMap{};
          addSeed(fn, pos, {cand, seedDeps});
        }
      }
    }
  }

  bool acceptProposal(int fi, int pos, const Expr& cand) {
    if (seeded_[fi][static_cast<std::size_t>(pos)].contains(cand)) return false;
    if (!sym::freeSymbolsOf(cand).empty()) return false;
    return proposals_[{fi, pos}]++ < kMaxProposalsPerParam;
  }

  std::vector<std::pair<int, int>> paramsHolding(int fi, const Expr& symbol, const DependencyMap& d) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [k, v] : d.local)
      if (k.kind == KeyKind::Argument && v == symbol) out.push_back({fi, k.position});
    for (const auto& [k, v] : d.transaction) {
      if (k.kind != KeyKind::EntryArgument || !(v == symbol)) continue;
      auto dot = k.name.find('.');
      auto it = fnByName_.find(k.name.substr(0, dot));
      if (it != fnByName_.end()) out.push_back({it->second, k.position});
    }
    return out;
  }

  // Moves this round's writes into storage. Returns whether storage changed.
  bool commit() {
    bool changed = false;
    for (auto& [key, values] : pending_) {
      auto& cell = committed_[key];
      for (const auto& [val, depth] : values) {
        if (cell.size() >= cfg_.maxInferencesPerVariable) {
          truncate("storage cell cap reached");
          break;
        }
        auto [it, fresh] = cell.try_emplace(val, depth);
        if (fresh) changed = true;
        else if (it->second < depth) {
          it->second = depth;
          changed = true;
        }
      }
    }
    pending_.clear();
    return changed;
  }

  // ---- output ----

  AnalysisResult collect() {
    AnalysisResult out;
    out.contract = contract_;
    out.truncated = truncated_;
    out.truncationReason = reason_;
    out.roundsRun = roundsRun_;
    for (std::size_t fi = 0; fi < fns_.size(); ++fi) {
      const std::string& name = fns_[fi].fn->name;
      for (const auto& [var, facts] : vars_[fi])
        for (const auto& [f, depth] : facts) out.inferences.push_back({name, var, f.value, f.deps});
      for (std::size_t i = 0; i < fns_[fi].stmts.size(); ++i)
        for (const auto& d : reach_[fi][i]) out.reachability.push_back({name, fns_[fi].stmts[i]->id, d});
    }
    for (const auto& [site, acc] : calls_) {
      const auto& fx = fns_[site.first];
      const Statement* s = nullptr;
      for (const auto* st : fx.stmts)
        if (st->id == site.second) s = st;
      CallFact cf;
      cf.function = fx.fn->name;
      cf.stmt = site.second;
      cf.op = s->op;
      cf.signature = s->op == Op::CallExternal ? s->callee : std::string(ir::toString(s->op));
      cf.target.assign(acc.target.begin(), acc.target.end());
      for (const auto& a : acc.args) cf.args.emplace_back(a.begin(), a.end());
      out.calls.push_back(std::move(cf));
    }
    std::sort(out.calls.begin(), out.calls.end(), [](const CallFact& a, const CallFact& b) { return a.stmt < b.stmt; });
    for (const auto& st : stores_)
      out.stores.push_back({fns_[st.fi].fn->name, st.stmt, st.address, st.value, st.deps});
    std::stable_sort(out.stores.begin(), out.stores.end(),
                     [](const StoreFact& a, const StoreFact& b) { return a.stmt < b.stmt; });
    for (const auto& [addr, values] : committed_)
      for (const auto& [val, depth] : values) out.storage.push_back({addr, val, depth});
    return out;
  }

  struct CallAcc {
    std::set<ValueFact> target;
    std::vector<std::set<ValueFact>> args;
  };

  struct StoreKey {
    int fi;
    ir::StmtId stmt;
    Expr address;
    Expr value;
    DependencyMap deps;

    friend auto operator<=>(const StoreKey& a, const StoreKey& b) {
      if (auto c = a.stmt <=> b.stmt; c != 0) return c;
      if (auto c = a.address <=> b.address; c != 0) return c;
      if (auto c = a.value <=> b.value; c != 0) return c;
      return a.deps <=> b.deps;
    }
    friend bool operator==(const StoreKey& a, const StoreKey& b) { return (a <=> b) == 0; }
  };

  std::shared_ptr<const ir::Contract> contract_;
  AnalysisConfig cfg_;
  Scenario scenario_;

  std::vector<FunctionIndex> fns_;
  std::map<std::string, int> fnByName_;
  std::map<int, std::vector<std::pair<int, int>>> callers_;
  std::vector<Expr> axioms_;

  std::vector<std::map<std::string, FactMap>> vars_;
  std::vector<std::vector<std::set<DependencyMap>>> reach_;
  std::vector<std::set<Exit>> exits_;
  std::vector<std::vector<std::set<Expr>>> seeded_;
  std::map<const Operand*, FactMap> literals_;
  std::map<std::pair<int, int>, std::size_t> proposals_;
  std::map<std::pair<int, ir::StmtId>, CallAcc> calls_;
  std::set<StoreKey> stores_;

  std::map<Expr, std::map<Expr, int>> committed_;
  std::map<Expr, std::map<Expr, int>> pending_;
  std::set<Expr> initialized_;

  std::deque<std::pair<int, int>> work_;
  std::vector<std::vector<char>> queued_;

  std::chrono::steady_clock::time_point deadline_;
  bool stopped_ = false;
  bool truncated_ = false;
  std::string reason_;
  int roundsRun_ = 0;
};

}  // namespace

AnalysisResult analyze(std::shared_ptr<const ir::Contract> c, const AnalysisConfig& cfg, const Scenario& scenario) {
  return Engine(std::move(c), cfg, scenario).run();
}

}  // namespace symvalic::flow
