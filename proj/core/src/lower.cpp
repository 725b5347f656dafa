#include <map>
#include <optional>

#include "symvalic/syntax.hpp"

namespace symvalic::syntax {

namespace {

using ir::Op;
using ir::Operand;
using ir::ParseError;

enum class Ty : std::uint8_t { Uint, Address, Bool, Any };

std::string_view tyName(Ty t) {
  switch (t) {
  case Ty::Uint: return "uint";
  case Ty::Address: return "address";
  case Ty::Bool: return "bool";
  case Ty::Any: return "value";
  }
  return "?";
}

Ty tyOf(TypeName t) {
  switch (t) {
  case TypeName::Uint: return Ty::Uint;
  case TypeName::Address: return Ty::Address;
  case TypeName::Bool: return Ty::Bool;
  case TypeName::Mapping: return Ty::Any;
  }
  return Ty::Any;
}

ir::ParamType paramType(TypeName t) {
  switch (t) {
  case TypeName::Address: return ir::ParamType::Address;
  case TypeName::Bool: return ir::ParamType::Bool;
  default: return ir::ParamType::Uint256;
  }
}

struct Val {
  Operand op;
  Ty ty = Ty::Any;
  bool literal = false;
};

struct Var {
  Ty ty = Ty::Any;
  std::string ssa;
};

using Env = std::map<std::string, Var>;

struct Signature {
  std::vector<Ty> params;
  ir::Visibility visibility;
};

class Lowerer {
public:
  explicit Lowerer(const Contract& src) : src_(src) {}

  ir::Contract run() {
    out_.name = src_.name;
    unsigned slot = 0;
    for (const auto& d : src_.storage) {
      if (storage_.contains(d.name)) throw ParseError("duplicate storage declaration '" + d.name + "'", d.loc);
      ir::StorageDecl sd;
      sd.name = d.name;
      sd.slot = slot++;
      sd.kind = d.type == TypeName::Mapping ? ir::StorageKind::Mapping : ir::StorageKind::Scalar;
      sd.address = d.type == TypeName::Address;
      storage_[d.name] = {sd, tyOf(d.type)};
      out_.storageSlots.push_back(sd);
    }
    for (const auto& f : src_.functions) {
      if (signatures_.contains(f.name)) throw ParseError("duplicate function '" + f.name + "'", f.loc);
      if (storage_.contains(f.name)) throw ParseError("function '" + f.name + "' shadows storage", f.loc);
      Signature sig{{}, f.visibility};
      for (const auto& p : f.params) sig.params.push_back(tyOf(p.type));
      signatures_[f.name] = sig;
    }
    for (const auto& f : src_.functions) out_.functions.push_back(function(f));
    out_.addressConstants = ir::harvestConstants(out_).addressLike;
    return std::move(out_);
  }

private:
  struct StorageInfo {
    ir::StorageDecl decl;
    Ty ty;
  };

  // Function-level state.
  ir::Function* fn_ = nullptr;
  int block_ = 0;
  int temps_ = 0;
  Env env_;
  std::map<std::string, int> versions_;

  ir::Function function(const Function& f) {
    ir::Function out;
    out.name = f.name;
    out.visibility = f.visibility;
    fn_ = &out;
    temps_ = 0;
    env_.clear();
    versions_.clear();
    out.blocks.push_back({0, {}});
    block_ = 0;
    for (const auto& p : f.params) {
      if (env_.contains(p.name)) throw ParseError("duplicate parameter '" + p.name + "'", p.loc);
      if (storage_.contains(p.name)) throw ParseError("parameter '" + p.name + "' shadows storage", p.loc);
      out.params.push_back({p.name, paramType(p.type)});
      env_[p.name] = {tyOf(p.type), p.name};
      versions_[p.name] = 0;
    }
    block(f.body);
    if (!terminated()) emit(Op::Return, {}, std::nullopt, f.loc);
    fn_ = nullptr;
    return out;
  }

  // Emission helpers.

  ir::BasicBlock& current() { return fn_->blocks[static_cast<std::size_t>(block_)]; }
  bool terminated() { return !current().stmts.empty() && current().stmts.back().isTerminator(); }

  int newBlock() {
    int id = static_cast<int>(fn_->blocks.size());
    fn_->blocks.push_back({id, {}});
    return id;
  }

  ir::Statement& emit(Op op, std::vector<Operand> operands, std::optional<std::string> result, SourceLoc loc) {
    if (terminated()) block_ = newBlock();  // unreachable code after a terminator
    ir::Statement s;
    s.id = nextStmt_++;
    s.op = op;
    s.operands = std::move(operands);
    s.result = std::move(result);
    s.loc = loc;
    current().stmts.push_back(std::move(s));
    return current().stmts.back();
  }

  std::string temp() { return "%t" + std::to_string(temps_++); }

  std::string newVersion(const std::string& name) {
    auto [it, fresh] = versions_.try_emplace(name, 0);
    if (fresh) return name;
    return name + "." + std::to_string(++it->second);
  }

  std::string target(const std::optional<std::string>& dest) { return dest ? *dest : temp(); }

  // Type checking.

  static bool fits(Ty expected, const Val& v) {
    if (v.literal && v.ty != Ty::Bool) return expected != Ty::Bool;
    return v.ty == Ty::Any || expected == Ty::Any || v.ty == expected;
  }

  void require(Ty expected, Val& v, SourceLoc loc, std::string_view what) {
    if (!fits(expected, v)) {
      throw ParseError("type mismatch: " + std::string(what) + " expects " + std::string(tyName(expected)) + ", got " +
                           std::string(tyName(v.ty)),
                       loc);
    }
    if (expected == Ty::Address) markAddress(v, loc);
  }

  static void markAddress(Val& v, SourceLoc loc) {
    if (!v.literal || v.op.kind != Operand::Kind::Literal) return;
    if (v.op.value >= sym::kAddressLimit) throw ParseError("address literal does not fit in 160 bits", loc);
    v.op.addressPosition = true;
  }

  // Expressions. A `dest` receives the value; otherwise a temporary is used
  // (or, for literals and variables, no statement is emitted at all).

  Val expr(const Expr& e, const std::optional<std::string>& dest = std::nullopt, Ty expected = Ty::Any) {
    Val v = exprInner(e, dest, expected);
    if (dest && (v.op.kind != Operand::Kind::Variable || v.op.name != *dest)) {
      if (expected == Ty::Address) markAddress(v, e.loc);
      emit(v.op.kind == Operand::Kind::Literal ? Op::Const : Op::Copy, {v.op}, *dest, e.loc);
      v.op = Operand::variable(*dest);
      v.literal = false;
    }
    return v;
  }

  Val exprInner(const Expr& e, const std::optional<std::string>& dest, Ty expected) {
    switch (e.kind) {
    case Expr::Kind::Number: {
      Val v{Operand::literal(e.value, e.hex), Ty::Uint, true};
      if (expected == Ty::Address) markAddress(v, e.loc);
      return v;
    }
    case Expr::Kind::Bool: return {Operand::literal(e.value), Ty::Bool, true};
    case Expr::Kind::Sender: {
      std::string r = target(dest);
      emit(Op::Caller, {}, r, e.loc);
      return {Operand::variable(r), Ty::Address, false};
    }
    case Expr::Kind::Name: {
      if (auto it = env_.find(e.name); it != env_.end()) return {Operand::variable(it->second.ssa), it->second.ty, false};
      auto st = storage_.find(e.name);
      if (st == storage_.end()) throw ParseError("undeclared name '" + e.name + "'", e.loc);
      if (st->second.decl.kind == ir::StorageKind::Mapping)
        throw ParseError("mapping '" + e.name + "' must be indexed", e.loc);
      std::string r = target(dest);
      emit(Op::SLoad, {Operand::slot(st->second.decl.slot)}, r, e.loc);
      return {Operand::variable(r), st->second.ty, false};
    }
    case Expr::Kind::Index: {
      Operand addr = mappingAddress(e.name, *e.operands[0], e.loc);
      std::string r = target(dest);
      emit(Op::SLoad, {addr}, r, e.loc);
      return {Operand::variable(r), Ty::Any, false};
    }
    case Expr::Kind::Not: {
      Val a = expr(*e.operands[0]);
      require(Ty::Bool, a, e.loc, "'!'");
      std::string r = target(dest);
      emit(Op::Not, {a.op}, r, e.loc);
      return {Operand::variable(r), Ty::Bool, false};
    }
    case Expr::Kind::Binary: return binary(e, dest);
    case Expr::Kind::Call: {
      auto ops = callArgs(e.name, e.operands, e.loc);
      std::string r = target(dest);
      emit(Op::CallInternal, std::move(ops), r, e.loc).callee = e.name;
      return {Operand::variable(r), Ty::Any, false};
    }
    }
    throw ParseError("unsupported expression", e.loc);
  }

  Val binary(const Expr& e, const std::optional<std::string>& dest) {
    Val a = expr(*e.operands[0]);
    Val b = expr(*e.operands[1]);
    const std::string& op = e.name;
    ir::BinOpKind kind{};
    Ty result = Ty::Uint;
    if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
      require(Ty::Uint, a, e.loc, "'" + op + "'");
      require(Ty::Uint, b, e.loc, "'" + op + "'");
      kind = op == "+"   ? ir::BinOpKind::Add
             : op == "-" ? ir::BinOpKind::Sub
             : op == "*" ? ir::BinOpKind::Mul
             : op == "/" ? ir::BinOpKind::Div
                         : ir::BinOpKind::Mod;
    } else if (op == "<" || op == ">") {
      require(Ty::Uint, a, e.loc, "'" + op + "'");
      require(Ty::Uint, b, e.loc, "'" + op + "'");
      kind = op == "<" ? ir::BinOpKind::Lt : ir::BinOpKind::Gt;
      result = Ty::Bool;
    } else if (op == "==") {
      Ty common = a.literal ? b.ty : a.ty;
      if (a.literal && b.literal) common = Ty::Any;
      if (!fits(common, a) || !fits(common, b))
        throw ParseError("type mismatch: cannot compare " + std::string(tyName(a.ty)) + " with " +
                             std::string(tyName(b.ty)),
                         e.loc);
      if (a.ty == Ty::Address || b.ty == Ty::Address) {
        markAddress(a, e.loc);
        markAddress(b, e.loc);
      }
      kind = ir::BinOpKind::Eq;
      result = Ty::Bool;
    } else if (op == "&&" || op == "||") {
      require(Ty::Bool, a, e.loc, "'" + op + "'");
      require(Ty::Bool, b, e.loc, "'" + op + "'");
      kind = op == "&&" ? ir::BinOpKind::And : ir::BinOpKind::Or;
      result = Ty::Bool;
    } else {
      throw ParseError("unknown operator '" + op + "'", e.loc);
    }
    std::string r = target(dest);
    emit(Op::BinOp, {a.op, b.op}, r, e.loc).binop = kind;
    return {Operand::variable(r), result, false};
  }

  Operand mappingAddress(const std::string& name, const Expr& key, SourceLoc loc) {
    auto st = storage_.find(name);
    if (st == storage_.end()) throw ParseError("undeclared storage '" + name + "'", loc);
    if (st->second.decl.kind != ir::StorageKind::Mapping) throw ParseError("'" + name + "' is not a mapping", loc);
    Val k = expr(key);
    // Literal keys that fit in an address are taken to be addresses.
    if (k.literal && k.ty != Ty::Bool && k.op.value < sym::kAddressLimit) k.op.addressPosition = true;
    std::string cat = temp();
    emit(Op::Concat, {k.op, Operand::slot(st->second.decl.slot)}, cat, loc);
    std::string hash = temp();
    emit(Op::Sha3, {Operand::variable(cat)}, hash, loc);
    return Operand::variable(hash);
  }

  std::vector<Operand> callArgs(const std::string& callee, const std::vector<ExprPtr>& args, SourceLoc loc) {
    auto it = signatures_.find(callee);
    if (it == signatures_.end()) throw ParseError("undeclared function '" + callee + "'", loc);
    if (it->second.visibility == ir::Visibility::Constructor) throw ParseError("the constructor cannot be called", loc);
    if (it->second.params.size() != args.size())
      throw ParseError("'" + callee + "' expects " + std::to_string(it->second.params.size()) + " argument(s)", loc);
    std::vector<Operand> ops;
    for (std::size_t i = 0; i < args.size(); ++i) {
      Val v = expr(*args[i]);
      require(it->second.params[i], v, args[i]->loc, "argument " + std::to_string(i + 1) + " of '" + callee + "'");
      ops.push_back(v.op);
    }
    return ops;
  }

  // Statements.

  void block(const Block& b) {
    for (const auto& s : b) stmt(s);
  }

  void assignLocal(const std::string& name, Ty ty, const Expr& value, SourceLoc loc) {
    std::string ssa = newVersion(name);
    Val v = expr(value, ssa, ty);
    require(ty, v, loc, "assignment to '" + name + "'");
    env_[name] = {ty, ssa};
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
    case Stmt::Kind::Local:
      if (storage_.contains(s.name)) throw ParseError("'" + s.name + "' shadows storage", s.loc);
      if (env_.contains(s.name)) throw ParseError("'" + s.name + "' is already declared", s.loc);
      assignLocal(s.name, tyOf(s.type), *s.value, s.loc);
      return;
    case Stmt::Kind::Assign: {
      if (auto it = env_.find(s.name); it != env_.end()) return assignLocal(s.name, it->second.ty, *s.value, s.loc);
      auto st = storage_.find(s.name);
      if (st == storage_.end()) throw ParseError("undeclared name '" + s.name + "'", s.loc);
      if (st->second.decl.kind == ir::StorageKind::Mapping)
        throw ParseError("mapping '" + s.name + "' must be indexed", s.loc);
      Val v = expr(*s.value);
      require(st->second.ty, v, s.loc, "store to '" + s.name + "'");
      emit(Op::SStore, {Operand::slot(st->second.decl.slot), v.op}, std::nullopt, s.loc);
      return;
    }
    case Stmt::Kind::IndexAssign: {
      Operand addr = mappingAddress(s.name, *s.key, s.loc);
      Val v = expr(*s.value);
      emit(Op::SStore, {addr, v.op}, std::nullopt, s.loc);
      return;
    }
    case Stmt::Kind::Require: {
      Val c = expr(*s.value);
      require(Ty::Bool, c, s.loc, "require");
      emit(Op::Require, {c.op}, std::nullopt, s.loc);
      return;
    }
    case Stmt::Kind::If: return ifStmt(s);
    case Stmt::Kind::ExternalCall: {
      Val t = expr(*s.target);
      require(Ty::Address, t, s.loc, "call target");
      std::vector<Operand> ops{t.op};
      for (const auto& a : s.args) ops.push_back(expr(*a).op);
      emit(Op::CallExternal, std::move(ops), std::nullopt, s.loc).callee = s.method;
      return;
    }
    case Stmt::Kind::Transfer: {
      Val to = expr(*s.args[0]);
      require(Ty::Address, to, s.args[0]->loc, "transfer recipient");
      Val amount = expr(*s.args[1]);
      require(Ty::Uint, amount, s.args[1]->loc, "transfer amount");
      emit(Op::Transfer, {to.op, amount.op}, std::nullopt, s.loc);
      return;
    }
    case Stmt::Kind::SelfDestruct:
    case Stmt::Kind::DelegateCall: {
      Val a = expr(*s.args[0]);
      bool sd = s.kind == Stmt::Kind::SelfDestruct;
      require(Ty::Address, a, s.args[0]->loc, sd ? "selfdestruct" : "delegatecall");
      emit(sd ? Op::SelfDestruct : Op::DelegateCall, {a.op}, std::nullopt, s.loc);
      return;
    }
    case Stmt::Kind::Return: {
      std::vector<Operand> ops;
      if (s.value) {
        Val v = expr(*s.value);
        if (v.op.kind == Operand::Kind::Literal) {
          std::string t = temp();
          emit(Op::Const, {v.op}, t, s.loc);
          v.op = Operand::variable(t);
        }
        ops.push_back(v.op);
      }
      emit(Op::Return, std::move(ops), std::nullopt, s.loc);
      return;
    }
    case Stmt::Kind::Call:
      emit(Op::CallInternal, callArgs(s.name, s.args, s.loc), std::nullopt, s.loc).callee = s.name;
      return;
    }
  }

  void ifStmt(const Stmt& s) {
    Val c = expr(*s.value);
    require(Ty::Bool, c, s.loc, "if");
    emit(Op::Branch, {c.op}, std::nullopt, s.loc);
    std::size_t branchBlock = static_cast<std::size_t>(block_);
    std::size_t branchIndex = fn_->blocks[branchBlock].stmts.size() - 1;

    Env before = env_;
    int thenStart = newBlock();
    block_ = thenStart;
    block(s.body);
    bool thenDone = terminated();
    int thenEnd = block_;
    Env thenEnv = env_;

    env_ = before;
    int elseStart = newBlock();
    block_ = elseStart;
    block(s.orElse);
    bool elseDone = terminated();
    int elseEnd = block_;
    Env elseEnv = env_;

    fn_->blocks[branchBlock].stmts[branchIndex].targets = {thenStart, elseStart};

    if (thenDone && elseDone) {
      env_ = before;
      block_ = newBlock();
      return;
    }
    int join = newBlock();
    if (thenDone) {
      env_ = elseEnv;
    } else if (elseDone) {
      env_ = thenEnv;
    } else {
      env_ = thenEnv;
      for (const auto& [name, var] : elseEnv) env_.try_emplace(name, var);
      for (auto& [name, var] : env_) {
        auto t = thenEnv.find(name);
        auto e = elseEnv.find(name);
        std::string ts = t == thenEnv.end() ? "" : t->second.ssa;
        std::string es = e == elseEnv.end() ? "" : e->second.ssa;
        if (ts == es) continue;
        std::string merged = newVersion(name);
        joinCopy(thenEnd, ts, merged, s.loc);
        joinCopy(elseEnd, es, merged, s.loc);
        var.ssa = merged;
      }
    }
    if (!thenDone) {
      block_ = thenEnd;
      emit(Op::Jump, {}, std::nullopt, s.loc).targets = {join};
    }
    if (!elseDone) {
      block_ = elseEnd;
      emit(Op::Jump, {}, std::nullopt, s.loc).targets = {join};
    }
    block_ = join;
  }

  // Undefined on one side means declared only in the other arm; it reads as 0.
  void joinCopy(int blockId, const std::string& from, const std::string& to, SourceLoc loc) {
    block_ = blockId;
    if (from.empty()) emit(Op::Const, {Operand::literal(0)}, to, loc);
    else emit(Op::Copy, {Operand::variable(from)}, to, loc);
  }

  const Contract& src_;
  ir::Contract out_;
  std::map<std::string, StorageInfo> storage_;
  std::map<std::string, Signature> signatures_;
  int nextStmt_ = 0;
};

}  // namespace

ir::Contract lower(const Contract& c) { return Lowerer(c).run(); }

}  // namespace symvalic::syntax
