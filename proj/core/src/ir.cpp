#include "symvalic/ir.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "symvalic/syntax.hpp"

namespace symvalic::ir {

std::string_view toString(Op op) {
  switch (op) {
  case Op::Const: return "CONST";
  case Op::Copy: return "COPY";
  case Op::BinOp: return "BINOP";
  case Op::Not: return "NOT";
  case Op::Sha3: return "SHA3";
  case Op::Concat: return "CONCAT";
  case Op::SLoad: return "SLOAD";
  case Op::SStore: return "SSTORE";
  case Op::Require: return "REQUIRE";
  case Op::Branch: return "BRANCH";
  case Op::Jump: return "JUMP";
  case Op::CallInternal: return "CALLINTERNAL";
  case Op::CallExternal: return "CALLEXTERNAL";
  case Op::Transfer: return "TRANSFER";
  case Op::SelfDestruct: return "SELFDESTRUCT";
  case Op::DelegateCall: return "DELEGATECALL";
  case Op::Caller: return "CALLER";
  case Op::Return: return "RETURN";
  }
  return "?";
}

std::string_view toString(ParamType t) {
  switch (t) {
  case ParamType::Uint256: return "uint256";
  case ParamType::Address: return "address";
  case ParamType::Bool: return "bool";
  }
  return "?";
}

std::string Operand::str() const {
  switch (kind) {
  case Kind::Variable: return name;
  case Kind::Literal: return hex ? sym::toHex(value) : sym::toDecimal(value);
  case Kind::Slot: return "slot " + sym::toDecimal(value);
  }
  return {};
}

bool Statement::isTerminator() const {
  return op == Op::Branch || op == Op::Jump || op == Op::Return || op == Op::SelfDestruct;
}

std::string Statement::str() const {
  std::ostringstream os;
  os << id << ": ";
  if (result) os << *result << " = ";
  if (op == Op::BinOp) os << sym::toString(binop);
  else os << toString(op);
  if (op == Op::CallExternal || op == Op::CallInternal) os << '[' << callee << ']';
  os << '(';
  for (std::size_t i = 0; i < operands.size(); ++i) {
    if (i) os << ", ";
    os << operands[i].str();
  }
  os << ')';
  if (!targets.empty()) {
    os << " ->";
    for (auto t : targets) os << " b" << t;
  }
  return os.str();
}

bool operator==(const Statement& a, const Statement& b) {
  return a.id == b.id && a.op == b.op && (a.op != Op::BinOp || a.binop == b.binop) && a.operands == b.operands &&
         a.result == b.result && a.callee == b.callee && a.targets == b.targets;
}

int Function::paramIndex(std::string_view n) const {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].name == n) return static_cast<int>(i);
  return -1;
}

const Function* Contract::function(std::string_view n) const {
  for (const auto& f : functions)
    if (f.name == n) return &f;
  return nullptr;
}

const Function* Contract::constructor() const {
  for (const auto& f : functions)
    if (f.isConstructor()) return &f;
  return nullptr;
}

const StorageDecl* Contract::storage(std::string_view n) const {
  for (const auto& s : storageSlots)
    if (s.name == n) return &s;
  return nullptr;
}

Constants harvestConstants(const Contract& c) {
  Constants out;
  for (const auto& f : c.functions)
    for (const auto& b : f.blocks)
      for (const auto& s : b.stmts)
        for (const auto& o : s.operands) {
          if (o.kind != Operand::Kind::Literal) continue;
          out.numeric.insert(o.value);
          if (o.addressPosition && o.value < sym::kAddressLimit) out.addressLike.insert(o.value);
        }
  return out;
}

std::set<StmtId> statementsAfter(const Function& f, StmtId from) {
  std::set<StmtId> out;
  std::vector<BlockId> work;
  std::set<BlockId> seen;
  auto successors = [&](const BasicBlock& b) {
    for (auto t : b.stmts.back().targets)
      if (seen.insert(t).second) work.push_back(t);
  };
  for (const auto& b : f.blocks) {
    auto it = std::find_if(b.stmts.begin(), b.stmts.end(), [&](const Statement& s) { return s.id == from; });
    if (it == b.stmts.end()) continue;
    for (++it; it != b.stmts.end(); ++it) out.insert(it->id);
    successors(b);
  }
  while (!work.empty()) {
    BlockId id = work.back();
    work.pop_back();
    const auto& b = f.blocks[static_cast<std::size_t>(id)];
    for (const auto& s : b.stmts) out.insert(s.id);
    successors(b);
  }
  return out;
}

void validate(const Contract& c) {
  auto fail = [&](const std::string& what) { throw std::logic_error(c.name + ": " + what); };
  for (std::size_t i = 0; i < c.storageSlots.size(); ++i)
    if (c.storageSlots[i].slot != i) fail("storage slots are not consecutive from 0");

  std::set<std::string> names;
  std::set<StmtId> ids;
  for (const auto& f : c.functions) {
    if (!names.insert(f.name).second) fail("duplicate function " + f.name);
    if (f.blocks.empty()) fail(f.name + " has no blocks");
    if (f.entryBlock < 0 || f.entryBlock >= static_cast<int>(f.blocks.size())) fail(f.name + ": bad entry block");
    for (std::size_t bi = 0; bi < f.blocks.size(); ++bi) {
      const auto& b = f.blocks[bi];
      if (b.id != static_cast<BlockId>(bi)) fail(f.name + ": block ids out of order");
      if (b.stmts.empty() || !b.stmts.back().isTerminator()) fail(f.name + ": block without terminator");
      std::set<std::string> assigned;
      for (std::size_t si = 0; si < b.stmts.size(); ++si) {
        const auto& s = b.stmts[si];
        if (!ids.insert(s.id).second) fail("duplicate statement id " + std::to_string(s.id));
        if (s.isTerminator() && si + 1 != b.stmts.size()) fail(f.name + ": terminator in the middle of a block");
        if (s.result && !assigned.insert(*s.result).second) fail(f.name + ": " + *s.result + " assigned twice");
        for (auto t : s.targets)
          if (t < 0 || t >= static_cast<int>(f.blocks.size())) fail(f.name + ": jump to missing block");
        if ((s.op == Op::SLoad || s.op == Op::SStore) && s.operands.at(0).kind == Operand::Kind::Slot) {
          auto slot = static_cast<std::size_t>(s.operands[0].value);
          if (slot >= c.storageSlots.size() || c.storageSlots[slot].kind != StorageKind::Scalar)
            fail(f.name + ": direct access to a mapping slot");
        }
        if (s.op == Op::Concat && s.operands.at(1).kind == Operand::Kind::Slot) {
          auto slot = static_cast<std::size_t>(s.operands[1].value);
          if (slot >= c.storageSlots.size() || c.storageSlots[slot].kind != StorageKind::Mapping)
            fail(f.name + ": mapping access to a scalar slot");
        }
      }
    }
  }
}

std::string dump(const Contract& c) {
  std::ostringstream os;
  os << "contract " << c.name << '\n';
  for (const auto& s : c.storageSlots)
    os << "  slot " << s.slot << ": " << s.name << (s.kind == StorageKind::Mapping ? " (mapping)" : "") << '\n';
  for (const auto& f : c.functions) {
    os << "  " << (f.isConstructor() ? "constructor" : f.name) << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) os << (i ? ", " : "") << toString(f.params[i].type) << ' ' << f.params[i].name;
    os << ')' << (f.isPublic() ? " public" : f.isConstructor() ? "" : " internal") << '\n';
    for (const auto& b : f.blocks) {
      os << "    b" << b.id << ":\n";
      for (const auto& s : b.stmts) os << "      " << s.str() << '\n';
    }
  }
  return os.str();
}

ParseError::ParseError(const std::string& message, SourceLoc loc)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
      loc_(loc),
      detail_(message) {}

Contract parse(std::string_view text) {
  Contract c = syntax::lower(syntax::parseSyntax(text));
  validate(c);
  return c;
}

}  // namespace symvalic::ir
