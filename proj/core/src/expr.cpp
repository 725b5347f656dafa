#include "symvalic/expr.hpp"

#include <cassert>
#include <functional>
#include <optional>
#include <stdexcept>

namespace symvalic::sym {

struct Expr::Node {
  ExprKind kind = ExprKind::Const;
  BinOpKind op = BinOpKind::Add;
  U256 value = 0;
  Radix radix = Radix::Decimal;
  std::string name;
  Binding binding = Binding::Free;
  std::optional<Expr> lhs;
  std::optional<Expr> rhs;
  std::string key;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

int rank(ExprKind k) {
  switch (k) {
  case ExprKind::Const: return 0;
  case ExprKind::SymVar: return 1;
  default: return 2;
  }
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::string_view toString(BinOpKind op) {
  switch (op) {
  case BinOpKind::Add: return "ADD";
  case BinOpKind::Sub: return "SUB";
  case BinOpKind::Mul: return "MUL";
  case BinOpKind::Div: return "DIV";
  case BinOpKind::Mod: return "MOD";
  case BinOpKind::Lt: return "LT";
  case BinOpKind::Gt: return "GT";
  case BinOpKind::Eq: return "EQ";
  case BinOpKind::And: return "AND";
  case BinOpKind::Or: return "OR";
  }
  return "?";
}

std::string toDecimal(const U256& v) { return v.str(); }

std::string toHex(const U256& v) {
  if (v == 0) return "0x0";
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  U256 x = v;
  while (x != 0) {
    out.push_back(kDigits[static_cast<unsigned>(x & 0xf)]);
    x >>= 4;
  }
  out += "x0";
  return {out.rbegin(), out.rend()};
}

Expr::Expr() : Expr(constant(0)) {}

Expr Expr::constant(U256 value, Radix radix) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Const;
  n->value = std::move(value);
  n->radix = radix;
  n->key = toDecimal(n->value);
  n->hash = std::hash<std::string>{}(n->key);
  return Expr(std::move(n));
}

Expr Expr::symbol(std::string name, Binding binding) {
  if (name.empty()) throw std::invalid_argument("symbol name must not be empty");
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::SymVar;
  n->name = std::move(name);
  n->binding = binding;
  n->key = n->name;
  n->hash = mix(std::hash<std::string>{}(n->key), 1);
  return Expr(std::move(n));
}

Expr Expr::binary(BinOpKind op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::BinOp;
  n->op = op;
  n->key.reserve(lhs.key().size() + rhs.key().size() + 8);
  n->key.append(toString(op)).append("(").append(lhs.key()).append(",").append(rhs.key()).append(")");
  n->hash = mix(mix(static_cast<std::size_t>(op) + 11, lhs.hash()), rhs.hash());
  n->size = 1 + lhs.size() + rhs.size();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::negation(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Not;
  n->key = "NOT(" + operand.key() + ")";
  n->hash = mix(23, operand.hash());
  n->size = 1 + operand.size();
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::sha3(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Sha3;
  n->key = "SHA3(" + operand.key() + ")";
  n->hash = mix(29, operand.hash());
  n->size = 1 + operand.size();
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::concat(Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Concat;
  n->key = "CONCAT(" + lhs.key() + "," + rhs.key() + ")";
  n->hash = mix(mix(31, lhs.hash()), rhs.hash());
  n->size = 1 + lhs.size() + rhs.size();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

const Expr& Expr::owner() {
  static const Expr e = symbol("<<owner>>", Binding::Bound);
  return e;
}
const Expr& Expr::unprivilegedUser() {
  static const Expr e = symbol("<<unprivileged-user>>", Binding::Bound);
  return e;
}
const Expr& Expr::ownerUniqueValue() {
  static const Expr e = symbol("<<owner-unique-value>>", Binding::Free);
  return e;
}
const Expr& Expr::userUniqueValue() {
  static const Expr e = symbol("<<user-unique-value>>", Binding::Free);
  return e;
}

ExprKind Expr::kind() const { return node_->kind; }
const U256& Expr::value() const { return node_->value; }
Radix Expr::radix() const { return node_->radix; }
const std::string& Expr::name() const { return node_->name; }
Binding Expr::binding() const { return node_->binding; }
BinOpKind Expr::op() const { return node_->op; }

const Expr& Expr::lhs() const {
  assert(node_->lhs);
  return *node_->lhs;
}
const Expr& Expr::rhs() const {
  assert(node_->rhs);
  return *node_->rhs;
}

const std::string& Expr::key() const { return node_->key; }
std::size_t Expr::hash() const { return node_->hash; }
std::size_t Expr::size() const { return node_->size; }

std::string Expr::str() const {
  switch (kind()) {
  case ExprKind::Const: return radix() == Radix::Hex ? toHex(value()) : toDecimal(value());
  case ExprKind::SymVar: return name();
  case ExprKind::BinOp:
    return std::string(toString(op())) + "(" + lhs().str() + ", " + rhs().str() + ")";
  case ExprKind::Not: return "NOT(" + lhs().str() + ")";
  case ExprKind::Sha3: return "SHA3(" + lhs().str() + ")";
  case ExprKind::Concat: return "CONCAT(" + lhs().str() + ", " + rhs().str() + ")";
  }
  return {};
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  int ra = rank(a.kind());
  int rb = rank(b.kind());
  if (ra != rb) return ra <=> rb;
  if (ra == 0) {
    if (a.value() == b.value()) return std::strong_ordering::equal;
    return a.value() < b.value() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  int c = a.key().compare(b.key());
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  return a.hash() == b.hash() && a.key() == b.key();
}

bool isBooleanValued(const Expr& e) {
  switch (e.kind()) {
  case ExprKind::Const: return e.value() <= 1;
  case ExprKind::Not: return true;
  case ExprKind::BinOp:
    switch (e.op()) {
    case BinOpKind::Lt:
    case BinOpKind::Gt:
    case BinOpKind::Eq:
    case BinOpKind::And:
    case BinOpKind::Or: return true;
    default: return false;
    }
  default: return false;
  }
}

bool contains(const Expr& haystack, const Expr& needle) {
  if (haystack == needle) return true;
  switch (haystack.kind()) {
  case ExprKind::BinOp:
  case ExprKind::Concat: return contains(haystack.lhs(), needle) || contains(haystack.rhs(), needle);
  case ExprKind::Not:
  case ExprKind::Sha3: return contains(haystack.lhs(), needle);
  default: return false;
  }
}

namespace {
void collectSymbols(const Expr& e, std::set<Expr>& out, bool freeOnly) {
  switch (e.kind()) {
  case ExprKind::SymVar:
    if (!freeOnly || e.binding() == Binding::Free) out.insert(e);
    return;
  case ExprKind::BinOp:
  case ExprKind::Concat:
    collectSymbols(e.lhs(), out, freeOnly);
    collectSymbols(e.rhs(), out, freeOnly);
    return;
  case ExprKind::Not:
  case ExprKind::Sha3: collectSymbols(e.lhs(), out, freeOnly); return;
  case ExprKind::Const: return;
  }
}
}  // namespace

std::set<Expr> symbolsOf(const Expr& e) {
  std::set<Expr> out;
  collectSymbols(e, out, false);
  return out;
}

std::set<Expr> freeSymbolsOf(const Expr& e) {
  std::set<Expr> out;
  collectSymbols(e, out, true);
  return out;
}

Expr substitute(const Expr& e, const Expr& var, const Expr& replacement) {
  if (e == var) return replacement;
  switch (e.kind()) {
  case ExprKind::Const:
  case ExprKind::SymVar: return e;
  case ExprKind::BinOp:
    return Expr::binary(e.op(), substitute(e.lhs(), var, replacement), substitute(e.rhs(), var, replacement));
  case ExprKind::Not: return Expr::negation(substitute(e.lhs(), var, replacement));
  case ExprKind::Sha3: return Expr::sha3(substitute(e.lhs(), var, replacement));
  case ExprKind::Concat:
    return Expr::concat(substitute(e.lhs(), var, replacement), substitute(e.rhs(), var, replacement));
  }
  return e;
}

}  // namespace symvalic::sym
