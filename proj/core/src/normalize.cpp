#include "symvalic/reasoner.hpp"

#include <utility>

namespace symvalic::sym {

namespace {

bool isCommutative(BinOpKind op) {
  switch (op) {
  case BinOpKind::Add:
  case BinOpKind::Mul:
  case BinOpKind::Eq:
  case BinOpKind::And:
  case BinOpKind::Or: return true;
  default: return false;
  }
}

U256 fold(BinOpKind op, const U256& a, const U256& b) {
  switch (op) {
  case BinOpKind::Add: return a + b;
  case BinOpKind::Sub: return a - b;
  case BinOpKind::Mul: return a * b;
  case BinOpKind::Div: return b == 0 ? U256(0) : U256(a / b);
  case BinOpKind::Mod: return b == 0 ? U256(0) : U256(a % b);
  case BinOpKind::Lt: return a < b ? 1 : 0;
  case BinOpKind::Gt: return a > b ? 1 : 0;
  case BinOpKind::Eq: return a == b ? 1 : 0;
  case BinOpKind::And: return (a != 0 && b != 0) ? 1 : 0;
  case BinOpKind::Or: return (a != 0 || b != 0) ? 1 : 0;
  }
  return 0;
}

bool isOp(const Expr& e, BinOpKind op) { return e.kind() == ExprKind::BinOp && e.op() == op; }

/// A Concat used as a word means the low 256 bits of its image, which is not
/// what it means under Sha3; identities must not strip that context away.
bool word(const Expr& e) { return e.kind() != ExprKind::Concat; }

const Expr kZero = Expr::constant(0);
const Expr kOne = Expr::constant(1);

}  // namespace

Expr makeNot(const Expr& a) {
  if (a.isConst()) return Expr::boolean(a.value() == 0);
  if (a.kind() == ExprKind::Not && isBooleanValued(a.lhs())) return a.lhs();
  return Expr::negation(a);
}

Expr makeBinary(BinOpKind op, const Expr& lhsIn, const Expr& rhsIn) {
  if (lhsIn.isConst() && rhsIn.isConst()) return Expr::constant(fold(op, lhsIn.value(), rhsIn.value()));
  if (op == BinOpKind::Gt) return makeBinary(BinOpKind::Lt, rhsIn, lhsIn);

  const Expr* a = &lhsIn;
  const Expr* b = &rhsIn;
  if (isCommutative(op) && *b < *a) std::swap(a, b);

  switch (op) {
  case BinOpKind::Add:
    if (a->isConst(0) && word(*b)) return *b;
    if (a->isConst() && isOp(*b, BinOpKind::Add) && b->lhs().isConst())
      return makeBinary(BinOpKind::Add, Expr::constant(a->value() + b->lhs().value()), b->rhs());
    break;
  case BinOpKind::Sub:
    if (*a == *b) return kZero;
    if (b->isConst()) return makeBinary(BinOpKind::Add, Expr::constant(U256(0) - b->value()), *a);
    break;
  case BinOpKind::Mul:
    if (a->isConst(0)) return kZero;
    if (a->isConst(1) && word(*b)) return *b;
    if (a->isConst() && isOp(*b, BinOpKind::Mul) && b->lhs().isConst())
      return makeBinary(BinOpKind::Mul, Expr::constant(a->value() * b->lhs().value()), b->rhs());
    break;
  case BinOpKind::Div:
    if (b->isConst(0) || a->isConst(0)) return kZero;
    if (b->isConst(1) && word(*a)) return *a;
    break;
  case BinOpKind::Mod:
    if (b->isConst(0) || b->isConst(1) || a->isConst(0) || *a == *b) return kZero;
    break;
  case BinOpKind::Lt:
    if (*a == *b || b->isConst(0) || a->isConst(kU256Max)) return kZero;
    break;
  case BinOpKind::Eq:
    if (*a == *b) return kOne;
    break;
  case BinOpKind::And:
    if (a->isConst()) {
      if (a->value() == 0) return kZero;
      if (isBooleanValued(*b)) return *b;
      if (!a->isConst(1)) return Expr::binary(BinOpKind::And, kOne, *b);
    }
    if (*a == *b && isBooleanValued(*a)) return *a;
    break;
  case BinOpKind::Or:
    if (a->isConst()) {
      if (a->value() != 0) return kOne;
      if (isBooleanValued(*b)) return *b;
    }
    if (*a == *b && isBooleanValued(*a)) return *a;
    break;
  case BinOpKind::Gt: break;
  }
  return Expr::binary(op, *a, *b);
}

Expr normalize(const Expr& e) {
  switch (e.kind()) {
  case ExprKind::Const:
  case ExprKind::SymVar: return e;
  case ExprKind::BinOp: return makeBinary(e.op(), normalize(e.lhs()), normalize(e.rhs()));
  case ExprKind::Not: return makeNot(normalize(e.lhs()));
  case ExprKind::Sha3: return Expr::sha3(normalize(e.lhs()));
  case ExprKind::Concat: return Expr::concat(normalize(e.lhs()), normalize(e.rhs()));
  }
  return e;
}

Expr truthOf(const Expr& e) {
  Expr n = normalize(e);
  if (isBooleanValued(n)) return n;
  return makeNot(makeBinary(BinOpKind::Eq, kZero, n));
}

}  // namespace symvalic::sym
