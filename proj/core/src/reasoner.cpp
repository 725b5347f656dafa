#include "symvalic/reasoner.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace symvalic::sym {

namespace {

bool isOp(const Expr& e, BinOpKind op) { return e.kind() == ExprKind::BinOp && e.op() == op; }

void flattenAnd(const Expr& e, std::vector<Expr>& out) {
  if (isOp(e, BinOpKind::And) && isBooleanValued(e.lhs()) && isBooleanValued(e.rhs())) {
    flattenAnd(e.lhs(), out);
    flattenAnd(e.rhs(), out);
    return;
  }
  if (isOp(e, BinOpKind::And) && e.lhs().isConst(1)) {
    // AND(1, x) with non-boolean x is just the truth of x.
    out.push_back(truthOf(e.rhs()));
    return;
  }
  out.push_back(e);
}

/// Closed interval plus excluded points for one non-constant term.
struct Range {
  U256 lo = 0;
  U256 hi = kU256Max;
  std::set<U256> excluded;

  bool empty() const { return lo > hi || (lo == hi && excluded.contains(lo)); }
};

/// A single-term fact `term in [lo, hi]` or `term != point`.
struct Atom {
  Expr term;
  std::optional<U256> lo;
  std::optional<U256> hi;
  std::optional<U256> excluded;
};

std::optional<Atom> atomOf(const Expr& c) {
  if (isOp(c, BinOpKind::Lt)) {
    const Expr& l = c.lhs();
    const Expr& r = c.rhs();
    if (!l.isConst() && r.isConst()) {
      if (r.value() == 0) return std::nullopt;
      return Atom{l, std::nullopt, U256(r.value() - 1), std::nullopt};
    }
    if (l.isConst() && !r.isConst()) {
      if (l.value() == kU256Max) return std::nullopt;
      return Atom{r, U256(l.value() + 1), std::nullopt, std::nullopt};
    }
    return std::nullopt;
  }
  if (isOp(c, BinOpKind::Eq) && c.lhs().isConst() && !c.rhs().isConst())
    return Atom{c.rhs(), c.lhs().value(), c.lhs().value(), std::nullopt};
  if (c.kind() == ExprKind::Not) {
    const Expr& inner = c.lhs();
    if (isOp(inner, BinOpKind::Lt)) {
      const Expr& l = inner.lhs();
      const Expr& r = inner.rhs();
      if (!l.isConst() && r.isConst()) return Atom{l, r.value(), std::nullopt, std::nullopt};
      if (l.isConst() && !r.isConst()) return Atom{r, std::nullopt, l.value(), std::nullopt};
      return std::nullopt;
    }
    if (isOp(inner, BinOpKind::Eq) && inner.lhs().isConst() && !inner.rhs().isConst())
      return Atom{inner.rhs(), std::nullopt, std::nullopt, inner.lhs().value()};
    return std::nullopt;
  }
  if (!c.isConst() && !isBooleanValued(c)) return Atom{c, std::nullopt, std::nullopt, U256(0)};
  return std::nullopt;
}

class Facts {
public:
  explicit Facts(std::span<const Expr> conjuncts) {
    for (const auto& raw : conjuncts) {
      std::vector<Expr> parts;
      flattenAnd(normalize(raw), parts);
      for (auto& p : parts) add(p);
    }
  }

  bool contradictory() const { return contradictory_; }

  bool proves(const Expr& c) const {
    if (c.isConst()) return c.value() != 0;
    if (known_.contains(c)) return true;
    if (isOp(c, BinOpKind::Or)) return proves(c.lhs()) || proves(c.rhs());
    if (isOp(c, BinOpKind::And)) {
      std::vector<Expr> parts;
      flattenAnd(c, parts);
      if (parts.size() > 1)
        return std::all_of(parts.begin(), parts.end(), [&](const Expr& p) { return proves(p); });
    }
    auto atom = atomOf(c);
    if (!atom) return false;
    auto it = ranges_.find(atom->term);
    if (it == ranges_.end()) return false;
    const Range& r = it->second;
    if (atom->excluded) {
      const U256& p = *atom->excluded;
      return p < r.lo || p > r.hi || r.excluded.contains(p);
    }
    U256 lo = atom->lo.value_or(0);
    U256 hi = atom->hi.value_or(kU256Max);
    return r.lo >= lo && r.hi <= hi;
  }

private:
  void add(const Expr& c) {
    if (c.isConst()) {
      if (c.value() == 0) contradictory_ = true;
      return;
    }
    known_.insert(c);
    auto atom = atomOf(c);
    if (!atom) return;
    Range& r = ranges_[atom->term];
    if (atom->lo && *atom->lo > r.lo) r.lo = *atom->lo;
    if (atom->hi && *atom->hi < r.hi) r.hi = *atom->hi;
    if (atom->excluded) r.excluded.insert(*atom->excluded);
    // Tighten bounds sitting on an excluded point.
    while (r.lo <= r.hi && r.excluded.contains(r.lo) && r.lo != kU256Max) ++r.lo;
    while (r.lo <= r.hi && r.excluded.contains(r.hi) && r.hi != 0) --r.hi;
    if (r.empty()) contradictory_ = true;
  }

  std::set<Expr> known_;
  std::map<Expr, Range> ranges_;
  bool contradictory_ = false;
};

void pushUnique(std::vector<Expr>& out, const Expr& e) {
  if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
}

/// Candidates for `var` such that `lhs == rhs`, peeling injective constructors.
void solveEquality(const Expr& var, const Expr& lhs, const Expr& rhs, std::vector<Expr>& out, int depth = 0) {
  if (depth > 8) return;
  if (lhs == var && !contains(rhs, var)) return pushUnique(out, rhs);
  if (rhs == var && !contains(lhs, var)) return pushUnique(out, lhs);
  if (lhs.kind() == ExprKind::Sha3 && rhs.kind() == ExprKind::Sha3)
    return solveEquality(var, lhs.lhs(), rhs.lhs(), out, depth + 1);
  if (lhs.kind() == ExprKind::Concat && rhs.kind() == ExprKind::Concat) {
    solveEquality(var, lhs.lhs(), rhs.lhs(), out, depth + 1);
    solveEquality(var, lhs.rhs(), rhs.rhs(), out, depth + 1);
    return;
  }
  // Invert ADD(k, x) == y as x == y - k, and SUB(x, y) == z either way.
  auto invert = [&](const Expr& side, const Expr& other) {
    if (!contains(side, var) || contains(other, var)) return;
    if (isOp(side, BinOpKind::Add) && side.lhs().isConst())
      solveEquality(var, side.rhs(), makeBinary(BinOpKind::Sub, other, side.lhs()), out, depth + 1);
    else if (isOp(side, BinOpKind::Sub)) {
      if (contains(side.lhs(), var) && !contains(side.rhs(), var))
        solveEquality(var, side.lhs(), makeBinary(BinOpKind::Add, other, side.rhs()), out, depth + 1);
      else if (contains(side.rhs(), var) && !contains(side.lhs(), var))
        solveEquality(var, side.rhs(), makeBinary(BinOpKind::Sub, side.lhs(), other), out, depth + 1);
    }
  };
  invert(lhs, rhs);
  invert(rhs, lhs);
}

void solveComparison(const Expr& var, const Expr& c, std::vector<Expr>& out) {
  if (isOp(c, BinOpKind::Lt)) {
    if (c.lhs() == var && c.rhs().isConst() && c.rhs().value() != 0)
      pushUnique(out, Expr::constant(c.rhs().value() - 1));
    else if (c.rhs() == var && c.lhs().isConst() && c.lhs().value() != kU256Max)
      pushUnique(out, Expr::constant(c.lhs().value() + 1));
    return;
  }
  if (c.kind() == ExprKind::Not) {
    const Expr& inner = c.lhs();
    if (isOp(inner, BinOpKind::Lt)) {
      if (inner.lhs() == var && inner.rhs().isConst()) pushUnique(out, inner.rhs());
      else if (inner.rhs() == var && inner.lhs().isConst()) pushUnique(out, inner.lhs());
    } else if (isOp(inner, BinOpKind::Eq) && inner.lhs().isConst() && inner.rhs() == var) {
      pushUnique(out, Expr::constant(inner.lhs().value() + 1));
    }
    return;
  }
  if (c == var) pushUnique(out, Expr::constant(1));
}

}  // namespace

std::vector<Expr> conjunctsOf(const Expr& e) {
  std::vector<Expr> out;
  flattenAnd(e, out);
  return out;
}

Implication implies(std::span<const Expr> strongConjuncts, const Expr& weak) {
  Expr w = normalize(weak);
  if (w.isConst() && w.value() != 0) return Implication::True;
  Facts facts(strongConjuncts);
  if (facts.contradictory()) return Implication::True;
  for (const auto& part : conjunctsOf(w)) {
    if (!facts.proves(part)) return Implication::Unknown;
  }
  return Implication::True;
}

Implication implies(const Expr& strong, const Expr& weak) {
  const Expr conj[] = {strong};
  return implies(std::span<const Expr>(conj), weak);
}

std::vector<Expr> valueForVar(const Expr& var, const Expr& constraint) {
  if (!var.isSymbol() || var.binding() != Binding::Free) return {};
  Expr c = normalize(constraint);
  if (!contains(c, var)) return {};
  auto parts = conjunctsOf(c);

  std::vector<Expr> proposals;
  for (const auto& p : parts) {
    if (isOp(p, BinOpKind::Eq)) solveEquality(var, p.lhs(), p.rhs(), proposals);
  }
  for (const auto& p : parts) {
    if (!isOp(p, BinOpKind::Eq)) solveComparison(var, p, proposals);
  }

  std::vector<Expr> accepted;
  for (const auto& cand : proposals) {
    if (contains(cand, var)) continue;
    Expr check = normalize(substitute(c, var, cand));
    if (check.isConst() && check.value() != 0) accepted.push_back(cand);
  }
  return accepted;
}

}  // namespace symvalic::sym
