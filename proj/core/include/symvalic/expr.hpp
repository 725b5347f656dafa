#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace symvalic::sym {

/// Unsigned 256-bit integer with modular (wraparound) arithmetic.
using U256 = boost::multiprecision::uint256_t;

inline const U256 kU256Max = ~U256(0);
inline const U256 kAddressLimit = U256(1) << 160;

enum class ExprKind : std::uint8_t { Const, SymVar, BinOp, Not, Sha3, Concat };

enum class BinOpKind : std::uint8_t { Add, Sub, Mul, Div, Mod, Lt, Gt, Eq, And, Or };

enum class Binding : std::uint8_t { Bound, Free };

/// Display hint for constants. Not part of an expression's identity.
enum class Radix : std::uint8_t { Decimal, Hex };

std::string_view toString(BinOpKind op);

/// Immutable, shareable expression over 256-bit values.
///
/// Identity is structural: two expressions are equal iff their canonical keys
/// match. Constants print according to their radix hint, but compare by value.
/// Concat denotes a byte string and is only meaningful as the argument of Sha3
/// (or nested inside another Concat).
class Expr {
public:
  Expr();  // Const 0

  static Expr constant(U256 value, Radix radix = Radix::Decimal);
  static Expr symbol(std::string name, Binding binding);
  static Expr binary(BinOpKind op, Expr lhs, Expr rhs);
  static Expr negation(Expr operand);
  static Expr sha3(Expr operand);
  static Expr concat(Expr lhs, Expr rhs);

  static Expr boolean(bool value) { return constant(value ? 1 : 0); }

  /// The distinguished identities used to seed entry points.
  static const Expr& owner();
  static const Expr& unprivilegedUser();
  static const Expr& ownerUniqueValue();
  static const Expr& userUniqueValue();

  ExprKind kind() const;
  bool isConst() const { return kind() == ExprKind::Const; }
  bool isSymbol() const { return kind() == ExprKind::SymVar; }
  bool isConst(const U256& v) const { return isConst() && value() == v; }

  const U256& value() const;
  Radix radix() const;
  const std::string& name() const;
  Binding binding() const;
  BinOpKind op() const;
  /// First child (the sole child for Not and Sha3).
  const Expr& lhs() const;
  const Expr& rhs() const;

  /// Canonical identity string (constants in decimal, no spaces).
  const std::string& key() const;
  std::size_t hash() const;
  std::size_t size() const;

  /// Printed form, e.g. `SHA3(CONCAT(<<owner>>, 0x0))`.
  std::string str() const;

  /// Total order: Const < SymVar < composite, ties broken by canonical key.
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b);

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// True if the expression always evaluates to 0 or 1.
bool isBooleanValued(const Expr& e);

bool contains(const Expr& haystack, const Expr& needle);

/// All SymVars occurring in `e`, in canonical order.
std::set<Expr> symbolsOf(const Expr& e);
std::set<Expr> freeSymbolsOf(const Expr& e);

Expr substitute(const Expr& e, const Expr& var, const Expr& replacement);

/// Convenience builders (not normalized).
inline Expr add(Expr a, Expr b) { return Expr::binary(BinOpKind::Add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return Expr::binary(BinOpKind::Sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return Expr::binary(BinOpKind::Mul, std::move(a), std::move(b)); }
inline Expr div(Expr a, Expr b) { return Expr::binary(BinOpKind::Div, std::move(a), std::move(b)); }
inline Expr mod(Expr a, Expr b) { return Expr::binary(BinOpKind::Mod, std::move(a), std::move(b)); }
inline Expr lt(Expr a, Expr b) { return Expr::binary(BinOpKind::Lt, std::move(a), std::move(b)); }
inline Expr gt(Expr a, Expr b) { return Expr::binary(BinOpKind::Gt, std::move(a), std::move(b)); }
inline Expr eq(Expr a, Expr b) { return Expr::binary(BinOpKind::Eq, std::move(a), std::move(b)); }
inline Expr land(Expr a, Expr b) { return Expr::binary(BinOpKind::And, std::move(a), std::move(b)); }
inline Expr lor(Expr a, Expr b) { return Expr::binary(BinOpKind::Or, std::move(a), std::move(b)); }
inline Expr lnot(Expr a) { return Expr::negation(std::move(a)); }
inline Expr num(U256 v) { return Expr::constant(std::move(v)); }
inline Expr hex(U256 v) { return Expr::constant(std::move(v), Radix::Hex); }

std::string toDecimal(const U256& v);
std::string toHex(const U256& v);

}  // namespace symvalic::sym
