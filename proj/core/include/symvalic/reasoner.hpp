#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "symvalic/expr.hpp"

namespace symvalic::sym {

/// Returns the minimal equivalent form of `e` under 256-bit modular semantics.
///
/// Constant subterms are folded, commutative operands are put in canonical
/// order and a small set of algebraic identities is applied. Sha3 and Concat
/// are treated as uninterpreted constructors. Idempotent.
Expr normalize(const Expr& e);

/// Smart constructors that assume already-normalized operands.
Expr makeBinary(BinOpKind op, const Expr& lhs, const Expr& rhs);
Expr makeNot(const Expr& operand);

/// `e != 0` as a boolean-valued, normalized expression.
Expr truthOf(const Expr& e);

enum class Implication : std::uint8_t { True, Unknown };

/// Checks `strong => weak` for every assignment of the symbols involved.
/// Returns Unknown whenever the syntactic engine cannot establish it.
Implication implies(const Expr& strong, const Expr& weak);

/// Same, with the strong side given as a conjunction of its elements.
Implication implies(std::span<const Expr> strongConjuncts, const Expr& weak);

/// Proposes values for free symbol `var` that make `constraint` normalize to
/// true. Equalities are tried first; the result may be empty. Candidates are
/// returned in a deterministic order without duplicates.
std::vector<Expr> valueForVar(const Expr& var, const Expr& constraint);

/// Splits a normalized expression into its top-level conjuncts.
std::vector<Expr> conjunctsOf(const Expr& e);

using HashOracle = std::function<U256(std::span<const std::uint8_t>)>;

/// SHA3-256 over the byte image; a fixed, collision-resistant stand-in for
/// Keccak-256.
U256 sha3Oracle(std::span<const std::uint8_t> bytes);

/// Evaluates `e` under a total assignment of its symbols (by name).
/// Booleans are 0/1, DIV and MOD by zero yield 0, Sha3 hashes the big-endian
/// byte image of its argument (Concat images are concatenated). A bare Concat
/// evaluates to the low 256 bits of its byte image.
/// Throws std::out_of_range if a symbol is unassigned.
U256 evalConcrete(const Expr& e, const std::map<std::string, U256>& assignment,
                  const HashOracle& hash = sha3Oracle);

}  // namespace symvalic::sym
