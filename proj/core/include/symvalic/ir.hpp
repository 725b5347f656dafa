#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symvalic/expr.hpp"

namespace symvalic::ir {

using sym::BinOpKind;
using sym::U256;

enum class Op : std::uint8_t {
  Const,
  Copy,
  BinOp,
  Not,
  Sha3,
  Concat,
  SLoad,
  SStore,
  Require,
  Branch,
  Jump,
  CallInternal,
  CallExternal,
  Transfer,
  SelfDestruct,
  DelegateCall,
  Caller,
  Return,
};

std::string_view toString(Op op);

using StmtId = int;
using BlockId = int;

struct SourceLoc {
  int line = 0;
  int column = 0;
};

/// A statement operand: an SSA variable, an integer literal, or a storage slot
/// offset (only used as the second CONCAT operand of a mapping access and as
/// the address of a scalar SLOAD/SSTORE).
struct Operand {
  enum class Kind : std::uint8_t { Variable, Literal, Slot };

  Kind kind = Kind::Variable;
  std::string name;
  U256 value = 0;
  bool hex = false;
  /// The literal sits where an address is expected.
  bool addressPosition = false;

  static Operand variable(std::string name) { return {Kind::Variable, std::move(name), 0, false, false}; }
  static Operand literal(U256 v, bool hex = false, bool address = false) { return {Kind::Literal, {}, v, hex, address}; }
  static Operand slot(unsigned offset) { return {Kind::Slot, {}, offset, true, false}; }

  bool isVariable() const { return kind == Kind::Variable; }
  std::string str() const;

  friend bool operator==(const Operand&, const Operand&) = default;
};

struct Statement {
  StmtId id = 0;
  Op op = Op::Const;
  BinOpKind binop = BinOpKind::Add;
  std::vector<Operand> operands;
  std::optional<std::string> result;
  /// CALLEXTERNAL: method name; CALLINTERNAL: callee function name.
  std::string callee;
  /// BRANCH: {then, else}; JUMP: {target}.
  std::vector<BlockId> targets;
  SourceLoc loc;

  bool isTerminator() const;
  std::string str() const;

  /// Structural equality; source locations are ignored.
  friend bool operator==(const Statement& a, const Statement& b);
};

struct BasicBlock {
  BlockId id = 0;
  std::vector<Statement> stmts;

  friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

enum class Visibility : std::uint8_t { Public, Internal, Constructor };
enum class ParamType : std::uint8_t { Uint256, Address, Bool };

std::string_view toString(ParamType t);

struct Param {
  std::string name;
  ParamType type = ParamType::Uint256;

  friend bool operator==(const Param&, const Param&) = default;
};

struct Function {
  std::string name;
  Visibility visibility = Visibility::Public;
  std::vector<Param> params;
  std::vector<BasicBlock> blocks;
  BlockId entryBlock = 0;

  bool isPublic() const { return visibility == Visibility::Public; }
  bool isConstructor() const { return visibility == Visibility::Constructor; }
  int paramIndex(std::string_view name) const;

  friend bool operator==(const Function&, const Function&) = default;
};

enum class StorageKind : std::uint8_t { Scalar, Mapping };

struct StorageDecl {
  std::string name;
  unsigned slot = 0;
  StorageKind kind = StorageKind::Scalar;
  /// Scalars only: declared as `address`.
  bool address = false;

  friend bool operator==(const StorageDecl&, const StorageDecl&) = default;
};

struct Contract {
  std::string name;
  std::vector<StorageDecl> storageSlots;
  std::vector<Function> functions;
  std::set<U256> addressConstants;

  const Function* function(std::string_view name) const;
  const Function* constructor() const;
  const StorageDecl* storage(std::string_view name) const;

  friend bool operator==(const Contract&, const Contract&) = default;
};

struct Constants {
  std::set<U256> numeric;
  std::set<U256> addressLike;
};

/// Literal operands of all statements; slot offsets are not literals.
Constants harvestConstants(const Contract& c);

/// Statements that can execute after `from` within `f`, following jumps and
/// branches (loops are not expressible, so `from` itself is never included).
std::set<StmtId> statementsAfter(const Function& f, StmtId from);

/// Checks the structural invariants of a lowered contract; throws
/// std::logic_error naming the first violation.
void validate(const Contract& c);

/// Human-readable listing, one statement per line.
std::string dump(const Contract& c);

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, SourceLoc loc);
  SourceLoc loc() const { return loc_; }
  const std::string& detail() const { return detail_; }

private:
  SourceLoc loc_;
  std::string detail_;
};

/// Parses and lowers surface-format source. Throws ParseError.
Contract parse(std::string_view text);

}  // namespace symvalic::ir
