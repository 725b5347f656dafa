#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symvalic/ir.hpp"

namespace symvalic::syntax {

using ir::SourceLoc;
using ir::U256;

enum class TypeName : std::uint8_t { Uint, Address, Bool, Mapping };

std::string_view toString(TypeName t);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind : std::uint8_t { Number, Bool, Name, Sender, Index, Not, Binary, Call };

  Kind kind = Kind::Number;
  U256 value = 0;
  bool hex = false;
  /// Name, mapping name of Index, callee of Call, operator spelling of Binary.
  std::string name;
  std::vector<ExprPtr> operands;
  SourceLoc loc;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Stmt {
  enum class Kind : std::uint8_t {
    Local,         // type name = value;
    Assign,        // name = value;
    IndexAssign,   // name[key] = value;
    Require,       // require(value);
    If,            // if (value) { body } else { orElse }
    ExternalCall,  // call target.method(args);
    Transfer,      // transfer(args[0], args[1]);
    SelfDestruct,  // selfdestruct(args[0]);
    DelegateCall,  // delegatecall(args[0]);
    Return,        // return [value];
    Call,          // f(args);
  };

  Kind kind = Kind::Assign;
  TypeName type = TypeName::Uint;
  std::string name;
  std::string method;
  ExprPtr key;
  ExprPtr value;
  ExprPtr target;
  std::vector<ExprPtr> args;
  Block body;
  Block orElse;
  bool hasElse = false;
  SourceLoc loc;
};

struct Param {
  TypeName type = TypeName::Uint;
  std::string name;
  SourceLoc loc;
};

struct Function {
  std::string name;
  ir::Visibility visibility = ir::Visibility::Public;
  std::vector<Param> params;
  Block body;
  SourceLoc loc;
};

struct StorageDecl {
  TypeName type = TypeName::Uint;
  std::string name;
  SourceLoc loc;
};

struct Contract {
  std::string name;
  std::vector<StorageDecl> storage;
  std::vector<Function> functions;
  SourceLoc loc;
};

/// Parses surface text without type checking. Throws ir::ParseError.
Contract parseSyntax(std::string_view text);

/// Fully parenthesized surface text that parses back to the same contract.
std::string print(const Contract& c);

/// Type-checks and lowers to IR. Throws ir::ParseError.
ir::Contract lower(const Contract& c);

}  // namespace symvalic::syntax
