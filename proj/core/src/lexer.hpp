#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symvalic/ir.hpp"

namespace symvalic::syntax {

struct Token {
  enum class Kind : std::uint8_t { Ident, Number, Punct, End };

  Kind kind = Kind::End;
  std::string text;
  ir::U256 value = 0;
  bool hex = false;
  ir::SourceLoc loc;
};

/// Splits source into tokens; `//` and `/* */` comments are skipped.
/// Throws ir::ParseError on stray characters and malformed numbers.
std::vector<Token> tokenize(std::string_view text);

}  // namespace symvalic::syntax
