#include "lexer.hpp"

#include <cctype>

namespace symvalic::syntax {

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

int hexDigit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    if (text.substr(i, 2) == "/*") {
      ir::SourceLoc start{line, col};
      advance(2);
      while (i < text.size() && text.substr(i, 2) != "*/") advance();
      if (i >= text.size()) throw ir::ParseError("unterminated comment", start);
      advance(2);
      continue;
    }

    Token t;
    t.loc = {line, col};
    if (identStart(c)) {
      std::size_t j = i;
      while (j < text.size() && identChar(text[j])) ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      t.kind = Token::Kind::Number;
      bool overflow = false;
      const ir::U256 limit = sym::kU256Max;
      if (text.substr(i, 2) == "0x" || text.substr(i, 2) == "0X") {
        j += 2;
        t.hex = true;
        std::size_t digits = 0;
        while (j < text.size() && hexDigit(text[j]) >= 0) {
          if (t.value > (limit >> 4)) overflow = true;
          t.value = (t.value << 4) | hexDigit(text[j]);
          ++j;
          ++digits;
        }
        if (digits == 0) throw ir::ParseError("malformed hex literal", t.loc);
      } else {
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
          unsigned d = static_cast<unsigned>(text[j] - '0');
          if (t.value > (limit - d) / 10) overflow = true;
          t.value = t.value * 10 + d;
          ++j;
        }
      }
      if (j < text.size() && identChar(text[j])) throw ir::ParseError("malformed number", t.loc);
      if (overflow) throw ir::ParseError("literal does not fit in 256 bits", t.loc);
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      static constexpr std::string_view kTwoChar[] = {"==", "&&", "||"};
      std::string_view two = text.substr(i, 2);
      bool matched = false;
      for (auto p : kTwoChar) {
        if (two == p) {
          t.text = std::string(p);
          matched = true;
        }
      }
      if (!matched) {
        if (std::string_view("{}()[];,.=+-*/%<>!").find(c) == std::string_view::npos)
          throw ir::ParseError(std::string("unexpected character '") + c + "'", t.loc);
        t.text = std::string(1, c);
      }
      t.kind = Token::Kind::Punct;
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

}  // namespace symvalic::syntax
