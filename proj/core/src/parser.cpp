#include <set>

#include "lexer.hpp"
#include "symvalic/syntax.hpp"

namespace symvalic::syntax {

namespace {

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Contract contract() {
    Contract c;
    c.loc = peek().loc;
    expectWord("contract");
    c.name = ident("contract name");
    expect("{");
    while (!at("}")) {
      if (atWord("function") || atWord("constructor")) {
        c.functions.push_back(function());
      } else if (!c.functions.empty()) {
        fail("storage declarations must precede functions");
      } else {
        c.storage.push_back(storageDecl());
      }
    }
    expect("}");
    if (peek().kind != Token::Kind::End) fail("unexpected text after contract");
    return c;
  }

private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool at(std::string_view punct, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == punct;
  }
  bool atWord(std::string_view word, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == word;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ir::ParseError(msg, peek().loc); }

  std::string describe(const Token& t) const {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }

  void expect(std::string_view punct) {
    if (!at(punct)) fail("expected '" + std::string(punct) + "' but found " + describe(peek()));
    next();
  }
  void expectWord(std::string_view word) {
    if (!atWord(word)) fail("expected '" + std::string(word) + "' but found " + describe(peek()));
    next();
  }

  static bool reserved(std::string_view w) {
    static const std::set<std::string_view> kWords = {
        "contract", "function", "constructor", "public", "internal", "uint", "uint256", "address",
        "bool", "mapping", "if", "else", "require", "call", "transfer", "selfdestruct",
        "delegatecall", "return", "true", "false", "msg"};
    return kWords.contains(w);
  }

  std::string ident(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident || reserved(t.text)) fail("expected " + std::string(what) + " but found " + describe(t));
    return next().text;
  }

  std::optional<TypeName> typeName() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) return std::nullopt;
    if (t.text == "uint" || t.text == "uint256") return TypeName::Uint;
    if (t.text == "address") return TypeName::Address;
    if (t.text == "bool") return TypeName::Bool;
    if (t.text == "mapping") return TypeName::Mapping;
    return std::nullopt;
  }

  StorageDecl storageDecl() {
    StorageDecl d;
    d.loc = peek().loc;
    auto t = typeName();
    if (!t) fail("expected storage declaration but found " + describe(peek()));
    next();
    d.type = *t;
    d.name = ident("storage name");
    expect(";");
    return d;
  }

  Function function() {
    Function f;
    f.loc = peek().loc;
    if (atWord("constructor")) {
      next();
      f.name = "constructor";
      f.visibility = ir::Visibility::Constructor;
    } else {
      expectWord("function");
      f.name = ident("function name");
    }
    expect("(");
    while (!at(")")) {
      if (!f.params.empty()) expect(",");
      Param p;
      p.loc = peek().loc;
      auto t = typeName();
      if (!t || *t == TypeName::Mapping) fail("expected parameter type but found " + describe(peek()));
      next();
      p.type = *t;
      p.name = ident("parameter name");
      f.params.push_back(std::move(p));
    }
    expect(")");
    if (f.visibility != ir::Visibility::Constructor) {
      if (atWord("public")) f.visibility = ir::Visibility::Public;
      else if (atWord("internal")) f.visibility = ir::Visibility::Internal;
      else fail("expected 'public' or 'internal' but found " + describe(peek()));
      next();
    }
    f.body = block();
    return f;
  }

  Block block() {
    expect("{");
    Block b;
    while (!at("}")) {
      if (peek().kind == Token::Kind::End) fail("unterminated block");
      b.push_back(statement());
    }
    expect("}");
    return b;
  }

  std::vector<ExprPtr> arguments() {
    expect("(");
    std::vector<ExprPtr> args;
    while (!at(")")) {
      if (!args.empty()) expect(",");
      args.push_back(expr());
    }
    expect(")");
    return args;
  }

  std::vector<ExprPtr> intrinsicArgs(std::size_t n, std::string_view name) {
    SourceLoc loc = peek().loc;
    auto args = arguments();
    if (args.size() != n)
      throw ir::ParseError(std::string(name) + " expects " + std::to_string(n) + " argument(s)", loc);
    return args;
  }

  Stmt statement() {
    Stmt s;
    s.loc = peek().loc;
    if (auto t = typeName(); t && peek(1).kind == Token::Kind::Ident) {
      if (*t == TypeName::Mapping) fail("mappings can only be declared as storage");
      next();
      s.kind = Stmt::Kind::Local;
      s.type = *t;
      s.name = ident("variable name");
      expect("=");
      s.value = expr();
      expect(";");
      return s;
    }
    if (atWord("require")) {
      next();
      s.kind = Stmt::Kind::Require;
      s.value = intrinsicArgs(1, "require")[0];
      expect(";");
      return s;
    }
    if (atWord("if")) return ifStatement();
    if (atWord("call")) {
      next();
      s.kind = Stmt::Kind::ExternalCall;
      s.target = primary();
      if (s.target->kind != Expr::Kind::Name && s.target->kind != Expr::Kind::Sender)
        throw ir::ParseError("call target must be a variable or msg.sender", s.target->loc);
      expect(".");
      s.method = ident("method name");
      s.args = arguments();
      expect(";");
      return s;
    }
    if (atWord("transfer")) {
      next();
      s.kind = Stmt::Kind::Transfer;
      s.args = intrinsicArgs(2, "transfer");
      expect(";");
      return s;
    }
    if (atWord("selfdestruct") || atWord("delegatecall")) {
      s.kind = atWord("selfdestruct") ? Stmt::Kind::SelfDestruct : Stmt::Kind::DelegateCall;
      std::string name = next().text;
      s.args = intrinsicArgs(1, name);
      expect(";");
      return s;
    }
    if (atWord("return")) {
      next();
      s.kind = Stmt::Kind::Return;
      if (!at(";")) s.value = expr();
      expect(";");
      return s;
    }
    s.name = ident("statement");
    if (at("[")) {
      next();
      s.kind = Stmt::Kind::IndexAssign;
      s.key = expr();
      expect("]");
      expect("=");
      s.value = expr();
    } else if (at("=")) {
      next();
      s.kind = Stmt::Kind::Assign;
      s.value = expr();
    } else if (at("(")) {
      s.kind = Stmt::Kind::Call;
      s.args = arguments();
    } else {
      fail("expected '=', '[' or '(' after '" + s.name + "'");
    }
    expect(";");
    return s;
  }

  Stmt ifStatement() {
    Stmt s;
    s.loc = peek().loc;
    expectWord("if");
    s.kind = Stmt::Kind::If;
    expect("(");
    s.value = expr();
    expect(")");
    s.body = block();
    if (atWord("else")) {
      next();
      s.hasElse = true;
      if (atWord("if")) s.orElse.push_back(ifStatement());
      else s.orElse = block();
    }
    return s;
  }

  ExprPtr binary(std::string op, ExprPtr l, ExprPtr r, SourceLoc loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->name = std::move(op);
    e->operands = {std::move(l), std::move(r)};
    e->loc = loc;
    return e;
  }

  // Precedence climbing, loosest first.
  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==") return 3;
    if (op == "<" || op == ">") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return 0;
  }

  ExprPtr expr(int minPrec = 1) {
    ExprPtr lhs = unary();
    while (peek().kind == Token::Kind::Punct) {
      int p = precedence(peek().text);
      if (p == 0 || p < minPrec) break;
      Token op = next();
      ExprPtr rhs = expr(p + 1);
      lhs = binary(op.text, std::move(lhs), std::move(rhs), op.loc);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (at("!")) {
      SourceLoc loc = next().loc;
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Not;
      e->operands = {unary()};
      e->loc = loc;
      return e;
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    auto e = std::make_shared<Expr>();
    e->loc = t.loc;
    if (t.kind == Token::Kind::Number) {
      e->kind = Expr::Kind::Number;
      e->value = t.value;
      e->hex = t.hex;
      next();
      return e;
    }
    if (at("(")) {
      next();
      ExprPtr inner = expr();
      expect(")");
      return inner;
    }
    if (atWord("true") || atWord("false")) {
      e->kind = Expr::Kind::Bool;
      e->value = atWord("true") ? 1 : 0;
      next();
      return e;
    }
    if (atWord("msg")) {
      next();
      expect(".");
      if (!atWord("sender")) fail("only msg.sender is supported");
      next();
      e->kind = Expr::Kind::Sender;
      return e;
    }
    e->name = ident("expression");
    if (at("[")) {
      next();
      e->kind = Expr::Kind::Index;
      e->operands = {expr()};
      expect("]");
    } else if (at("(")) {
      e->kind = Expr::Kind::Call;
      e->operands = arguments();
    } else {
      e->kind = Expr::Kind::Name;
    }
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view toString(TypeName t) {
  switch (t) {
  case TypeName::Uint: return "uint";
  case TypeName::Address: return "address";
  case TypeName::Bool: return "bool";
  case TypeName::Mapping: return "mapping";
  }
  return "?";
}

Contract parseSyntax(std::string_view text) { return Parser(tokenize(text)).contract(); }

}  // namespace symvalic::syntax
