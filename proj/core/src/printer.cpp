#include <sstream>

#include "symvalic/syntax.hpp"

namespace symvalic::syntax {

namespace {

std::string literal(const Expr& e) { return e.hex ? sym::toHex(e.value) : sym::toDecimal(e.value); }

std::string expr(const Expr& e) {
  switch (e.kind) {
  case Expr::Kind::Number: return literal(e);
  case Expr::Kind::Bool: return e.value != 0 ? "true" : "false";
  case Expr::Kind::Name: return e.name;
  case Expr::Kind::Sender: return "msg.sender";
  case Expr::Kind::Index: return e.name + "[" + expr(*e.operands[0]) + "]";
  case Expr::Kind::Not: return "!(" + expr(*e.operands[0]) + ")";
  case Expr::Kind::Binary: return "(" + expr(*e.operands[0]) + " " + e.name + " " + expr(*e.operands[1]) + ")";
  case Expr::Kind::Call: {
    std::string out = e.name + "(";
    for (std::size_t i = 0; i < e.operands.size(); ++i) {
      if (i) out += ", ";
      out += expr(*e.operands[i]);
    }
    return out + ")";
  }
  }
  return {};
}

std::string args(const std::vector<ExprPtr>& xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += expr(*xs[i]);
  }
  return out + ")";
}

void block(std::ostream& os, const Block& b, int depth);

void stmt(std::ostream& os, const Stmt& s, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (s.kind) {
  case Stmt::Kind::Local: os << pad << toString(s.type) << ' ' << s.name << " = " << expr(*s.value) << ";\n"; return;
  case Stmt::Kind::Assign: os << pad << s.name << " = " << expr(*s.value) << ";\n"; return;
  case Stmt::Kind::IndexAssign:
    os << pad << s.name << '[' << expr(*s.key) << "] = " << expr(*s.value) << ";\n";
    return;
  case Stmt::Kind::Require: os << pad << "require(" << expr(*s.value) << ");\n"; return;
  case Stmt::Kind::If:
    os << pad << "if (" << expr(*s.value) << ") {\n";
    block(os, s.body, depth + 1);
    os << pad << '}';
    if (s.hasElse) {
      os << " else {\n";
      block(os, s.orElse, depth + 1);
      os << pad << '}';
    }
    os << '\n';
    return;
  case Stmt::Kind::ExternalCall:
    os << pad << "call " << expr(*s.target) << '.' << s.method << args(s.args) << ";\n";
    return;
  case Stmt::Kind::Transfer: os << pad << "transfer" << args(s.args) << ";\n"; return;
  case Stmt::Kind::SelfDestruct: os << pad << "selfdestruct" << args(s.args) << ";\n"; return;
  case Stmt::Kind::DelegateCall: os << pad << "delegatecall" << args(s.args) << ";\n"; return;
  case Stmt::Kind::Return:
    os << pad << "return";
    if (s.value) os << ' ' << expr(*s.value);
    os << ";\n";
    return;
  case Stmt::Kind::Call: os << pad << s.name << args(s.args) << ";\n"; return;
  }
}

void block(std::ostream& os, const Block& b, int depth) {
  for (const auto& s : b) stmt(os, s, depth);
}

}  // namespace

std::string print(const Contract& c) {
  std::ostringstream os;
  os << "contract " << c.name << " {\n";
  for (const auto& d : c.storage) os << "  " << toString(d.type) << ' ' << d.name << ";\n";
  for (const auto& f : c.functions) {
    os << '\n';
    if (f.visibility == ir::Visibility::Constructor) os << "  constructor(";
    else os << "  function " << f.name << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) os << ", ";
      os << toString(f.params[i].type) << ' ' << f.params[i].name;
    }
    os << ')';
    if (f.visibility == ir::Visibility::Public) os << " public";
    else if (f.visibility == ir::Visibility::Internal) os << " internal";
    os << " {\n";
    block(os, f.body, 2);
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace symvalic::syntax
