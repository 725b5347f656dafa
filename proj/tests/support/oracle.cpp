#include "oracle.hpp"

#include <algorithm>
#include <sstream>

#include "symvalic/analysis.hpp"

namespace symvalic::testing {

namespace {

using P = Program;

int upTo(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n)(rng); }
bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

P::ValuePtr number(U256 v) {
  auto n = std::make_shared<P::Value>();
  n->number = v;
  return n;
}

P::ValuePtr var(const std::string& name) {
  auto n = std::make_shared<P::Value>();
  n->kind = P::Value::Kind::Var;
  n->name = name;
  return n;
}

P::ValuePtr randomValue(Rng& rng, const std::vector<std::string>& vars, int depth) {
  if (depth <= 0 || chance(rng, 0.35)) {
    if (chance(rng, 0.6)) return var(vars[static_cast<std::size_t>(upTo(rng, static_cast<int>(vars.size()) - 1))]);
    if (chance(rng, 0.1)) return number(sym::kU256Max);
    return number(upTo(rng, 10));
  }
  auto n = std::make_shared<P::Value>();
  n->kind = P::Value::Kind::Binary;
  n->op = "+-*/%"[upTo(rng, 4)];
  n->lhs = randomValue(rng, vars, depth - 1);
  n->rhs = randomValue(rng, vars, depth - 1);
  return n;
}

P::CondPtr randomCond(Rng& rng, const std::vector<std::string>& vars, const OracleSetup& setup, int depth) {
  auto c = std::make_shared<P::Cond>();
  if (depth > 0 && chance(rng, 0.2)) {
    int k = upTo(rng, 2);
    c->kind = k == 0 ? P::Cond::Kind::Not : k == 1 ? P::Cond::Kind::And : P::Cond::Kind::Or;
    c->a = randomCond(rng, vars, setup, depth - 1);
    if (k != 0) c->b = randomCond(rng, vars, setup, depth - 1);
    return c;
  }
  if (chance(rng, 0.2)) {
    c->kind = P::Cond::Kind::SenderIs;
    c->address = setup.senders[static_cast<std::size_t>(upTo(rng, static_cast<int>(setup.senders.size()) - 1))];
    return c;
  }
  static const char* ops[] = {"<", ">", "=="};
  c->op = ops[upTo(rng, 2)];
  c->lhs = randomValue(rng, vars, 1);
  c->rhs = chance(rng, 0.6) ? number(upTo(rng, 10)) : randomValue(rng, vars, 1);
  return c;
}

std::vector<P::Stmt> randomBlock(Rng& rng, const std::vector<std::string>& vars, const std::vector<std::string>& locals,
                                 const OracleSetup& setup, int depth) {
  std::vector<P::Stmt> out;
  int n = 1 + upTo(rng, 2);
  for (int i = 0; i < n; ++i) {
    P::Stmt s;
    int pick = upTo(rng, 9);
    if (pick < 5 || depth <= 0) {
      s.var = locals[static_cast<std::size_t>(upTo(rng, static_cast<int>(locals.size()) - 1))];
      s.value = randomValue(rng, vars, 2);
    } else if (pick < 8) {
      s.kind = P::Stmt::Kind::If;
      s.cond = randomCond(rng, vars, setup, 1);
      s.then = randomBlock(rng, vars, locals, setup, depth - 1);
      if (chance(rng, 0.5)) s.otherwise = randomBlock(rng, vars, locals, setup, depth - 1);
    } else {
      s.kind = P::Stmt::Kind::Require;
      s.cond = randomCond(rng, vars, setup, 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void render(std::ostream& os, const P::Value& v) {
  switch (v.kind) {
  case P::Value::Kind::Number: os << sym::toDecimal(v.number); return;
  case P::Value::Kind::Var: os << v.name; return;
  case P::Value::Kind::Binary:
    os << '(';
    render(os, *v.lhs);
    os << ' ' << v.op << ' ';
    render(os, *v.rhs);
    os << ')';
    return;
  }
}

void render(std::ostream& os, const P::Cond& c) {
  switch (c.kind) {
  case P::Cond::Kind::Compare:
    os << '(';
    render(os, *c.lhs);
    os << ' ' << c.op << ' ';
    render(os, *c.rhs);
    os << ')';
    return;
  case P::Cond::Kind::SenderIs: os << "(msg.sender == " << sym::toHex(c.address) << ')'; return;
  case P::Cond::Kind::Not:
    os << '!';
    render(os, *c.a);
    return;
  case P::Cond::Kind::And:
  case P::Cond::Kind::Or:
    os << '(';
    render(os, *c.a);
    os << (c.kind == P::Cond::Kind::And ? " && " : " || ");
    render(os, *c.b);
    os << ')';
    return;
  }
}

void render(std::ostream& os, const std::vector<P::Stmt>& block, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& s : block) {
    switch (s.kind) {
    case P::Stmt::Kind::Assign:
      os << pad << s.var << " = ";
      render(os, *s.value);
      os << ";\n";
      break;
    case P::Stmt::Kind::Require:
      os << pad << "require(";
      render(os, *s.cond);
      os << ");\n";
      break;
    case P::Stmt::Kind::If:
      os << pad << "if (";
      render(os, *s.cond);
      os << ") {\n";
      render(os, s.then, indent + 2);
      os << pad << '}';
      if (!s.otherwise.empty()) {
        os << " else {\n";
        render(os, s.otherwise, indent + 2);
        os << pad << '}';
      }
      os << '\n';
      break;
    }
  }
}

/// Straightforward concrete interpreter with EVM-style 256-bit arithmetic.
class Machine {
public:
  Machine(U256 sender, ValueSets& seen) : sender_(sender), seen_(seen) {}

  void set(const std::string& name, U256 v) {
    env_[name] = v;
    seen_[name].insert(v);
  }

  U256 eval(const P::Value& v) const {
    switch (v.kind) {
    case P::Value::Kind::Number: return v.number;
    case P::Value::Kind::Var: return env_.at(v.name);
    case P::Value::Kind::Binary: break;
    }
    U256 a = eval(*v.lhs);
    U256 b = eval(*v.rhs);
    switch (v.op) {
    case '+': return a + b;
    case '-': return a - b;
    case '*': return a * b;
    case '/': return b == 0 ? U256(0) : U256(a / b);
    default: return b == 0 ? U256(0) : U256(a % b);
    }
  }

  bool test(const P::Cond& c) const {
    switch (c.kind) {
    case P::Cond::Kind::Compare: {
      U256 a = eval(*c.lhs);
      U256 b = eval(*c.rhs);
      return c.op == "<" ? a < b : c.op == ">" ? a > b : a == b;
    }
    case P::Cond::Kind::SenderIs: return sender_ == c.address;
    case P::Cond::Kind::Not: return !test(*c.a);
    case P::Cond::Kind::And: return test(*c.a) && test(*c.b);
    case P::Cond::Kind::Or: return test(*c.a) || test(*c.b);
    }
    return false;
  }

  /// False once a require fails.
  bool run(const std::vector<P::Stmt>& block) {
    for (const auto& s : block) {
      switch (s.kind) {
      case P::Stmt::Kind::Assign: set(s.var, eval(*s.value)); break;
      case P::Stmt::Kind::Require:
        if (!test(*s.cond)) return false;
        break;
      case P::Stmt::Kind::If:
        if (!run(test(*s.cond) ? s.then : s.otherwise)) return false;
        break;
      }
    }
    return true;
  }

private:
  U256 sender_;
  std::map<std::string, U256> env_;
  ValueSets& seen_;
};

}  // namespace

std::string Program::source() const {
  std::ostringstream os;
  os << "contract " << name << " {\n  function f(";
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ", " : "") << "uint " << params[i];
  os << ") public {\n";
  for (const auto& [n, init] : locals) {
    os << "    uint " << n << " = ";
    render(os, *init);
    os << ";\n";
  }
  render(os, body, 4);
  os << "    return ";
  render(os, *result);
  os << ";\n  }\n}\n";
  return os.str();
}

Program randomProgram(Rng& rng, const std::string& name, const OracleSetup& setup) {
  Program p;
  p.name = name;
  p.params = {"a"};
  if (chance(rng, 0.6)) p.params.push_back("b");
  std::vector<std::string> vars = p.params;
  std::vector<std::string> locals;
  int n = 1 + upTo(rng, 2);
  for (int i = 0; i < n; ++i) {
    std::string v = "v" + std::to_string(i);
    p.locals.emplace_back(v, randomValue(rng, vars, 2));
    vars.push_back(v);
    locals.push_back(v);
  }
  p.body = randomBlock(rng, vars, locals, setup, 2);
  p.result = randomValue(rng, vars, 2);
  return p;
}

ValueSets interpret(const Program& p, const OracleSetup& setup) {
  ValueSets seen;
  std::vector<std::size_t> idx(p.params.size(), 0);
  while (true) {
    for (const auto& sender : setup.senders) {
      Machine m(sender, seen);
      for (std::size_t i = 0; i < p.params.size(); ++i) m.set(p.params[i], setup.seeds[idx[i]]);
      for (const auto& [n, init] : p.locals) m.set(n, m.eval(*init));
      if (m.run(p.body)) seen["return"].insert(m.eval(*p.result));
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == setup.seeds.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return seen;
}

ValueSets engineValues(const Program& p, const OracleSetup& setup, std::vector<std::string>* symbolic) {
  flow::AnalysisConfig cfg;
  cfg.arithmeticDepthLimit = 64;
  flow::Scenario sc;
  std::vector<Expr> seeds;
  for (const auto& s : setup.seeds) seeds.push_back(Expr::constant(s));
  sc.numericSeeds = seeds;
  for (const auto& s : setup.senders) sc.senders.push_back(Expr::constant(s, sym::Radix::Hex));
  auto r = flow::analyze(ir::parse(p.source()), cfg, sc);

  std::set<std::string> names(p.params.begin(), p.params.end());
  for (const auto& [n, init] : p.locals) names.insert(n);
  ValueSets out;
  auto record = [&](const std::string& name, const Expr& value) {
    if (value.isConst()) out[name].insert(value.value());
    else if (symbolic) symbolic->push_back(name + " = " + value.str());
  };
  for (const auto& inf : r.inferences) {
    if (inf.function != "f") continue;
    std::string base = inf.var.substr(0, inf.var.find('.'));
    if (names.contains(base)) record(base, inf.value);
  }
  for (const auto& ret : flow::returnValues(r, "f")) record("return", ret.value);
  return out;
}

OracleOutcome compareWithOracle(std::uint64_t seed, int fixtures) {
  OracleOutcome o;
  Rng rng(seed);
  static const std::vector<U256> pool = {0, 1, 2, 3, 4, 5, 7, 10, 255, sym::kU256Max};
  for (int i = 0; i < fixtures; ++i) {
    OracleSetup setup;
    std::vector<U256> shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.resize(static_cast<std::size_t>(2 + upTo(rng, 2)));
    setup.seeds = shuffled;
    setup.senders = {0x5e01, 0x5e02};
    Program p = randomProgram(rng, "Gen" + std::to_string(i), setup);
    ++o.fixtures;
    std::vector<std::string> symbolic;
    auto want = interpret(p, setup);
    auto got = engineValues(p, setup, &symbolic);
    if (want != got || !symbolic.empty()) {
      if (o.mismatches++ == 0) {
        std::ostringstream os;
        os << p.source() << "seeds:";
        for (const auto& s : setup.seeds) os << ' ' << sym::toDecimal(s);
        os << '\n';
        for (const auto& key : {std::string("return"), std::string("v0"), std::string("v1"), std::string("v2")}) {
          os << key << " oracle {";
          if (want.contains(key))
            for (const auto& v : want.at(key)) os << ' ' << sym::toDecimal(v);
          os << " } engine {";
          if (got.contains(key))
            for (const auto& v : got.at(key)) os << ' ' << sym::toDecimal(v);
          os << " }\n";
        }
        for (const auto& s : symbolic) os << "symbolic: " << s << '\n';
        o.firstMismatch = os.str();
      }
    }
  }
  return o;
}

}  // namespace symvalic::testing
