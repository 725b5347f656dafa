#include "symvalic/reasoner.hpp"

#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace symvalic::sym {

namespace {

void appendWord(std::vector<std::uint8_t>& out, const U256& v) {
  std::uint8_t word[32];
  U256 x = v;
  for (int i = 31; i >= 0; --i) {
    word[i] = static_cast<std::uint8_t>(x & 0xff);
    x >>= 8;
  }
  out.insert(out.end(), word, word + 32);
}

U256 fromBytes(std::span<const std::uint8_t> bytes) {
  U256 v = 0;
  for (auto b : bytes) v = (v << 8) | b;
  return v;
}

class Evaluator {
public:
  Evaluator(const std::map<std::string, U256>& assignment, const HashOracle& hash)
      : assignment_(assignment), hash_(hash) {}

  U256 value(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Const: return e.value();
    case ExprKind::SymVar: {
      auto it = assignment_.find(e.name());
      if (it == assignment_.end()) throw std::out_of_range("unassigned symbol " + e.name());
      return it->second;
    }
    case ExprKind::Not: return value(e.lhs()) == 0 ? 1 : 0;
    case ExprKind::Sha3: {
      std::vector<std::uint8_t> bytes;
      image(e.lhs(), bytes);
      return hash_(bytes);
    }
    case ExprKind::Concat: {
      std::vector<std::uint8_t> bytes;
      image(e, bytes);
      std::size_t n = std::min<std::size_t>(bytes.size(), 32);
      return fromBytes(std::span(bytes).last(n));
    }
    case ExprKind::BinOp: break;
    }
    U256 a = value(e.lhs());
    U256 b = value(e.rhs());
    switch (e.op()) {
    case BinOpKind::Add: return a + b;
    case BinOpKind::Sub: return a - b;
    case BinOpKind::Mul: return a * b;
    case BinOpKind::Div: return b == 0 ? U256(0) : U256(a / b);
    case BinOpKind::Mod: return b == 0 ? U256(0) : U256(a % b);
    case BinOpKind::Lt: return a < b ? 1 : 0;
    case BinOpKind::Gt: return a > b ? 1 : 0;
    case BinOpKind::Eq: return a == b ? 1 : 0;
    case BinOpKind::And: return (a != 0 && b != 0) ? 1 : 0;
    case BinOpKind::Or: return (a != 0 || b != 0) ? 1 : 0;
    }
    return 0;
  }

private:
  void image(const Expr& e, std::vector<std::uint8_t>& out) {
    if (e.kind() == ExprKind::Concat) {
      image(e.lhs(), out);
      image(e.rhs(), out);
      return;
    }
    appendWord(out, value(e));
  }

  const std::map<std::string, U256>& assignment_;
  const HashOracle& hash_;
};

}  // namespace

U256 sha3Oracle(std::span<const std::uint8_t> bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha3_256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha3-256 digest failed");
  return fromBytes(std::span<const std::uint8_t>(digest, len));
}

U256 evalConcrete(const Expr& e, const std::map<std::string, U256>& assignment, const HashOracle& hash) {
  return Evaluator(assignment, hash).value(e);
}

}  // namespace symvalic::sym
