#include <algorithm>
#include <random>

#include "symvalic/analysis.hpp"

namespace symvalic::flow {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Up to `n` elements of `pool`, drawn without replacement.
std::vector<sym::U256> draw(std::vector<sym::U256> pool, std::size_t n, std::mt19937_64& rng) {
  std::size_t k = std::min(n, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

void pushUnique(std::vector<ValueFact>& out, ValueFact f) {
  if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
}

}  // namespace

SeedSet seedInputs(const ir::Function& f, const ir::Contract& c, std::uint64_t seed) {
  auto constants = ir::harvestConstants(c);
  std::mt19937_64 rng(seed ^ fnv1a(f.name));

  std::vector<sym::U256> small;
  std::vector<sym::U256> rest;
  for (const auto& k : constants.numeric) {
    if (k <= 1 || k == sym::kU256Max) continue;
    (k < 256 ? small : rest).push_back(k);
  }
  std::vector<sym::U256> numeric = {0, 1};
  auto chosenSmall = draw(small, 3, rng);
  numeric.insert(numeric.end(), chosenSmall.begin(), chosenSmall.end());
  numeric.push_back(sym::kU256Max);
  // The second draw is over every program constant not already chosen.
  std::vector<sym::U256> remaining;
  for (const auto& k : small)
    if (std::find(chosenSmall.begin(), chosenSmall.end(), k) == chosenSmall.end()) remaining.push_back(k);
  remaining.insert(remaining.end(), rest.begin(), rest.end());
  auto chosenRest = draw(remaining, 3, rng);
  numeric.insert(numeric.end(), chosenRest.begin(), chosenRest.end());

  const DependencyMap none;
  SeedSet out;
  for (const auto& p : f.params) {
    std::vector<ValueFact> values;
    switch (p.type) {
    case ir::ParamType::Uint256:
      for (const auto& v : numeric) pushUnique(values, {Expr::constant(v), none});
      break;
    case ir::ParamType::Bool:
      values = {{Expr::constant(0), none}, {Expr::constant(1), none}};
      break;
    case ir::ParamType::Address:
      for (const auto& a : constants.addressLike) pushUnique(values, {sym::hex(a), none});
      values.push_back({Expr::ownerUniqueValue(), DependencyMap::withSender(Expr::owner())});
      values.push_back({Expr::userUniqueValue(), DependencyMap::withSender(Expr::unprivilegedUser())});
      break;
    }
    out.params.push_back(std::move(values));
  }
  for (const auto& a : constants.addressLike) out.sender.push_back({sym::hex(a), none});
  out.sender.push_back({Expr::owner(), none});
  out.sender.push_back({Expr::unprivilegedUser(), none});
  return out;
}

}  // namespace symvalic::flow
