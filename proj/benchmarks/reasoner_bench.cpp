#include <benchmark/benchmark.h>

#include "symvalic/deps.hpp"
#include "symvalic/reasoner.hpp"

namespace {

using namespace symvalic::sym;

const Expr x = Expr::symbol("x", Binding::Free);
const Expr y = Expr::symbol("y", Binding::Free);

Expr chain(int n) {
  Expr e = x;
  for (int i = 0; i < n; ++i) e = (i % 2 ? add(num(i), e) : mul(e, num(i + 1)));
  return e;
}

void BM_NormalizeChain(benchmark::State& state) {
  Expr e = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(normalize(e));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormalizeChain)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_NormalizeFold(benchmark::State& state) {
  Expr e = div(mul(num(200), num(90)), num(100));
  for (auto _ : state) benchmark::DoNotOptimize(normalize(e));
}
BENCHMARK(BM_NormalizeFold);

void BM_ImpliesConjunction(benchmark::State& state) {
  Expr strong = lt(x, num(3));
  for (int i = 0; i < state.range(0); ++i) strong = land(strong, gt(y, num(i)));
  strong = normalize(strong);
  Expr weak = lt(x, num(5));
  for (auto _ : state) benchmark::DoNotOptimize(implies(strong, weak));
}
BENCHMARK(BM_ImpliesConjunction)->Arg(1)->Arg(8)->Arg(32);

void BM_ValueForVarHashedSlot(benchmark::State& state) {
  Expr c = eq(Expr::sha3(Expr::concat(x, num(0))), Expr::sha3(Expr::concat(Expr::owner(), num(0))));
  for (auto _ : state) benchmark::DoNotOptimize(valueForVar(x, c));
}
BENCHMARK(BM_ValueForVarHashedSlot);

void BM_EvalHash(benchmark::State& state) {
  Expr e = Expr::sha3(Expr::concat(x, hex(1)));
  std::map<std::string, U256> a{{"x", 0x42}};
  for (auto _ : state) benchmark::DoNotOptimize(evalConcrete(e, a));
}
BENCHMARK(BM_EvalHash);

void BM_CombineDeps(benchmark::State& state) {
  using namespace symvalic::deps;
  DependencyMap a = DependencyMap::withSender(Expr::owner());
  DependencyMap b = DependencyMap::withSender(Expr::owner());
  a.local[DepKey::argument(0, "to")] = hex(0x42);
  a.local[DepKey::argument(1, "amount")] = num(200);
  b.local[DepKey::argument(1, "amount")] = num(200);
  b.local[DepKey::storageLoad(0, "curBalance")] = num(80);
  for (auto _ : state) benchmark::DoNotOptimize(combine(a, b));
}
BENCHMARK(BM_CombineDeps);

}  // namespace
