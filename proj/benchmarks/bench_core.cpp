#include <benchmark/benchmark.h>

#include "excat/chaincx.hpp"
#include "excat/cotorsion.hpp"

#include <random>

using namespace excat;

namespace {

AlgebraPtr dual_numbers() {
  std::vector<std::uint32_t> sc(8, 0);
  sc[(0 * 2 + 0) * 2 + 0] = 1;
  sc[(0 * 2 + 1) * 2 + 1] = 1;
  sc[(1 * 2 + 0) * 2 + 1] = 1;
  return std::make_shared<const Algebra>(FieldPrime(2), 2, sc,
                                         std::vector<std::uint32_t>{1, 0});
}

Matrix random_matrix(std::uint32_t p, std::size_t n, std::mt19937_64& rng) {
  Matrix m(p, n, n);
  for (auto& e : m.a) e = std::uint32_t(rng() % p);
  return m;
}

const AlgebraPtr kAlg = dual_numbers();

Module simple() {
  return Module(kAlg, 1, {Matrix::identity(2, 1), Matrix(2, 1, 1)});
}

MorphismSet fixture_set() {
  Module k = simple(), a = regular_module(kAlg);
  ModuleMorphism soc(k, a, Matrix(2, 2, 1, {0, 1}));
  ModuleMorphism free_unit = zero_morphism(zero_module(kAlg), a);
  return make_morphism_set("bench", {soc, free_unit}, ExactStructure::abelian());
}

}  // namespace

static void BM_Rref(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const std::size_t n = std::size_t(state.range(0));
  Matrix m = random_matrix(65521, n, rng);
  for (auto _ : state) {
    auto r = rref(m);
    benchmark::DoNotOptimize(r.pivots);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rref)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_HomBasis(benchmark::State& state) {
  const std::size_t copies = std::size_t(state.range(0));
  Module a = regular_module(kAlg);
  Module m = direct_sum(std::vector<Module>(copies, a), kAlg).object;
  for (auto _ : state) {
    auto basis = hom_basis(m, m);
    benchmark::DoNotOptimize(basis.size());
  }
}
BENCHMARK(BM_HomBasis)->DenseRange(1, 5);

static void BM_Ext1(benchmark::State& state) {
  Module k = simple();
  for (auto _ : state) {
    auto e = ext1(k, k, ExactStructure::abelian());
    benchmark::DoNotOptimize(e.dim);
  }
}
BENCHMARK(BM_Ext1);

static void BM_Factorize(benchmark::State& state) {
  MorphismSet I = fixture_set();
  const std::size_t copies = std::size_t(state.range(0));
  Module k = simple();
  Module m = direct_sum(std::vector<Module>(copies, k), kAlg).object;
  ModuleMorphism f = zero_morphism(zero_module(kAlg), m);
  for (auto _ : state) {
    auto fact = factorize(f, I, 8);
    benchmark::DoNotOptimize(fact.completed);
  }
}
BENCHMARK(BM_Factorize)->DenseRange(1, 4);

static void BM_BridgeEncode(benchmark::State& state) {
  ComplexBridge br = make_bridge(kAlg, -2, 2);
  Module a = regular_module(kAlg);
  Complex d = pad_complex(disk(a, 0, -1, 1), -2, 2);
  for (auto _ : state) {
    Module enc = br.encode(d);
    benchmark::DoNotOptimize(enc.dim);
  }
}
BENCHMARK(BM_BridgeEncode);

BENCHMARK_MAIN();
