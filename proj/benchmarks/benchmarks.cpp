#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "liepulse/decomposition.hpp"
#include "liepulse/linalg.hpp"
#include "liepulse/pulses.hpp"
#include "liepulse/simulate.hpp"
#include "liepulse/targets.hpp"

using namespace liepulse;

namespace {

// Unitary from the QR of a random complex matrix via Gram-Schmidt.
ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = Complex(g(rng), g(rng));
  return gram_schmidt(m);
}

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  const auto u = random_unitary(n, seed);
  return u + u.adjoint();
}

void BM_Decompose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = random_unitary(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(u, DecompositionMode::exact));
}
BENCHMARK(BM_Decompose)->Arg(4)->Arg(8)->Arg(16);

void BM_Jacobi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_hermitian(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigensystem(a));
}
BENCHMARK(BM_Jacobi)->Arg(4)->Arg(8)->Arg(16);

void BM_PropagateRwa(benchmark::State& state) {
  const auto sys = morse_system(4, 0.1);
  const auto d = target_inversion(sys);
  const auto sch = synthesize(d, sys, PulseShape::square_erf(30.0), 1200.0);
  const auto s0 = boltzmann_ensemble(sys);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_rwa(sch, sys, s0));
}
BENCHMARK(BM_PropagateRwa)->Unit(benchmark::kMillisecond);

void BM_PropagateLabframe(benchmark::State& state) {
  const auto sys = morse_system(4, 0.1);
  const auto sch = synthesize(target_population_transfer(sys), sys, PulseShape::square_erf(30.0), 600.0);
  const auto s0 = EnsembleState::ground(4);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_labframe(sch, sys, s0));
}
BENCHMARK(BM_PropagateLabframe)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
