// Parallel kernels against their serial runs.

#include <benchmark/benchmark.h>

#include <random>

#include "liftsys/koszul.hpp"
#include "liftsys/lifting.hpp"

using namespace liftsys;
using Field = PrimeField;

namespace {

linalg::DenseMatrix<Field> random_dense(const Field& f, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(-1000, 1000);
  linalg::DenseMatrix<Field> m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = f.from_int(value(rng));
  return m;
}

lifting::LiftingSystem<Field> family(int horizon) {
  auto r = lifting::obstruction_family_ring(Field(), 2, 12);
  return lifting::obstruction_family_system(r, 2, lifting::PerturbationSchedule<Field>::zero(r, 2, 4, horizon));
}

lifting::LiftingSystem<Field> perturbed_family(int horizon) {
  auto r = lifting::obstruction_family_ring(Field(), 2, 12);
  const auto a = lifting::obstruction_family_ideal(r, 2);
  std::mt19937_64 rng(7);
  return lifting::obstruction_family_system(r, 2, lifting::random_certified_schedule(a, 2, 4, horizon, rng, 0.3, {1}));
}

void BM_Rref(benchmark::State& state) {
  const Field f;
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = random_dense(f, n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::rref(f, m).rank);
}

void BM_RrefSerial(benchmark::State& state) {
  const Field f;
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = random_dense(f, n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::rref_serial(f, m).rank);
}

template <bool Serial>
void BM_Minors(benchmark::State& state) {
  const auto sys = perturbed_family(6);
  const auto phi = sys.phi(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    std::optional<SerialScope> serial;
    if (Serial) serial.emplace();
    benchmark::DoNotOptimize(fitting::fitting_ideal(phi, 0).size());
  }
}

template <bool Serial>
void BM_FittingSequence(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::optional<SerialScope> serial;
    if (Serial) serial.emplace();
    benchmark::DoNotOptimize(lifting::fitting_sequence(family(n_max), n_max).size());
  }
}

template <bool Serial>
void BM_TorSystem(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::optional<SerialScope> serial;
    if (Serial) serial.emplace();
    benchmark::DoNotOptimize(koszul::tor_inverse_system(family(n_max), 1, n_max).stabilized);
  }
}

}  // namespace

BENCHMARK(BM_Rref)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RrefSerial)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Minors<false>)->Name("BM_Minors")->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Minors<true>)->Name("BM_MinorsSerial")->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FittingSequence<false>)->Name("BM_FittingSequence")->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FittingSequence<true>)->Name("BM_FittingSequenceSerial")->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TorSystem<false>)->Name("BM_TorSystem")->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TorSystem<true>)->Name("BM_TorSystemSerial")->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
