// Serial vs OpenMP kernels, and factored vs brute-force decomposition.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "rlab/decomposition.hpp"
#include "rlab/kernels.hpp"
#include "rlab/potential.hpp"

namespace {

rlab::PointSet random_points(std::size_t dim, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0), weight(0.1, 2.0);
  rlab::PointSet pts;
  pts.dim = dim;
  std::vector<double> y(dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& c : y) c = coord(rng);
    pts.push_back(y.data(), weight(rng));
  }
  return pts;
}

rlab::AtomicMeasure random_measure(std::size_t dim, std::size_t count, std::uint64_t seed) {
  const auto pts = random_points(dim, count, seed);
  std::vector<rlab::Atom> atoms;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    atoms.push_back({pts.weights[i], rlab::Vec(std::vector<double>(pts.point(i), pts.point(i) + dim))});
  }
  return rlab::AtomicMeasure(std::move(atoms));
}

const std::vector<double> kProbe{3.0, 0.25, -0.5};

void BM_MomentsSerial(benchmark::State& state) {
  const auto pts = random_points(3, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto s = rlab::kernels::accumulate_moments_serial(pts, kProbe, 0.5, rlab::kernels::Kernel::Power);
    benchmark::DoNotOptimize(s.s0);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MomentsParallel(benchmark::State& state) {
  const auto pts = random_points(3, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto s =
        rlab::kernels::accumulate_moments_parallel(pts, kProbe, 0.5, rlab::kernels::Kernel::Power);
    benchmark::DoNotOptimize(s.s0);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_QuadSerial(benchmark::State& state) {
  const auto pts = random_points(3, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    auto q = rlab::kernels::quadruple_sums_serial(pts, kProbe, 0.5);
    benchmark::DoNotOptimize(q.q1);
  }
}

void BM_QuadParallel(benchmark::State& state) {
  const auto pts = random_points(3, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    auto q = rlab::kernels::quadruple_sums_parallel(pts, kProbe, 0.5);
    benchmark::DoNotOptimize(q.q1);
  }
  state.counters["threads"] = omp_get_max_threads();
}

void BM_TermsFactored(benchmark::State& state) {
  const auto atoms = random_measure(3, static_cast<std::size_t>(state.range(0)), 3);
  const rlab::Params prm(3, 2.0, 2.0, 0.5);
  const rlab::Vec x{3.0, 0.25, -0.5};
  for (auto _ : state) {
    auto t = rlab::terms_factored(rlab::compute_moments(atoms, x, prm.alpha()), prm);
    benchmark::DoNotOptimize(t.I1);
  }
}

void BM_TermsBruteForce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto atoms = random_measure(3, n, 3);
  const rlab::Params prm(3, 2.0, 2.0, 0.5);
  const rlab::Vec x{3.0, 0.25, -0.5};
  for (auto _ : state) {
    auto t = rlab::terms_bruteforce(atoms, x, prm, n);
    benchmark::DoNotOptimize(t.I1);
  }
}

}  // namespace

BENCHMARK(BM_MomentsSerial)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_MomentsParallel)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_QuadSerial)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_QuadParallel)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_TermsFactored)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_TermsBruteForce)->Arg(8)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
