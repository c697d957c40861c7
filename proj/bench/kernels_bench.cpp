// Serial reference vs OpenMP kernels on the workloads the library runs.
#include <benchmark/benchmark.h>

#include "ncr/kernels.hpp"

namespace {

ncr::LinearPencil random_pencil(int g, ncr::Index d, std::uint64_t seed) {
  ncr::LinearPencil l = ncr::LinearPencil::zeros(g, d, d, ncr::Field::Real);
  for (int j = 0; j <= g; ++j) {
    ncr::MatrixPoint p = ncr::random_general_point(1, d, ncr::Field::Real, ncr::mix_seed(seed, j));
    l[j] = p.mats[0];
  }
  return l;
}

std::vector<ncr::MatrixPoint> points(int g, ncr::Index n, int count) {
  std::vector<ncr::MatrixPoint> out;
  for (int i = 0; i < count; ++i) out.push_back(ncr::random_selfadjoint_point(g, n, ncr::Field::Real, ncr::mix_seed(5, i)));
  return out;
}

void BM_SigmasSerial(benchmark::State& st) {
  const auto l = random_pencil(3, 5, 1);
  const auto pts = points(3, st.range(0), 200);
  for (auto _ : st) benchmark::DoNotOptimize(ncr::kernels::pencil_sigmas_serial(l, pts));
}
void BM_SigmasParallel(benchmark::State& st) {
  const auto l = random_pencil(3, 5, 1);
  const auto pts = points(3, st.range(0), 200);
  for (auto _ : st) benchmark::DoNotOptimize(ncr::kernels::pencil_sigmas_parallel(l, pts));
}
BENCHMARK(BM_SigmasSerial)->Arg(4)->Arg(12);
BENCHMARK(BM_SigmasParallel)->Arg(4)->Arg(12);

void BM_GramSerial(benchmark::State& st) {
  const ncr::RMat p = ncr::RMat::Random(st.range(0) * st.range(0), 300);
  for (auto _ : st) benchmark::DoNotOptimize(ncr::kernels::gram_serial(p));
}
void BM_GramParallel(benchmark::State& st) {
  const ncr::RMat p = ncr::RMat::Random(st.range(0) * st.range(0), 300);
  for (auto _ : st) benchmark::DoNotOptimize(ncr::kernels::gram_parallel(p));
}
BENCHMARK(BM_GramSerial)->Arg(20)->Arg(40);
BENCHMARK(BM_GramParallel)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
