#include <benchmark/benchmark.h>

#include <vector>

#include "sfwg/assembly.hpp"
#include "sfwg/kernels.hpp"
#include "sfwg/mesh.hpp"

namespace {

using sfwg::Execution;

// args: mesh size n, k, j
void local_matrices(benchmark::State& state, Execution exec) {
  const sfwg::Mesh mesh = sfwg::build_uniform_triangle_mesh(static_cast<int>(state.range(0)));
  const int k = static_cast<int>(state.range(1));
  const int j = static_cast<int>(state.range(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sfwg::kernels::local_stiffness_matrices(mesh, k, j, exec));
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_elements());
}

void assembly(benchmark::State& state, Execution exec) {
  const sfwg::Mesh mesh = sfwg::build_uniform_triangle_mesh(static_cast<int>(state.range(0)));
  const int k = static_cast<int>(state.range(1));
  const int j = static_cast<int>(state.range(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sfwg::assemble_stiffness(mesh, k, j, exec));
  }
}

struct System {
  sfwg::SparseSpd a;
  std::vector<double> x, y;
};

System make_system(int n) {
  System s;
  s.a = sfwg::assemble_stiffness(sfwg::build_uniform_triangle_mesh(n), 1, 2);
  s.x.assign(s.a.size(), 1.0);
  for (std::size_t i = 0; i < s.x.size(); ++i) s.x[i] += 1e-3 * static_cast<double>(i % 17);
  s.y.assign(s.a.size(), 0.0);
  return s;
}

void spmv_reference(benchmark::State& state) {
  System s = make_system(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    sfwg::kernels::reference::spmv(s.a, s.x, s.y);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.a.nonzeros()));
}

void spmv_omp(benchmark::State& state) {
  System s = make_system(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    sfwg::kernels::omp::spmv(s.a, s.x, s.y);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.a.nonzeros()));
}

void dot_reference(benchmark::State& state) {
  const std::vector<double> a(state.range(0), 0.5), b(state.range(0), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(sfwg::kernels::reference::dot(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void dot_omp(benchmark::State& state) {
  const std::vector<double> a(state.range(0), 0.5), b(state.range(0), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(sfwg::kernels::omp::dot(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(local_matrices, reference, Execution::serial)
    ->Args({32, 1, 2})
    ->Args({16, 3, 5})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(local_matrices, omp, Execution::parallel)
    ->Args({32, 1, 2})
    ->Args({16, 3, 5})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(assembly, reference, Execution::serial)->Args({64, 1, 2})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(assembly, omp, Execution::parallel)->Args({64, 1, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(spmv_reference)->Arg(64)->Arg(128);
BENCHMARK(spmv_omp)->Arg(64)->Arg(128);
BENCHMARK(dot_reference)->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK(dot_omp)->Arg(1 << 14)->Arg(1 << 20);

BENCHMARK_MAIN();
