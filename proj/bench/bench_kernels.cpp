// Serial reference kernels against their OpenMP counterparts, plus the orbit scan.
#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qlstab/grid.hpp"
#include "qlstab/kernels.hpp"
#include "qlstab/stability.hpp"

namespace {

using namespace qlstab;

struct Data {
  GridPtr grid;
  std::vector<double> a, b;
  std::vector<std::complex<double>> z;
  std::vector<double> out;

  explicit Data(std::size_t n) : grid(Grid::line(15.0, n)), a(n), b(n), z(n), out(n) {
    const auto x = grid->nodes();
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::exp(-x[i] * x[i]);
      b[i] = std::cos(x[i]) / (1.0 + x[i] * x[i]);
      z[i] = {a[i], b[i]};
    }
  }
};

template <bool Serial>
void BM_weighted_dot(benchmark::State& st) {
  Data d(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    double v = Serial ? kernels::serial::weighted_dot(d.grid->weights(), d.a, d.b)
                      : kernels::weighted_dot(d.grid->weights(), d.a, d.b);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Serial>
void BM_weighted_pow(benchmark::State& st) {
  Data d(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    double v = Serial ? kernels::serial::weighted_pow(d.grid->weights(), d.a, 3.0)
                      : kernels::weighted_pow(d.grid->weights(), d.a, 3.0);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Serial>
void BM_edge_norm2(benchmark::State& st) {
  Data d(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    double v = Serial ? kernels::serial::edge_norm2(d.grid->faces(), d.grid->spacing(), d.z)
                      : kernels::edge_norm2(d.grid->faces(), d.grid->spacing(), d.z);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Serial>
void BM_flux_laplacian(benchmark::State& st) {
  Data d(static_cast<std::size_t>(st.range(0)));
  const std::size_t n = d.a.size();
  for (auto _ : st) {
    if (Serial)
      kernels::serial::flux_laplacian(d.grid->faces(), d.grid->weights(), d.grid->spacing(), 1, n - 2, d.a, d.out);
    else
      kernels::flux_laplacian(d.grid->faces(), d.grid->weights(), d.grid->spacing(), 1, n - 2, d.a, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
}

void BM_orbit_distance(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const GridPtr g = Grid::line(15.0, n);
  RealField u0 = sample(g, [](double x) { return 1.0 / std::cosh(x); });
  pin_boundary(u0);
  const RealField s = shift(u0, 1.3);
  ComplexField z(g);
  for (std::size_t i = 0; i < n; ++i) z.values[i] = std::polar(s[i], 0.7);
  const OrbitMetric metric(g, DistanceNorm::H1);
  for (auto _ : st) benchmark::DoNotOptimize(orbit_distance(z, u0, metric).d);
}

}  // namespace

BENCHMARK(BM_weighted_dot<true>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_weighted_dot<false>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_weighted_pow<true>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_weighted_pow<false>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_edge_norm2<true>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_edge_norm2<false>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_flux_laplacian<true>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_flux_laplacian<false>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_orbit_distance)->Arg(1501)->Arg(4001)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
