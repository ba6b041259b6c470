// Serial reference vs OpenMP kernels, and the full operator application they feed.
// Usage: bench_kernels [reps]   (thread count from OMP_NUM_THREADS)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include <omp.h>

#include "hk/field.hpp"
#include "hk/fracops.hpp"
#include "hk/kernels.hpp"

using namespace hk;

namespace {

double median_ms(int reps, const std::function<void()>& fn) {
  std::vector<double> t;
  fn();
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
  return t[t.size() / 2];
}

void row(const char* name, std::size_t n, double serial, double omp) {
  std::printf("%-22s %5zu %12.3f %12.3f %8.2f\n", name, n, serial, omp, serial / omp);
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
  std::printf("threads %d, median of %d runs (ms)\n", omp_get_max_threads(), reps);
  std::printf("%-22s %5s %12s %12s %8s\n", "kernel", "n", "serial", "openmp", "speedup");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N(0.0, 1.0);

  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    const auto g = Grid1D::uniform(1.0, n);
    const auto ops = StaggeredOperators1D::build(g, PsiMap::identity(), FracParams{0.75, 0.5, 2.0});
    const AxisOperator A(ops.D_left);
    const std::size_t nx = g.size(), ny = g.size();
    std::vector<double> in(nx * ny), w(nx * ny), out((nx - 1) * ny), outy(nx * (ny - 1)), flux(nx * ny);
    for (double& x : in) x = N(rng);
    for (double& x : w) x = std::abs(N(rng));

    row("apply_x", n, median_ms(reps, [&] { kernels::serial::apply_x(A.matrix, A.support, in, out, ny); }),
        median_ms(reps, [&] { kernels::apply_x(A.matrix, A.support, in, out, ny); }));
    row("apply_y", n, median_ms(reps, [&] { kernels::serial::apply_y(A.matrix, A.support, in, outy, nx); }),
        median_ms(reps, [&] { kernels::apply_y(A.matrix, A.support, in, outy, nx); }));
    volatile double sink = 0.0;
    row("weighted_abs_pow_sum", n,
        median_ms(reps, [&] { sink = kernels::serial::weighted_abs_pow_sum(w, in, 3.0, nx, ny); }),
        median_ms(reps, [&] { sink = kernels::weighted_abs_pow_sum(w, in, 3.0, nx, ny); }));
    row("weighted_flux", n, median_ms(reps, [&] { kernels::serial::weighted_flux(w, in, 3.0, flux); }),
        median_ms(reps, [&] { kernels::weighted_flux(w, in, 3.0, flux); }));
    (void)sink;
  }

  std::printf("\n%-22s %5s %12s\n", "operator (openmp)", "n", "ms");
  for (std::size_t n : {64u, 128u, 256u}) {
    const auto d = Domain::square(1.0, n);
    const GradientOperator op(d, FracParams{0.75, 0.5, 3.0}, PsiMap::identity());
    auto u = GridField::sample(d, [](double x, double y) { return x * (1 - x) * y * (1 - y); });
    std::printf("%-22s %5zu %12.3f\n", "flux_divergence r=3", n,
                median_ms(reps, [&] { op.flux_divergence(std::span<const double>(u.values), 3.0); }));
  }
  return 0;
}
