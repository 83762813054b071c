// bench_kernels — wall-time comparison of the OpenMP kernels against their
// serial reference implementations on assembly-sized and scan-sized arrays.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spherecon/auxiliary_potential.hpp"
#include "spherecon/kernels.hpp"
#include "spherecon/penalized_solver.hpp"

using namespace spherecon;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled (serial build)\n");
#endif

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(0.0, 1.0);

  const std::size_t n = 1 << 22;
  std::vector<double> a(n), b(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = dist(rng);
    b[i] = dist(rng);
    w[i] = dist(rng);
  }

  double guard = 0.0;
  const double t_dot_omp = time_best_of(5, [&] { guard += kernels::weighted_dot(a, b, w); });
  const double t_dot_ser =
      time_best_of(5, [&] { guard += kernels::weighted_dot_serial(a, b, w); });
  std::printf("weighted_dot      n=%zu   omp %8.2f ms   serial %8.2f ms   speedup %.2fx\n", n,
              t_dot_omp, t_dot_ser, t_dot_ser / t_dot_omp);

  // Energy/gradient assembly on a production-size penalized problem.
  auto V = RadialPotential::shifted_polynomial(0.1, 1.0, 2.0);
  auto K = RadialPotential::constant(1.0);
  auto pen = PenalizedNonlinearity::make(1.2, 2.8, Nonlinearity::pure_power(3.0), V, K,
                                         PenalizationParams::defaults(3), 0.05, 3);
  RadialGrid grid{0.1, 9.0, 1 << 16, GridSpacing::Uniform};
  auto problem = PenalizedProblem::make(3, 0.05, pen, grid);
  std::vector<double> u(problem.mesh.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double d = problem.mesh.r[j] - 2.0;
    u[j] = std::exp(-d * d / (2.0 * 0.05 * 0.05));
  }
  u.front() = u.back() = 0.0;

  const double t_energy = time_best_of(5, [&] { guard += assemble_energy(problem, u); });
  const double t_grad = time_best_of(5, [&] {
    auto g = assemble_gradient(problem, u);
    guard += g[1];
  });
  std::printf("assemble_energy   n=%d   %8.2f ms\n", grid.n, t_energy);
  std::printf("assemble_gradient n=%d   %8.2f ms\n", grid.n, t_grad);

  // Auxiliary-potential scan (closed form) at high resolution.
  auto aux = AuxPotential::closed_form(3, 2, 3.0, V, K);
  const double t_scan = time_best_of(3, [&] {
    auto mn = find_min(aux, AnnulusLambda::make(1.2, 2.8), 1 << 20);
    guard += mn.r_star;
  });
  std::printf("aux find_min scan (2^20 points)   %8.2f ms\n", t_scan);

  std::printf("checksum %g\n", guard);
  return 0;
}
