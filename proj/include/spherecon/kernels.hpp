// kernels.hpp — data-parallel primitives used by the assembly and scan loops.
//
// All reductions use a fixed block decomposition (kBlock entries per block,
// partial sums combined in block order), so the result is bitwise identical
// for any thread count. Serial twins (suffix _serial) are kept as reference
// implementations for tests and for the bench_kernels comparison target.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spherecon::kernels {

inline constexpr std::size_t kBlock = 1024;

double block_sum(std::span<const double> x);
double block_sum_serial(std::span<const double> x);

// Plain left-to-right accumulation; test oracle only.
double naive_sum(std::span<const double> x);

// Σ a_i b_i w_i (deterministic blocked reduction).
double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w);
double weighted_dot_serial(std::span<const double> a, std::span<const double> b,
                           std::span<const double> w);

double dot(std::span<const double> a, std::span<const double> b);

std::size_t argmax(std::span<const double> x);
double max_abs(std::span<const double> x);

// Blocked reduction of f(i) over [0, n). f must be pure.
template <class F>
double block_reduce(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class F>
double block_reduce_serial(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  double total = 0.0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    total += s;
  }
  return total;
}

// y_i = f(i) over [0, y.size()).
template <class F>
void parallel_fill(std::span<double> y, F&& f) {
  const long long n = static_cast<long long>(y.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
}

template <class F>
void serial_fill(std::span<double> y, F&& f) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = f(i);
}

}  // namespace spherecon::kernels
