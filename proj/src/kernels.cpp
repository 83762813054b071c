#include "spherecon/kernels.hpp"

#include <cmath>

namespace spherecon::kernels {

double block_sum(std::span<const double> x) {
  return block_reduce(x.size(), [&](std::size_t i) { return x[i]; });
}

double block_sum_serial(std::span<const double> x) {
  return block_reduce_serial(x.size(), [&](std::size_t i) { return x[i]; });
}

double naive_sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  return block_reduce(a.size(), [&](std::size_t i) { return a[i] * b[i] * w[i]; });
}

double weighted_dot_serial(std::span<const double> a, std::span<const double> b,
                           std::span<const double> w) {
  return block_reduce_serial(a.size(), [&](std::size_t i) { return a[i] * b[i] * w[i]; });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return block_reduce(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

std::size_t argmax(std::span<const double> x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] > x[best]) best = i;
  return best;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace spherecon::kernels
