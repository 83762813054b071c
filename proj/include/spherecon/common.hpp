#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spherecon {

// Surface measure of the unit k-sphere embedded in R^{k+1}:
// S^0 = {-1,1} -> 2, S^1 -> 2*pi, S^2 -> 4*pi.
inline double sphere_measure(int k) {
  switch (k) {
    case 0: return 2.0;
    case 1: return 2.0 * std::numbers::pi;
    case 2: return 4.0 * std::numbers::pi;
    case 3: return 2.0 * std::numbers::pi * std::numbers::pi;
    default: break;
  }
  if (k < 0) throw std::invalid_argument("sphere_measure: k must be >= 0");
  // omega_k = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  if (n < 2 || lo <= 0.0 || hi <= lo) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

inline std::vector<double> lin_spaced(double lo, double hi, int n) {
  if (n < 2 || hi <= lo) throw std::invalid_argument("lin_spaced: bad range");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

}  // namespace spherecon
