// nonlinearity.hpp — nonlinearity families with sampled (f1)-(f4) certificates,
// the penalization weight H (N >= 3 and N = 2 forms), and the penalized
// nonlinearity g_eps with its exact per-branch antiderivative G_eps.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spherecon/potentials.hpp"
#include "spherecon/radial_operator.hpp"

namespace spherecon {

enum class NonlinearityKind { PurePower, SumOfPowers };

struct Nonlinearity {
  NonlinearityKind kind = NonlinearityKind::PurePower;
  std::vector<double> coeffs;
  std::vector<double> exponents;  // each > 1
  double q = 0.0;      // growth exponent at 0 (min exponent)
  double p = 0.0;      // growth exponent at infinity (max exponent)
  double theta = 0.0;  // Ambrosetti-Rabinowitz exponent, in (2, p+1]

  static Nonlinearity pure_power(double p);
  static Nonlinearity sum_of_powers(std::vector<double> coeffs, std::vector<double> exponents,
                                    std::optional<double> theta = std::nullopt);

  double f(double s) const;       // throws std::domain_error for s < 0
  double F(double s) const;       // antiderivative, F(0) = 0
  double fprime(double s) const;  // df/ds for s > 0

  // Odd extension f(-s) = -f(s) used by the solvers (G even under it).
  double f_ext(double s) const;
  double F_ext(double s) const;
};

double f_eval(const Nonlinearity& f, double s);
double F_eval(const Nonlinearity& f, double s);

struct FCondition {
  std::string name;
  bool pass = false;
  double violation_s = 0.0;  // first violating sample when !pass
};

struct FCertificate {
  std::vector<FCondition> conditions;
  bool pass = false;
};

// Sampled certificate for (f1)-(f4) on the given grid of s > 0 values.
FCertificate validate_f(const Nonlinearity& f, std::span<const double> grid);
FCertificate validate_f(const Nonlinearity& f);  // log grid, 1200 points in [1e-6, 1e3]

// ---------------------------------------------------------------------------

struct PenalizationParams {
  double kappa = 0.0;
  double beta = 1.0;
  double mu = 0.5;

  static PenalizationParams defaults(int N);
  void validate(int N) const;
};

// Penalization weight H(r). N >= 3: kappa / (r^2 ((log r)^2 + 1)^{(1+beta)/2});
// N = 2: kappa / (r^2 (1 + (log r)^2)^{(2+beta)/2}).
double hardy_weight(double r, const PenalizationParams& params, int N);

// ---------------------------------------------------------------------------

struct PenalizedNonlinearity {
  double r_lo = 0.0, r_hi = 0.0;  // annulus Lambda
  Nonlinearity f;
  RadialPotential V;
  RadialPotential K;
  PenalizationParams params;
  double eps = 0.0;
  int N = 0;

  static PenalizedNonlinearity make(double r_lo, double r_hi, Nonlinearity f, RadialPotential V,
                                    RadialPotential K, PenalizationParams params, double eps,
                                    int N);

  bool in_lambda(double r) const { return r > r_lo && r < r_hi; }

  // eps^2 H(r) + mu V(r), the slope of the linear branch outside Lambda.
  double linear_coeff(double r) const;

  // Branch switch s*(r): K f(s)/s crosses linear_coeff at s*. +inf if no
  // crossing below the search cap (then g = K f everywhere).
  double switch_point(double r) const;

  double g(double r, double s) const;
  double G(double r, double s) const;
  double gprime(double r, double s) const;
};

double g_eval(const PenalizedNonlinearity& pen, double r, double s);
double G_eval(const PenalizedNonlinearity& pen, double r, double s);

// ---------------------------------------------------------------------------

// Smallest eigenvalue of the discretized radial -Delta - H in dimension N
// (measure r^{N-1} dr, Dirichlet truncation at the grid ends).
EigenEstimate quadratic_form_positivity(const PenalizationParams& params, int N,
                                        const RadialMesh& mesh);

}  // namespace spherecon
