// potentials.hpp — closed-form radial models for the potentials V and K,
// growth-class declarations with sampled validation, and the Kelvin transform.
//
// A model evaluates as  r^power_shift * base(inverted ? 1/r : r),  which makes
// the Kelvin transform an exact structural operation (and an exact involution).

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace spherecon {

enum class PotentialKind {
  Constant,           // params: {c}
  Power,              // params: {c, s}           c * r^s
  ShiftedPolynomial,  // params: {c0, a, r0}      c0 + a*(r - r0)^2
  GaussianBump,       // params: {c0, amp, a, r0} c0 + amp*exp(-a*(r - r0)^2)
  Rational,           // params: {nn, a_0..a_{nn-1}, b_0..}  (sum a_i r^i)/(sum b_i r^i)
  Product,            // factors multiplied together
};

struct RadialPotential {
  PotentialKind kind = PotentialKind::Constant;
  std::vector<double> params;
  std::vector<RadialPotential> factors;  // Product only
  double power_shift = 0.0;
  bool inverted = false;

  // Exact evaluation of the closed-form model; throws std::domain_error if r <= 0.
  double operator()(double r) const;

  bool operator==(const RadialPotential&) const = default;

  static RadialPotential constant(double c);
  static RadialPotential power(double c, double s);
  static RadialPotential shifted_polynomial(double c0, double a, double r0);
  static RadialPotential gaussian_bump(double c0, double amp, double a, double r0);
  static RadialPotential rational(std::vector<double> num, std::vector<double> den);
  static RadialPotential product(std::vector<RadialPotential> factors);

  // Folds constant/power models into a plain Power form where possible
  // (used when echoing transformed models).
  RadialPotential canonical() const;

  std::string describe() const;
};

double eval_potential(const RadialPotential& pot, double r);

// ---------------------------------------------------------------------------
// Growth classes at the origin and at infinity.

enum class OriginClass { G0_1, G0_2, G0_3 };
enum class InfinityClass { Ginf_1, Ginf_2, Ginf_3 };

struct GrowthClass {
  OriginClass at_origin = OriginClass::G0_1;
  double tau = 0.0;    // K exponent / exp coefficient at the origin
  double gamma = 0.0;  // G0_3 only, requires gamma > 2

  InfinityClass at_infinity = InfinityClass::Ginf_1;
  double sigma = 0.0;  // K exponent / exp coefficient at infinity
  double alpha = 0.0;  // Ginf_3 only, requires alpha < 2

  // Parameter constraints that do not need (q, N) context.
  void check_params() const;
};

struct SamplingPolicy {
  int points_per_decade = 64;
  int decades = 6;  // each side
};

struct GrowthCheck {
  std::string condition;
  double surrogate = 0.0;  // sampled liminf (min) or limsup trend (log10 slope/decade)
  double threshold = 0.0;
  bool pass = false;
};

struct GrowthReport {
  std::vector<GrowthCheck> checks;       // verdict-bearing
  std::vector<GrowthCheck> diagnostics;  // informational (e.g. divergence trends)
  bool pass = false;
};

// Numerical spot-check of the declared classes on log-spaced grids near 0 and
// toward infinity. Not a proof: liminf is surrogated by the min over the tail
// decades, limsup by the boundedness trend of per-decade maxima.
GrowthReport validate_growth(const RadialPotential& V, const RadialPotential& K,
                             const GrowthClass& cls, double q, int N,
                             const SamplingPolicy& policy = {});

// ---------------------------------------------------------------------------
// Kelvin transform.

struct KelvinPair {
  RadialPotential v_hat;
  RadialPotential k_hat;
  double p = 0.0;
  int N = 0;
};

// V_hat(r) = r^-4 V(1/r), K_hat(r) = r^-(N+2-p(N-2)) K(1/r). Requires N >= 3.
KelvinPair kelvin_transform_potentials(const RadialPotential& V, const RadialPotential& K,
                                       double p, int N);

// r^exponent * pot(1/r) as an exact model.
RadialPotential kelvin_apply(const RadialPotential& pot, double exponent);

// Growth-class duality for pure-power f (q = p): origin conditions of (V, K)
// become infinity conditions of (V_hat, K_hat) and vice versa.
GrowthClass kelvin_mirror(const GrowthClass& cls, double p, int N);

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;
};

// u_hat(rho) = rho^{2-N} u(1/rho) on the image grid {1/r}, reordered ascending.
// Throws std::domain_error if the grid touches r = 0.
RadialProfile kelvin_transform_field(const RadialProfile& profile, int N);

}  // namespace spherecon
