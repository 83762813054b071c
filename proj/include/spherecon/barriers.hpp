// barriers.hpp — comparison functions: the cosh peak barrier Phi_eps, the
// outer barrier Psi_eps solving the linearized exterior equation, the glued
// barrier W_eps, and the decay envelopes of the different growth regimes.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "spherecon/penalized_solver.hpp"
#include "spherecon/potentials.hpp"

namespace spherecon {

// Distance between the k-spheres of radii x_r and y_r (radial restriction,
// x' = y' = 0).
double d_H(double x_r, double y_r);

struct PeakBarrier {
  double center = 0.0;  // rbar
  double R = 0.0;
  double lambda = 0.0;
  double eps = 0.0;

  // Enforces lambda^2 < (1 - mu) * inf_Lambda V.
  static PeakBarrier make(double center, double R, double lambda, double eps,
                          double inf_lambda_V, double mu);

  // cosh(lambda (R - d_H(r, center)) / eps)
  double operator()(double r) const;
};

double peak_barrier_eval(const PeakBarrier& b, double r);

struct PeakBarrierCheck {
  double min_margin = 0.0;     // min over nodes of -eps^2 Delta Phi + (1-mu) V Phi
  double eps_threshold = 0.0;  // supersolution guaranteed for eps below this
};

// Largest rate (with a 5% safety factor) for which the cosh barrier on
// B_H(center, R) is a supersolution at the given eps:
// lambda^2 + eps (N-1)/(center-R) lambda <= (1-mu) inf_ball V.
double feasible_peak_lambda(double inf_ball_V, double mu, double eps, double center, double R,
                            int N);

// Evaluates the supersolution inequality at ball nodes with the radial
// Laplacian in dimension N.
PeakBarrierCheck peak_barrier_check(const PeakBarrier& b, const RadialPotential& V, double mu,
                                    const RadialMesh& mesh, int N);

struct OuterBarrier {
  std::vector<double> psi;  // full mesh size; 1 on [r_lo, r_hi], solved outside
  double max_value = 0.0;
  double min_exterior = 0.0;
  bool monotone = true;  // decreasing away from Lambda on both pieces
};

// Solves -eps^2 (Psi'' + (N-1)/r Psi' + H Psi) + (1-mu) V Psi = 0 on
// [r_min, r_lo] and [r_hi, r_max] with Psi = 1 on the Lambda side and Psi = 0
// at the truncation nodes (banded direct solve).
OuterBarrier solve_outer_barrier(const PenalizedProblem& problem);

// Smallest eigenvalue of the exterior operator -eps^2 (Delta + H) + (1-mu) V
// over both exterior pieces (Dirichlet); the discrete comparison principle
// needs it nonnegative.
EigenEstimate exterior_operator_positivity(const PenalizedProblem& problem);

enum class EnvelopeRegime {
  Base,               // exp(-(lambda/eps) d/(1+d)) (1+r^2)^{-(N-2)/2}
  QuadInfinity,       // algebraic factor replaced by (1+r)^{-nu/eps}
  StretchedInfinity,  // exp factor stretched by (1+r)^{(2-alpha)/2}, alpha < 2
  QuadOrigin,         // extra factor (r/(1+r))^{nu/eps}
  StretchedOrigin,    // exp factor stretched by (r/(1+r))^{(gamma-2)/2}, gamma > 2
};

struct DecayEnvelope {
  EnvelopeRegime regime = EnvelopeRegime::Base;
  double C = 1.0;
  double lambda = 0.0;
  double nu = 0.0;        // quad regimes
  double exponent = 0.0;  // alpha (infinity) or gamma (origin)
  double eps = 0.0;
  int N = 3;
};

// Envelope regime consistency with the declared growth class; throws on
// mismatch (configuration error).
DecayEnvelope make_envelope(EnvelopeRegime regime, const GrowthClass& cls, double C,
                            double lambda, double nu, double eps, int N);

double envelope_eval(const DecayEnvelope& env, double r, double r_eps);

struct GluedBarrier {
  std::vector<double> W;  // on the problem mesh
  double lambda = 0.0;
  double R = 0.0;
  double rho = 1.0;  // peak-ball radius in units of eps
  double center = 0.0;
};

// W = Phi / cosh(lambda (R/eps - rho)) within d_H < R of the center, and the
// normalized outer barrier beyond (Psi extended by 1 across Lambda).
GluedBarrier glue_barrier(const PenalizedProblem& problem, const OuterBarrier& outer,
                          double center, double lambda, double rho = 1.0);

struct ComparisonReport {
  bool pass = false;
  double worst_ratio = 0.0;  // max over checked nodes of u / (M W)
  double sup_ball = 0.0;     // ||u||_{L^inf(peak ball)}
};

// Node-wise comparison u <= ||u||_{L^inf(ball)} W outside the peak ball.
ComparisonReport barrier_comparison(const PenalizedProblem& problem, std::span<const double> u,
                                    const GluedBarrier& barrier);

// Least-squares exponential rate of decay of `values` on nodes [i0, i1):
// fits log(values) ~ a - rate * (r - r_ref). Used for envelope rates.
double fit_decay_rate(std::span<const double> r, std::span<const double> values, std::size_t i0,
                      std::size_t i1);

}  // namespace spherecon
