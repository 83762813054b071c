// asymptotics.hpp — the eps-sweep driver and the concentration, energy-scaling
// and decay diagnostics evaluated on it.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spherecon/auxiliary_potential.hpp"
#include "spherecon/barriers.hpp"
#include "spherecon/penalized_solver.hpp"

namespace spherecon {

struct ProblemTemplate {
  int N = 3;
  int k = 2;  // k = N-1 for the penalized solver
  Nonlinearity f;
  RadialPotential V;
  RadialPotential K;
  AnnulusLambda lambda;
  PenalizationParams params;
  RadialGrid grid;

  PenalizedProblem at_eps(double eps) const;
  AuxPotential aux() const;
};

struct SweepTolerances {
  double m_gap_rel = 0.02;
  double ratio_lo = 0.9;
  double ratio_hi = 1.15;
};

struct SweepConfig {
  std::vector<double> eps_list;  // strictly decreasing, all positive
  ProblemTemplate problem;
  bool warm_start = true;
  EnvelopeRegime regime = EnvelopeRegime::Base;
  GrowthClass growth;
  SweepTolerances tol;
  double grad_tol = 1e-8;
  int max_iters = 20000;
  int find_min_resolution = 65536;

  void validate() const;
};

struct ConcentrationReport {
  double eps = 0.0;
  bool solved = false;
  std::string error;

  double r_eps = 0.0;
  double peak = 0.0;
  double m_at_peak = 0.0;
  double c_eps = 0.0;
  double scaled_energy = 0.0;  // eps^{-(N-k)} c_eps
  double lambda_fit = 0.0;
  double lambda_env = 0.0;
  bool certified = false;
  double cert_margin = 0.0;
  double l2_norm = 0.0;  // finite-grid part
  bool l2_tail_finite = false;
  bool corollary_applies = false;
  bool envelope_ok = false;
  bool envelope_vacuous = false;
  double grad_norm = 0.0;
  int iters = 0;
  bool truncation_ok = true;
  bool peak_at_boundary = false;
};

struct SweepResult {
  std::vector<ConcentrationReport> reports;
  std::vector<std::vector<double>> profiles;  // per-eps nodal values (empty on failure)
  double r_star = 0.0;
  double inf_m = 0.0;
};

SweepResult run_sweep(const SweepConfig& cfg);

struct PeakInfo {
  double r_eps = 0.0;
  double peak = 0.0;
  bool at_boundary = false;
};

// Argmax over nodes with 3-point parabolic refinement. Throws on u == 0.
PeakInfo peak_extract(const RadialMesh& mesh, std::span<const double> u);

enum class VerdictStatus { Pass, Fail, Insufficient };

struct Verdict {
  VerdictStatus status = VerdictStatus::Insufficient;
  std::string detail;
};

// M(r_eps) -> inf M monotonically with final relative gap below tolerance,
// and d_H(r_eps, boundary) bounded below.
Verdict concentration_check(std::span<const ConcentrationReport> reports, double inf_m,
                            const AnnulusLambda& lambda, double gap_tol);

// eps^{-(N-k)} c_eps / (omega_k inf M): reports per-eps ratios, final value
// must land in [ratio_lo, ratio_hi].
Verdict energy_scaling_check(std::span<const ConcentrationReport> reports, int k, double inf_m,
                             const SweepTolerances& tol, std::vector<double>* ratios = nullptr);

struct DecayFit {
  double lambda_fit = 0.0;  // raw fitted decay rate (times eps)
  double lambda_env = 0.0;  // envelope rate: lambda_fit clamped below the
                            // comparison bound sqrt((1-mu) inf_Lambda V)
  bool envelope_ok = false;
  bool vacuous = false;      // lambda == 0 envelope is trivially satisfied
  double l2_norm = 0.0;      // finite-grid L2 norm of u
  bool tail_finite = false;  // fitted-envelope tail integrable beyond r_max
  bool corollary_applies = false;
};

// Least-squares decay rate on the right-exterior window and node-wise envelope
// verdict with C anchored at the peak. Throws if the fit window is empty.
DecayFit decay_fit(const PenalizedProblem& problem, const DiscreteSolution& sol, double r_eps,
                   EnvelopeRegime regime, const GrowthClass& growth);

// Max distance |r - r_eps| over Lambda nodes where u exceeds delta.
double superlevel_width(const RadialMesh& mesh, std::span<const double> u, double r_eps,
                        double delta, const AnnulusLambda& lambda);

}  // namespace spherecon
