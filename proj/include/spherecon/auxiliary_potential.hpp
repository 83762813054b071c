// auxiliary_potential.hpp — the auxiliary potential M(r) = r^k E(V(r), K(r)),
// its closed form for pure-power nonlinearities, minimizer search over an
// annulus, and admissibility validation of the annulus.

#pragma once

#include <string>
#include <vector>

#include "spherecon/limit_ground_state.hpp"
#include "spherecon/nonlinearity.hpp"
#include "spherecon/potentials.hpp"

namespace spherecon {

enum class AuxMode { ClosedForm, General };

struct AuxPotential {
  int N = 3;
  int k = 2;
  Nonlinearity f;
  RadialPotential V;
  RadialPotential K;
  AuxMode mode = AuxMode::ClosedForm;
  double e11 = 0.0;  // E(1,1) in dimension d = N - k, computed once

  static AuxPotential closed_form(int N, int k, double p, RadialPotential V, RadialPotential K);
  static AuxPotential general(int N, int k, Nonlinearity f, RadialPotential V, RadialPotential K);

  int reduced_dimension() const { return N - k; }

  // M(r); +infinity where K(r) = 0, throws std::domain_error where V(r) = 0.
  double operator()(double r) const;
};

double aux_closed_form(double r, int N, int k, double p, const RadialPotential& V,
                       const RadialPotential& K, double e11);
double aux_general(double r, int N, int k, const Nonlinearity& f, const RadialPotential& V,
                   const RadialPotential& K);

struct AnnulusLambda {
  double r_lo = 0.0;
  double r_hi = 0.0;

  static AnnulusLambda make(double r_lo, double r_hi);
};

struct MinResult {
  double r_star = 0.0;
  double m_star = 0.0;
  bool boundary = false;  // minimum at the annulus boundary within resolution
};

// Dense grid scan (resolution points, ties toward smaller r) followed by
// golden-section refinement to 1e-8 radius accuracy.
MinResult find_min(const AuxPotential& aux, const AnnulusLambda& lambda, int resolution = 4096);

struct AdmissibilityCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityCheck> checks;
  bool pass = false;
  double inf_interior = 0.0;
  double inf_boundary = 0.0;
};

// Checks 0 < inf M, the interior-vs-boundary gap, V > 0 on the closure, and
// (only when k = N-2) the factor-2 condition. Report-only.
AdmissibilityReport validate_lambda(const AuxPotential& aux, const AnnulusLambda& lambda,
                                    int resolution = 2048);

}  // namespace spherecon
