// limit_ground_state.hpp — ground states and the ground energy E(a, b) of the
// limit equation -Delta w + a w = b f(w) in R^d, d = N - k, computed by radial
// shooting with a Nehari-descent cross-check.

#pragma once

#include <span>
#include <vector>

#include "spherecon/nonlinearity.hpp"
#include "spherecon/radial_energy.hpp"
#include "spherecon/radial_operator.hpp"

namespace spherecon {

struct LimitProblem {
  int d = 1;  // reduced dimension, in {1, 2, 3}
  double a = 1.0;
  double b = 1.0;
  Nonlinearity f;

  // Validates d, positivity of (a, b) and the subcriticality condition
  // 1/(p+1) > 1/2 - 1/d.
  static LimitProblem make(int d, double a, double b, Nonlinearity f);

  LimitProblem with_coefficients(double a_new, double b_new) const;
};

enum class LimitMethod { Shooting, NehariDescent };

struct GroundState {
  RadialMesh mesh;  // [0, rho_max], weight rho^{d-1}
  std::vector<double> w;
  double w0 = 0.0;
  double energy = 0.0;           // I_{a,b}(w), surface factor included
  double nehari_residual = 0.0;  // relative Nehari identity defect
};

struct LimitSolveOptions {
  int n = 8193;
  double rho_max = 0.0;  // 0 -> 30 / sqrt(a)
  double bracket_rel_tol = 1e-13;
  double ode_rel_tol = 1e-13;
  double consistency_tol = 1e-4;  // shooting vs descent energy agreement
  bool cross_check = true;        // NehariDescent runs shooting for comparison
};

// Radial shooting: bisection on w(0) between the blow-up (undershoot) and
// zero-crossing (overshoot) regimes, adaptive RK45 with event detection,
// exponential tail continuation below 1e-5 * w0.
GroundState solve_limit(const LimitProblem& problem, LimitMethod method = LimitMethod::Shooting,
                        const LimitSolveOptions& opt = {});

double ground_energy(const LimitProblem& problem, const LimitSolveOptions& opt = {});
double ground_energy(double a, double b, const LimitProblem& tmpl,
                     const LimitSolveOptions& opt = {});

// Discrete limit energy on a mesh (used by nehari_project and the tests).
struct LimitLocal {
  const Nonlinearity* f = nullptr;
  double b = 1.0;
  double g(std::size_t, double s) const { return b * f->f_ext(s); }
  double G(std::size_t, double s) const { return b * f->F_ext(s); }
  double gp(std::size_t, double s) const { return b * f->fprime(std::fabs(s)); }
};

RadialEnergy<LimitLocal> limit_energy(const LimitProblem& problem, const RadialMesh& mesh);

// Nehari projection: the unique t* maximizing t -> I_{a,b}(t u).
double nehari_t_star(const LimitProblem& problem, const RadialMesh& mesh,
                     std::span<const double> u);
std::vector<double> nehari_project(const LimitProblem& problem, const RadialMesh& mesh,
                                   std::span<const double> u);

struct MonotonicityReport {
  bool pass = false;
  std::vector<std::pair<double, double>> violations;  // offending parameter pairs
};

// Verifies E strictly increasing in a (at fixed b) and strictly decreasing in
// b (at fixed a) on the sampled grids.
MonotonicityReport check_energy_monotonicity(const LimitProblem& tmpl,
                                             std::span<const double> a_grid,
                                             std::span<const double> b_grid,
                                             const LimitSolveOptions& opt = {});

}  // namespace spherecon
