// penalized_solver.hpp — discretization and Nehari-constrained minimization of
// the penalized energy J_eps for the radial case k = N-1 (reduced 1-D problem
// in r with weight r^{N-1}), plus the a-posteriori certification that the
// solution solves the original equation.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spherecon/limit_ground_state.hpp"
#include "spherecon/nonlinearity.hpp"
#include "spherecon/radial_energy.hpp"
#include "spherecon/radial_operator.hpp"

namespace spherecon {

enum class GridSpacing { Uniform, LogUniform };

struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  int n = 8192;
  GridSpacing spacing = GridSpacing::Uniform;
};

// Per-node branch data of g_eps, precomputed once per problem.
struct PenalizedLocal {
  const Nonlinearity* f = nullptr;
  std::vector<std::uint8_t> inside;  // chi_Lambda at nodes
  std::vector<double> Kr;            // K(r_j)
  std::vector<double> clin;          // eps^2 H + mu V at nodes outside Lambda
  std::vector<double> sstar;         // branch switch s*(r_j)
  std::vector<double> KFstar;        // K(r_j) F(s*)

  double g(std::size_t j, double s) const;
  double G(std::size_t j, double s) const;
  double gp(std::size_t j, double s) const;
};

struct PenalizedProblem {
  int N = 3;
  double eps = 0.0;
  PenalizedNonlinearity pen;
  RadialGrid grid;
  RadialMesh mesh;             // weight r^{N-1}
  std::vector<double> Vnode;   // V at nodes
  PenalizedLocal local;
  double surface = 0.0;        // omega_{N-1}, surface measure of S^{N-1}

  // k = N-1 is enforced structurally: the reduced problem is 1-D in r.
  static PenalizedProblem make(int N, double eps, PenalizedNonlinearity pen, RadialGrid grid);
};

double assemble_energy(const PenalizedProblem& problem, std::span<const double> u);
std::vector<double> assemble_gradient(const PenalizedProblem& problem, std::span<const double> u);

// ||u||_eps^2 = surface * int (eps^2 |u'|^2 + V u^2) r^{N-1} dr.
double norm_eps_squared(const PenalizedProblem& problem, std::span<const double> u);

// <J'(t u), u> as a function of t has a unique zero by (g4); returns it.
double nehari_t(const PenalizedProblem& problem, std::span<const double> u);

struct PenalizedSolveOptions {
  double grad_tol = 1e-8;
  double stall_accept_tol = 0.0;  // see DescentOptions
  int max_iters = 20000;
  double seed_radius = 0.0;                    // 0 -> annulus midpoint
  std::optional<std::vector<double>> warm_start;  // skip seeding, project + descend
  bool record_trace = true;
};

struct DiscreteSolution {
  std::vector<double> u;
  double j_eps = 0.0;       // J_eps(u)
  double c_eps = 0.0;       // critical value estimate (== j_eps at convergence)
  double grad_norm = 0.0;
  double norm_eps = 0.0;    // ||u||_eps^2
  double t_residual = 0.0;  // |t*(u) - 1|
  double nehari_defect = 0.0;  // |<J'(u), u>| / ||u||_eps^2
  int iters = 0;
  bool truncation_ok = true;  // |u| at boundary < 1e-8 * peak
  std::vector<TracePoint> trace;
};

// Seeds with the d = 1 limit ground state at (V(r0), K(r0)) scaled to width
// eps and centered at r0, projects onto the Nehari set and descends.
DiscreteSolution solve(const PenalizedProblem& problem, const PenalizedSolveOptions& opt = {});

struct CertificationReport {
  bool certified = false;
  double margin = 0.0;   // min over exterior nodes of eps^2 H + mu V - K f(u)/u
  double worst_r = 0.0;
};

// Node-wise check of K f(u)/u <= eps^2 H + mu V outside Lambda; when it holds
// the penalty is inactive and u solves the original equation on the grid.
CertificationReport certify_original(const PenalizedProblem& problem, const DiscreteSolution& sol);

// Sup over interior nodes of the Euler-Lagrange residual
// |-eps^2 (u'' + (N-1)/r u') + V u - g_eps(r, u)|, scaled by the local
// magnitude of the terms involved.
double residual(const PenalizedProblem& problem, const DiscreteSolution& sol);

}  // namespace spherecon
