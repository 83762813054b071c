#include "spherecon/penalized_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spherecon/common.hpp"
#include "spherecon/kernels.hpp"

namespace spherecon {

double PenalizedLocal::g(std::size_t j, double s) const {
  if (s < 0.0) return -g(j, -s);
  const double kf = Kr[j] * f->f(s);
  if (inside[j]) return kf;
  return std::min(clin[j] * s, kf);
}

double PenalizedLocal::G(std::size_t j, double s) const {
  s = std::fabs(s);
  if (inside[j]) return Kr[j] * f->F(s);
  if (s <= sstar[j]) return Kr[j] * f->F(s);
  return KFstar[j] + 0.5 * clin[j] * (s * s - sstar[j] * sstar[j]);
}

double PenalizedLocal::gp(std::size_t j, double s) const {
  s = std::fabs(s);
  if (inside[j]) return Kr[j] * f->fprime(s);
  if (s < sstar[j]) return Kr[j] * f->fprime(s);
  return clin[j];
}

// View with value semantics for the energy template.
namespace {
struct LocalView {
  const PenalizedLocal* p = nullptr;
  double g(std::size_t j, double s) const { return p->g(j, s); }
  double G(std::size_t j, double s) const { return p->G(j, s); }
  double gp(std::size_t j, double s) const { return p->gp(j, s); }
};
}  // namespace

PenalizedProblem PenalizedProblem::make(int N, double eps, PenalizedNonlinearity pen,
                                        RadialGrid grid) {
  if (N < 2) throw std::invalid_argument("PenalizedProblem: N must be >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("PenalizedProblem: eps must be positive");
  if (!(0.0 < grid.r_min && grid.r_min < pen.r_lo && pen.r_hi < grid.r_max))
    throw std::invalid_argument(
        "PenalizedProblem: grid must satisfy 0 < r_min < r_lo < r_hi < r_max");
  if (grid.n < 16) throw std::invalid_argument("PenalizedProblem: grid too coarse");

  PenalizedProblem pr;
  pr.N = N;
  pr.eps = eps;
  pen.eps = eps;
  pen.N = N;
  pr.pen = std::move(pen);
  pr.grid = grid;
  pr.mesh = grid.spacing == GridSpacing::Uniform
                ? RadialMesh::uniform(grid.r_min, grid.r_max, grid.n, N - 1)
                : RadialMesh::log_uniform(grid.r_min, grid.r_max, grid.n, N - 1);
  pr.surface = sphere_measure(N - 1);

  const std::size_t n = pr.mesh.size();
  pr.Vnode.resize(n);
  pr.local.f = &pr.pen.f;
  pr.local.inside.resize(n);
  pr.local.Kr.resize(n);
  pr.local.clin.resize(n);
  pr.local.sstar.resize(n);
  pr.local.KFstar.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = pr.mesh.r[j];
    pr.Vnode[j] = pr.pen.V(r);
    pr.local.inside[j] = pr.pen.in_lambda(r) ? 1 : 0;
    pr.local.Kr[j] = pr.pen.K(r);
    if (pr.local.inside[j]) {
      pr.local.clin[j] = 0.0;
      pr.local.sstar[j] = std::numeric_limits<double>::infinity();
      pr.local.KFstar[j] = 0.0;
    } else {
      pr.local.clin[j] = pr.pen.linear_coeff(r);
      pr.local.sstar[j] = pr.pen.switch_point(r);
      pr.local.KFstar[j] = std::isfinite(pr.local.sstar[j])
                               ? pr.local.Kr[j] * pr.pen.f.F(pr.local.sstar[j])
                               : 0.0;
    }
  }
  return pr;
}

namespace {

RadialEnergy<LocalView> make_energy(const PenalizedProblem& pr) {
  RadialEnergy<LocalView> E;
  E.mesh = &pr.mesh;
  E.c_kin = pr.eps * pr.eps;
  E.surface = pr.surface;
  E.V = pr.Vnode;
  E.clamp_left = true;
  E.clamp_right = true;
  E.local = LocalView{&pr.local};
  return E;
}

}  // namespace

double assemble_energy(const PenalizedProblem& problem, std::span<const double> u) {
  return make_energy(problem).energy(u);
}

std::vector<double> assemble_gradient(const PenalizedProblem& problem,
                                      std::span<const double> u) {
  std::vector<double> g(u.size());
  make_energy(problem).gradient(u, g);
  return g;
}

double norm_eps_squared(const PenalizedProblem& problem, std::span<const double> u) {
  return make_energy(problem).quad_form(u);
}

double nehari_t(const PenalizedProblem& problem, std::span<const double> u) {
  return make_energy(problem).t_star(u);
}

DiscreteSolution solve(const PenalizedProblem& problem, const PenalizedSolveOptions& opt) {
  auto E = make_energy(problem);
  const std::size_t n = problem.mesh.size();

  std::vector<double> seed;
  if (opt.warm_start) {
    seed = *opt.warm_start;
    if (seed.size() != n) throw std::invalid_argument("solve: warm start size mismatch");
  } else {
    const double r0 = opt.seed_radius > 0.0 ? opt.seed_radius
                                            : 0.5 * (problem.pen.r_lo + problem.pen.r_hi);
    if (!(r0 > problem.grid.r_min && r0 < problem.grid.r_max))
      throw std::invalid_argument("solve: seed radius outside the grid");
    const double a = problem.pen.V(r0);
    const double b = problem.pen.K(r0);
    if (!(a > 0.0 && b > 0.0))
      throw SolverError("solve: seed radius has V = 0 or K = 0; cannot build limit profile");
    LimitSolveOptions lopt;
    lopt.n = 4097;
    const GroundState w = solve_limit(LimitProblem::make(1, a, b, problem.pen.f),
                                      LimitMethod::Shooting, lopt);
    const double rho_max = w.mesh.r.back();
    const double drho = w.mesh.r[1] - w.mesh.r[0];
    seed.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double rho = std::fabs(problem.mesh.r[j] - r0) / problem.eps;
      if (rho >= rho_max) continue;
      const double x = rho / drho;
      const auto i0 = static_cast<std::size_t>(x);
      const double t = x - static_cast<double>(i0);
      seed[j] = (1.0 - t) * w.w[i0] + t * w.w[std::min(i0 + 1, w.w.size() - 1)];
    }
  }

  DescentOptions dopt;
  dopt.grad_tol = opt.grad_tol;
  dopt.stall_accept_tol = opt.stall_accept_tol;
  dopt.max_iters = opt.max_iters;
  dopt.record_trace = opt.record_trace;
  DescentResult res = nehari_descent(E, std::move(seed), dopt);

  DiscreteSolution sol;
  sol.u = std::move(res.u);
  sol.j_eps = res.energy;
  sol.c_eps = res.energy;
  sol.grad_norm = res.grad_norm;
  sol.iters = res.iters;
  sol.trace = std::move(res.trace);
  sol.norm_eps = E.quad_form(sol.u);
  const double pairing = E.pairing(sol.u);
  sol.nehari_defect = std::fabs(sol.norm_eps - pairing) / std::max(sol.norm_eps, 1e-300);
  try {
    sol.t_residual = std::fabs(E.t_star(sol.u) - 1.0);
  } catch (const SolverError&) {
    sol.t_residual = std::numeric_limits<double>::infinity();
  }
  const double peak = kernels::max_abs(sol.u);
  if (!(peak > 0.0)) throw SolverError("solve: converged to the zero solution", sol.trace);
  sol.truncation_ok = std::fabs(sol.u[1]) < 1e-8 * peak && std::fabs(sol.u[n - 2]) < 1e-8 * peak;
  return sol;
}

CertificationReport certify_original(const PenalizedProblem& problem,
                                     const DiscreteSolution& sol) {
  CertificationReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  const auto& loc = problem.local;
  for (std::size_t j = 0; j < sol.u.size(); ++j) {
    if (loc.inside[j]) continue;
    const double u = sol.u[j];
    const double quotient = u > 0.0 ? loc.Kr[j] * problem.pen.f.f(u) / u : 0.0;
    const double margin = loc.clin[j] - quotient;
    if (margin < rep.margin) {
      rep.margin = margin;
      rep.worst_r = problem.mesh.r[j];
    }
  }
  rep.certified = rep.margin >= 0.0;
  return rep;
}

double residual(const PenalizedProblem& problem, const DiscreteSolution& sol) {
  const auto& m = problem.mesh;
  const auto& u = sol.u;
  const double e2 = problem.eps * problem.eps;
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < m.size(); ++j) {
    const double hl = m.h[j - 1], hr = m.h[j];
    const double upp = 2.0 * ((u[j + 1] - u[j]) / hr - (u[j] - u[j - 1]) / hl) / (hl + hr);
    const double up = (hl / hr * (u[j + 1] - u[j]) + hr / hl * (u[j] - u[j - 1])) / (hl + hr);
    const double g = problem.local.g(j, u[j]);
    const double adv = (problem.N - 1) / m.r[j] * up;
    const double R = -e2 * (upp + adv) + problem.Vnode[j] * u[j] - g;
    const double denom = e2 * (std::fabs(upp) + std::fabs(adv)) +
                         problem.Vnode[j] * std::fabs(u[j]) + std::fabs(g);
    if (denom > 0.0) worst = std::max(worst, std::fabs(R) / denom);
  }
  return worst;
}

}  // namespace spherecon
