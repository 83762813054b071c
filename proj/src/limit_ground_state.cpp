#include "spherecon/limit_ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spherecon/common.hpp"

namespace spherecon {

LimitProblem LimitProblem::make(int d, double a, double b, Nonlinearity f) {
  if (d < 1 || d > 3) throw std::invalid_argument("LimitProblem: d must be 1, 2 or 3");
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("LimitProblem: a, b must be positive");
  // (f2): subcriticality in the reduced dimension; vacuous for d <= 2.
  if (!(1.0 / (f.p + 1.0) > 0.5 - 1.0 / d))
    throw std::invalid_argument("LimitProblem: p violates subcriticality in dimension d");
  LimitProblem pr;
  pr.d = d;
  pr.a = a;
  pr.b = b;
  pr.f = std::move(f);
  return pr;
}

LimitProblem LimitProblem::with_coefficients(double a_new, double b_new) const {
  return LimitProblem::make(d, a_new, b_new, f);
}

// ---------------------------------------------------------------------------
// Shooting integrator: adaptive Cash-Karp RK45 on (w, w') with the radial
// ODE  w'' + (d-1)/rho w' = a w - b f(w).

namespace {

struct OdeState {
  double rho, w, dw;
};

struct Shooter {
  int d;
  double a, b;
  const Nonlinearity* f;
  double rel_tol;

  void rhs(double rho, double w, double dw, double& f1, double& f2) const {
    f1 = dw;
    f2 = a * w - b * f->f_ext(w);
    if (d > 1 && rho > 0.0) f2 -= (d - 1) / rho * dw;
  }

  // One adaptive step from s; h is in/out (the suggestion for the next step).
  void step(OdeState& s, double& h) const {
    static constexpr double A2 = 1.0 / 5, A3 = 3.0 / 10, A4 = 3.0 / 5, A5 = 1.0, A6 = 7.0 / 8;
    static constexpr double B21 = 1.0 / 5;
    static constexpr double B31 = 3.0 / 40, B32 = 9.0 / 40;
    static constexpr double B41 = 3.0 / 10, B42 = -9.0 / 10, B43 = 6.0 / 5;
    static constexpr double B51 = -11.0 / 54, B52 = 5.0 / 2, B53 = -70.0 / 27, B54 = 35.0 / 27;
    static constexpr double B61 = 1631.0 / 55296, B62 = 175.0 / 512, B63 = 575.0 / 13824,
                            B64 = 44275.0 / 110592, B65 = 253.0 / 4096;
    static constexpr double C1 = 37.0 / 378, C3 = 250.0 / 621, C4 = 125.0 / 594,
                            C6 = 512.0 / 1771;
    static constexpr double D1 = 2825.0 / 27648, D3 = 18575.0 / 48384, D4 = 13525.0 / 55296,
                            D5 = 277.0 / 14336, D6 = 1.0 / 4;

    const double scale = std::max({std::fabs(s.w), std::fabs(s.dw), 1e-8});
    for (int attempt = 0; attempt < 60; ++attempt) {
      double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v, k5w, k5v, k6w, k6v;
      rhs(s.rho, s.w, s.dw, k1w, k1v);
      rhs(s.rho + A2 * h, s.w + h * B21 * k1w, s.dw + h * B21 * k1v, k2w, k2v);
      rhs(s.rho + A3 * h, s.w + h * (B31 * k1w + B32 * k2w), s.dw + h * (B31 * k1v + B32 * k2v),
          k3w, k3v);
      rhs(s.rho + A4 * h, s.w + h * (B41 * k1w + B42 * k2w + B43 * k3w),
          s.dw + h * (B41 * k1v + B42 * k2v + B43 * k3v), k4w, k4v);
      rhs(s.rho + A5 * h, s.w + h * (B51 * k1w + B52 * k2w + B53 * k3w + B54 * k4w),
          s.dw + h * (B51 * k1v + B52 * k2v + B53 * k3v + B54 * k4v), k5w, k5v);
      rhs(s.rho + A6 * h, s.w + h * (B61 * k1w + B62 * k2w + B63 * k3w + B64 * k4w + B65 * k5w),
          s.dw + h * (B61 * k1v + B62 * k2v + B63 * k3v + B64 * k4v + B65 * k5v), k6w, k6v);

      const double w5 = s.w + h * (C1 * k1w + C3 * k3w + C4 * k4w + C6 * k6w);
      const double v5 = s.dw + h * (C1 * k1v + C3 * k3v + C4 * k4v + C6 * k6v);
      const double w4 = s.w + h * (D1 * k1w + D3 * k3w + D4 * k4w + D5 * k5w + D6 * k6w);
      const double v4 = s.dw + h * (D1 * k1v + D3 * k3v + D4 * k4v + D5 * k5v + D6 * k6v);

      const double err =
          std::max(std::fabs(w5 - w4), std::fabs(v5 - v4)) / (rel_tol * scale + 1e-300);
      if (err <= 1.0 || h <= 1e-14) {
        s.rho += h;
        s.w = w5;
        s.dw = v5;
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
        return;
      }
      h *= std::max(0.9 * std::pow(err, -0.25), 0.1);
    }
    throw SolverError("shooting: step size control failed");
  }
};

enum class ShotOutcome { Overshoot, Undershoot, Decayed };

// Integrate from the series start until an event, rho_max, or the next output
// node. emit(rho_node, w) is called at each requested node.
struct ShotResult {
  ShotOutcome outcome;
  double rho_event;
};

constexpr double kSeriesStart = 1e-7;

OdeState series_start(const Shooter& sh, double w0) {
  const double rho0 = kSeriesStart / std::sqrt(std::max(sh.a, 1.0));
  const double curv = (sh.a * w0 - sh.b * sh.f->f_ext(w0)) / sh.d;
  return OdeState{rho0, w0 + 0.5 * curv * rho0 * rho0, curv * rho0};
}

ShotResult integrate_shot(const Shooter& sh, double w0, double rho_max) {
  OdeState s = series_start(sh, w0);
  double h = 1e-4 / std::sqrt(std::max(sh.a, 1.0));
  while (s.rho < rho_max) {
    double hstep = std::min(h, rho_max - s.rho + 1e-12);
    sh.step(s, hstep);
    h = std::max(hstep, 1e-12);
    if (s.w <= 0.0) return {ShotOutcome::Overshoot, s.rho};
    if (s.dw > 0.0 && s.rho > 10.0 * kSeriesStart) return {ShotOutcome::Undershoot, s.rho};
  }
  return {ShotOutcome::Decayed, s.rho};
}

}  // namespace

RadialEnergy<LimitLocal> limit_energy(const LimitProblem& problem, const RadialMesh& mesh) {
  RadialEnergy<LimitLocal> E;
  E.mesh = &mesh;
  E.c_kin = 1.0;
  E.surface = sphere_measure(problem.d - 1);
  E.V.assign(mesh.size(), problem.a);
  E.clamp_left = false;
  E.clamp_right = true;
  E.local = LimitLocal{&problem.f, problem.b};
  return E;
}

namespace {

GroundState finish_profile(const LimitProblem& pr, RadialMesh mesh, std::vector<double> w,
                           double w0) {
  GroundState gs;
  const RadialMesh& m = mesh;
  auto E = limit_energy(pr, m);
  gs.w0 = w0;
  gs.energy = E.energy(w);
  double quad = E.quad_form(w);
  double pair = E.pairing(w);
  if (m.weight_exponent == 1 && m.r.front() == 0.0) {
    // Euler-Maclaurin endpoint term at rho = 0 for the weight rho d(rho):
    // the mass-type integrands have nonzero derivative there (d = 2 only;
    // for d = 1, 3 the boundary terms vanish and trapezoid is O(h^4)).
    const double h = m.h.front();
    const double surface = E.surface;
    const double c = h * h / 12.0;
    quad += surface * c * pr.a * w0 * w0;
    pair += surface * c * pr.b * pr.f.f(w0) * w0;
    gs.energy += surface * c * (0.5 * pr.a * w0 * w0 - pr.b * pr.f.F(w0));
  }
  gs.nehari_residual = std::fabs(quad - pair) / std::max(quad, 1e-300);
  gs.mesh = std::move(mesh);
  gs.w = std::move(w);
  return gs;
}

GroundState solve_by_shooting(const LimitProblem& pr, const LimitSolveOptions& opt) {
  Shooter sh{pr.d, pr.a, pr.b, &pr.f, opt.ode_rel_tol};
  const double rho_max = opt.rho_max > 0.0 ? opt.rho_max : 30.0 / std::sqrt(pr.a);

  auto classify = [&](double w0) { return integrate_shot(sh, w0, rho_max).outcome; };

  // Bracket the separatrix: lo undershoots (turns back up), hi overshoots
  // (crosses zero).
  double guess = 1.0;
  if (pr.f.kind == NonlinearityKind::PurePower)
    guess = std::pow(pr.a * (pr.f.p + 1.0) / (2.0 * pr.b), 1.0 / (pr.f.p - 1.0));
  double lo = guess, hi = guess;
  int guard = 0;
  while (classify(lo) != ShotOutcome::Undershoot) {
    lo *= 0.5;
    if (++guard > 100) throw SolverError("shooting: could not bracket from below");
  }
  guard = 0;
  while (classify(hi) != ShotOutcome::Overshoot) {
    hi *= 2.0;
    if (++guard > 100) throw SolverError("shooting: could not bracket from above");
  }
  double w0 = 0.5 * (lo + hi);
  while (hi - lo > opt.bracket_rel_tol * hi) {
    w0 = 0.5 * (lo + hi);
    const auto out = classify(w0);
    if (out == ShotOutcome::Decayed) break;  // trajectory clean to rho_max
    (out == ShotOutcome::Undershoot ? lo : hi) = w0;
  }
  w0 = 0.5 * (lo + hi);

  // Final pass: sample onto the uniform output grid; below the switch level
  // continue with the linearized tail  w ~ (rho_m/rho)^{(d-1)/2} e^{-sqrt(a) dr}.
  RadialMesh mesh = RadialMesh::uniform(0.0, rho_max, opt.n, pr.d - 1);
  std::vector<double> w(mesh.size(), 0.0);
  const double w_switch = 1e-5 * w0;
  const double sqa = std::sqrt(pr.a);

  std::size_t next = 1;
  double rho_m = -1.0, w_m = 0.0;
  OdeState s = series_start(sh, w0);
  double h = 1e-4 / std::sqrt(std::max(pr.a, 1.0));
  w[0] = w0;
  // Steps are capped at node boundaries so every output node is hit exactly.
  while (next < mesh.size() && rho_m < 0.0) {
    const double target = mesh.r[next];
    while (s.rho < target - 1e-12 && rho_m < 0.0) {
      double hstep = std::min(h, target - s.rho);
      sh.step(s, hstep);
      h = std::max(hstep, 1e-12);
      if (s.w <= w_switch || s.dw > 0.0 || s.w <= 0.0) {
        rho_m = s.rho;
        w_m = std::max(s.w, 0.0);
      }
    }
    if (rho_m >= 0.0) break;
    w[next] = s.w;
    ++next;
  }
  if (rho_m < 0.0) {
    rho_m = s.rho;
    w_m = std::max(s.w, 0.0);
  }
  for (std::size_t j = next; j < mesh.size(); ++j) {
    const double rho = mesh.r[j];
    if (w_m <= 0.0) {
      w[j] = 0.0;
    } else {
      const double alg = pr.d > 1 && rho > 0.0 ? std::pow(rho_m / rho, 0.5 * (pr.d - 1)) : 1.0;
      w[j] = w_m * alg * std::exp(-sqa * (rho - rho_m));
    }
  }
  return finish_profile(pr, std::move(mesh), std::move(w), w0);
}

GroundState solve_by_descent(const LimitProblem& pr, const LimitSolveOptions& opt) {
  const double rho_max = opt.rho_max > 0.0 ? opt.rho_max : 30.0 / std::sqrt(pr.a);
  RadialMesh mesh = RadialMesh::uniform(0.0, rho_max, opt.n, pr.d - 1);
  auto E = limit_energy(pr, mesh);

  // Seed: soliton-like bump, then Nehari projection inside the driver.
  std::vector<double> seed(mesh.size());
  const double width = 1.0 / std::sqrt(pr.a);
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double x = mesh.r[j] / width;
    seed[j] = 1.0 / std::cosh(x);
  }
  seed.back() = 0.0;

  DescentOptions dopt;
  dopt.grad_tol = 1e-9;
  auto res = nehari_descent(E, std::move(seed), dopt);
  const double w0 = res.u.front();
  return finish_profile(pr, std::move(mesh), std::move(res.u), w0);
}

}  // namespace

GroundState solve_limit(const LimitProblem& problem, LimitMethod method,
                        const LimitSolveOptions& opt) {
  if (method == LimitMethod::Shooting) return solve_by_shooting(problem, opt);

  GroundState gs = solve_by_descent(problem, opt);
  gs.w0 = gs.w.front();
  if (opt.cross_check) {
    const GroundState ref = solve_by_shooting(problem, opt);
    const double gap = std::fabs(gs.energy - ref.energy) / std::max(std::fabs(ref.energy), 1e-300);
    if (gap > opt.consistency_tol) {
      std::ostringstream msg;
      msg << "solve_limit: shooting and Nehari-descent disagree (relative gap " << gap
          << ", shooting E = " << ref.energy << ", descent E = " << gs.energy << ")";
      throw SolverError(msg.str());
    }
  }
  return gs;
}

double ground_energy(const LimitProblem& problem, const LimitSolveOptions& opt) {
  return solve_limit(problem, LimitMethod::Shooting, opt).energy;
}

double ground_energy(double a, double b, const LimitProblem& tmpl, const LimitSolveOptions& opt) {
  return ground_energy(tmpl.with_coefficients(a, b), opt);
}

double nehari_t_star(const LimitProblem& problem, const RadialMesh& mesh,
                     std::span<const double> u) {
  bool nonzero = false;
  for (double v : u)
    if (v != 0.0) nonzero = true;
  if (!nonzero) throw std::domain_error("nehari_t_star: trial function is identically zero");
  auto E = limit_energy(problem, mesh);
  return E.t_star(u);
}

std::vector<double> nehari_project(const LimitProblem& problem, const RadialMesh& mesh,
                                   std::span<const double> u) {
  const double t = nehari_t_star(problem, mesh, u);
  std::vector<double> out(u.begin(), u.end());
  for (auto& v : out) v *= t;
  return out;
}

MonotonicityReport check_energy_monotonicity(const LimitProblem& tmpl,
                                             std::span<const double> a_grid,
                                             std::span<const double> b_grid,
                                             const LimitSolveOptions& opt) {
  if (a_grid.size() < 2 || b_grid.size() < 2)
    throw std::invalid_argument("check_energy_monotonicity: need at least 2 values per grid");
  MonotonicityReport rep;
  rep.pass = true;
  // E increasing in a at fixed b = b_grid[0].
  {
    const double b = b_grid[0];
    double prev = ground_energy(a_grid[0], b, tmpl, opt);
    for (std::size_t i = 1; i < a_grid.size(); ++i) {
      const double cur = ground_energy(a_grid[i], b, tmpl, opt);
      if (!(cur > prev)) {
        rep.pass = false;
        rep.violations.emplace_back(a_grid[i], b);
      }
      prev = cur;
    }
  }
  // E decreasing in b at fixed a = a_grid[0].
  {
    const double a = a_grid[0];
    double prev = ground_energy(a, b_grid[0], tmpl, opt);
    for (std::size_t i = 1; i < b_grid.size(); ++i) {
      const double cur = ground_energy(a, b_grid[i], tmpl, opt);
      if (!(cur < prev)) {
        rep.pass = false;
        rep.violations.emplace_back(a, b_grid[i]);
      }
      prev = cur;
    }
  }
  return rep;
}

}  // namespace spherecon
