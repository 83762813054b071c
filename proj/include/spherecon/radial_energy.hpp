// radial_energy.hpp — discrete radial energy functionals of the form
//
//   E(u) = surface * [ 1/2 int (c_kin |u'|^2 + V u^2) r^m dr - int G(r, u) r^m dr ]
//
// on a RadialMesh (trapezoid quadrature, kinetic term from interval slopes).
// The gradient is the exact derivative of the discrete energy. A Nehari
// projection (unique maximizer of t -> E(tu)) and a preconditioned-descent /
// Newton driver operate on top of it. Local is any type providing
//   double g(std::size_t j, double s), G(std::size_t j, double s),
//   double gp(std::size_t j, double s)   [dg/ds]
// with g odd and G even in s.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "spherecon/kernels.hpp"
#include "spherecon/radial_operator.hpp"

namespace spherecon {

struct TracePoint {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<TracePoint> trace_tail = {})
      : std::runtime_error(what), trace(std::move(trace_tail)) {}
  std::vector<TracePoint> trace;
};

struct DescentOptions {
  double grad_tol = 1e-8;         // hard success criterion
  double stall_accept_tol = 0.0;  // 0 -> same as grad_tol; otherwise accept a
                                  // roundoff-floor stall below this level
  int max_iters = 20000;
  double armijo = 1e-4;
  double newton_threshold = 1e-4;  // grad_norm below which Newton polish starts
  bool nonnegative = true;
  bool record_trace = true;
};

struct DescentResult {
  std::vector<double> u;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iters = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

template <class Local>
struct RadialEnergy {
  const RadialMesh* mesh = nullptr;
  double c_kin = 1.0;
  double surface = 1.0;
  std::vector<double> V;  // nodal values
  bool clamp_left = false;
  bool clamp_right = true;
  Local local;

  std::size_t n() const { return mesh->size(); }

  // int (c_kin |u'|^2 + V u^2) r^m dr, times surface.
  double quad_form(std::span<const double> u) const {
    const auto& m = *mesh;
    const double kin = kernels::block_reduce(m.h.size(), [&](std::size_t i) {
      const double du = (u[i + 1] - u[i]) / m.h[i];
      return m.face_a[i] * du * du * m.h[i];
    });
    const double pot = kernels::block_reduce(
        u.size(), [&](std::size_t j) { return m.node_w[j] * V[j] * u[j] * u[j]; });
    return surface * (c_kin * kin + pot);
  }

  double nonlinear_integral(std::span<const double> u, double t = 1.0) const {
    const auto& m = *mesh;
    return surface * kernels::block_reduce(u.size(), [&](std::size_t j) {
             return m.node_w[j] * local.G(j, t * u[j]);
           });
  }

  // int g(r, t u) u r^m dr, times surface.
  double pairing(std::span<const double> u, double t = 1.0) const {
    const auto& m = *mesh;
    return surface * kernels::block_reduce(u.size(), [&](std::size_t j) {
             return m.node_w[j] * local.g(j, t * u[j]) * u[j];
           });
  }

  double energy(std::span<const double> u) const {
    return 0.5 * quad_form(u) - nonlinear_integral(u);
  }

  // Exact derivative of the discrete energy with respect to nodal values.
  void gradient(std::span<const double> u, std::span<double> out) const {
    const auto& m = *mesh;
    const std::size_t nn = u.size();
    kernels::parallel_fill(out, [&](std::size_t j) {
      double kin = 0.0;
      if (j > 0) kin += m.face_a[j - 1] * (u[j] - u[j - 1]) / m.h[j - 1];
      if (j + 1 < nn) kin -= m.face_a[j] * (u[j + 1] - u[j]) / m.h[j];
      return surface * (c_kin * kin + m.node_w[j] * (V[j] * u[j] - local.g(j, u[j])));
    });
    if (clamp_left) out[0] = 0.0;
    if (clamp_right) out[nn - 1] = 0.0;
  }

  // L^2(r^m dr)-consistent norm of the gradient representative.
  double grad_norm(std::span<const double> grad) const {
    const auto& m = *mesh;
    const double s2 = kernels::block_reduce(grad.size(), [&](std::size_t j) {
      if (m.node_w[j] <= 0.0) return 0.0;
      const double rep = grad[j] / (surface * m.node_w[j]);
      return m.node_w[j] * rep * rep;
    });
    return std::sqrt(surface * s2);
  }

  double sup_norm(std::span<const double> u) const { return kernels::max_abs(u); }

  // Unique maximizer of t -> E(tu) for u >= 0 with mass where superlinear
  // growth is active. Throws SolverError if no finite maximizer exists.
  double t_star(std::span<const double> u) const {
    const double A = quad_form(u);
    if (!(A > 0.0)) throw std::domain_error("t_star: trial function vanishes");
    auto phi = [&](double t) { return A - pairing(u, t) / t; };
    double hi = 1.0;
    int guard = 0;
    while (phi(hi) > 0.0) {
      hi *= 2.0;
      if (++guard > 60)
        throw SolverError("t_star: no finite Nehari maximizer (trial has no superlinear mass)");
    }
    double lo = 0.5 * hi;
    guard = 0;
    while (phi(lo) < 0.0) {
      hi = lo;
      lo *= 0.5;
      if (++guard > 200) break;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Preconditioner: c_kin * stiffness + V mass, clamped rows set to identity.
  Tridiag preconditioner() const {
    const auto& m = *mesh;
    const std::size_t nn = m.size();
    Tridiag P;
    P.diag.assign(nn, 0.0);
    P.lower.assign(nn - 1, 0.0);
    P.upper.assign(nn - 1, 0.0);
    for (std::size_t i = 0; i + 1 < nn; ++i) {
      const double s = c_kin * m.face_a[i] / m.h[i];
      P.diag[i] += s;
      P.diag[i + 1] += s;
      P.lower[i] -= s;
      P.upper[i] -= s;
    }
    for (std::size_t j = 0; j < nn; ++j) P.diag[j] += m.node_w[j] * V[j];
    auto clamp_row = [&](std::size_t j) {
      P.diag[j] = 1.0;
      if (j > 0) P.lower[j - 1] = 0.0;
      if (j + 1 < nn) P.upper[j] = 0.0;
    };
    if (clamp_left) clamp_row(0);
    if (clamp_right) clamp_row(nn - 1);
    return P;
  }

  // Newton matrix at u: c_kin * stiffness + diag(node_w .* (V - g'(u))).
  Tridiag newton_matrix(std::span<const double> u) const {
    Tridiag J = preconditioner();
    const auto& m = *mesh;
    const std::size_t nn = m.size();
    for (std::size_t j = 0; j < nn; ++j) {
      if ((clamp_left && j == 0) || (clamp_right && j == nn - 1)) continue;
      J.diag[j] -= m.node_w[j] * local.gp(j, u[j]);
    }
    return J;
  }
};

namespace detail {

inline void clip_negative(std::vector<double>& u) {
  for (auto& v : u) v = std::max(v, 0.0);
}

}  // namespace detail

// Nehari-constrained minimization: descend the scale-invariant value function
// v -> E(t*(v) v) with a preconditioned gradient (the energy strictly
// decreases along accepted steps), then polish with damped Newton on the
// Euler-Lagrange system until grad_tol is met.
template <class Local>
DescentResult nehari_descent(const RadialEnergy<Local>& E, std::vector<double> u0,
                             const DescentOptions& opt = {}) {
  const std::size_t nn = E.n();
  if (u0.size() != nn) throw std::invalid_argument("nehari_descent: seed size mismatch");
  if (E.clamp_left) u0.front() = 0.0;
  if (E.clamp_right) u0.back() = 0.0;
  if (opt.nonnegative) detail::clip_negative(u0);

  const double seed_sup = kernels::max_abs(u0);
  if (!(seed_sup > 0.0)) throw SolverError("nehari_descent: zero seed");

  std::vector<double> u = std::move(u0);
  {
    const double t0 = E.t_star(u);
    for (auto& v : u) v *= t0;
  }

  const Tridiag P = E.preconditioner();
  std::vector<double> grad(nn), dir(nn), cand(nn);
  DescentResult res;
  double J_u = E.energy(u);
  bool newton_phase = false;
  const double accept_tol = opt.stall_accept_tol > 0.0 ? opt.stall_accept_tol : opt.grad_tol;
  double best_gn = std::numeric_limits<double>::infinity();
  std::vector<double> best_u;
  int since_improved = 0;

  for (int iter = 0; iter < opt.max_iters; ++iter) {
    E.gradient(u, grad);
    const double gn = E.grad_norm(grad);
    if (opt.record_trace) res.trace.push_back({iter, J_u, gn});
    res.iters = iter;
    if (gn < opt.grad_tol) {
      res.converged = true;
      break;
    }
    if (gn < 0.9 * best_gn) {
      best_gn = gn;
      best_u = u;
      since_improved = 0;
    } else if (++since_improved >= 8 && best_gn < accept_tol) {
      // Roundoff floor reached below the acceptance tolerance.
      u = best_u;
      res.converged = true;
      break;
    }
    if (E.sup_norm(u) < 1e-12 * seed_sup)
      throw SolverError("nehari_descent: iterate collapsed to zero", res.trace);

    if (!newton_phase && gn < opt.newton_threshold) newton_phase = true;

    bool stepped = false;
    if (newton_phase) {
      const Tridiag Jm = E.newton_matrix(u);
      bool solved = true;
      std::vector<double> delta;
      try {
        delta = thomas_solve(Jm, grad);
      } catch (const std::runtime_error&) {
        solved = false;
      }
      if (solved) {
        double damp = 1.0;
        for (int k = 0; k < 30; ++k, damp *= 0.5) {
          for (std::size_t j = 0; j < nn; ++j) cand[j] = u[j] - damp * delta[j];
          if (opt.nonnegative) detail::clip_negative(cand);
          std::vector<double> gcand(nn);
          E.gradient(cand, gcand);
          if (E.grad_norm(gcand) < gn) {
            u = cand;
            J_u = E.energy(u);
            stepped = true;
            break;
          }
        }
      }
      if (!stepped) newton_phase = false;  // fall back to descent this iteration
    }

    if (!stepped) {
      dir = thomas_solve(P, grad);
      const double slope = kernels::dot(grad, dir);
      double eta = 1.0;
      for (int k = 0; k < 50; ++k, eta *= 0.5) {
        for (std::size_t j = 0; j < nn; ++j) cand[j] = u[j] - eta * dir[j];
        if (opt.nonnegative) detail::clip_negative(cand);
        if (!(kernels::max_abs(cand) > 0.0)) continue;
        double t;
        try {
          t = E.t_star(cand);
        } catch (const SolverError&) {
          continue;
        }
        std::vector<double> proj(nn);
        for (std::size_t j = 0; j < nn; ++j) proj[j] = t * cand[j];
        const double J_new = E.energy(proj);
        if (J_new <= J_u - opt.armijo * eta * slope) {
          u = std::move(proj);
          J_u = J_new;
          stepped = true;
          break;
        }
      }
      if (!stepped) {
        // No productive descent step; force a Newton attempt next round or give up.
        if (newton_phase)
          throw SolverError("nehari_descent: line search stalled", res.trace);
        newton_phase = true;
      }
    }
  }

  if (!res.converged)
    throw SolverError("nehari_descent: not converged within max_iters", res.trace);
  E.gradient(u, grad);
  res.grad_norm = E.grad_norm(grad);
  res.energy = E.energy(u);
  res.u = std::move(u);
  return res;
}

}  // namespace spherecon
