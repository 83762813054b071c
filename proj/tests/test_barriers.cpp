#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spherecon/asymptotics.hpp"
#include "spherecon/barriers.hpp"

using namespace spherecon;

namespace {

PenalizedProblem standard_problem(double eps, int n = 8192) {
  PenalizationParams params = PenalizationParams::defaults(3);
  auto pen = PenalizedNonlinearity::make(1.2, 2.8, Nonlinearity::pure_power(3.0),
                                         RadialPotential::shifted_polynomial(0.1, 1.0, 2.0),
                                         RadialPotential::constant(1.0), params, eps, 3);
  return PenalizedProblem::make(3, eps, std::move(pen), RadialGrid{0.1, 9.0, n});
}

double standard_r_star() { return (14.0 + std::sqrt(14.0 * 14.0 - 4.0 * 5.0 * 8.2)) / 10.0; }

}  // namespace

TEST_CASE("d_H radial restriction") {
  CHECK(d_H(2.0, 2.0) == 0.0);
  CHECK(d_H(1.0, 3.0) == 2.0);
  for (double a : {0.3, 1.7, 4.0})
    for (double b : {0.5, 2.2, 6.0}) CHECK(d_H(a, b) == d_H(b, a));
}

TEST_CASE("peak barrier evaluation and constructor bound") {
  const double inf_V = 0.1, mu = 0.5, eps = 0.05;
  const auto b = PeakBarrier::make(2.0, 0.4, 0.2, eps, inf_V, mu);
  // At the center: cosh(lambda R / eps), the maximum over the ball.
  CHECK(b(2.0) == doctest::Approx(std::cosh(0.2 * 0.4 / eps)));
  // At distance R: cosh(0) = 1.
  CHECK(b(2.4) == doctest::Approx(1.0));
  CHECK(b(1.6) == doctest::Approx(1.0));
  // lambda^2 >= (1 - mu) inf V is rejected.
  CHECK_THROWS_AS(PeakBarrier::make(2.0, 0.4, 0.23, eps, inf_V, mu), std::domain_error);
}

TEST_CASE("peak barrier supersolution margin at eps = 0.02") {
  const auto problem = standard_problem(0.02);
  const double rbar = standard_r_star();
  const double R = 0.38;
  double inf_ball_V = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 512; ++i) {
    const double r = rbar - R + 2.0 * R * i / 512.0;
    inf_ball_V = std::min(inf_ball_V, problem.pen.V(r));
  }
  const double lambda =
      feasible_peak_lambda(inf_ball_V, problem.pen.params.mu, 0.02, rbar, R, 3);
  const auto b = PeakBarrier::make(rbar, R, lambda, 0.02, inf_ball_V, problem.pen.params.mu);
  const auto chk = peak_barrier_check(b, problem.pen.V, problem.pen.params.mu, problem.mesh, 3);
  CHECK(chk.min_margin >= 0.0);
  CHECK(chk.eps_threshold > 0.0);

  // Pushing lambda to the Hardy-margin limit breaks the margin at this eps;
  // the reported threshold is consistent with that.
  const double lambda_big = 0.99 * std::sqrt((1.0 - 0.5) * inf_ball_V);
  const auto b_big = PeakBarrier::make(rbar, R, lambda_big, 0.02, inf_ball_V, 0.5);
  const auto chk_big =
      peak_barrier_check(b_big, problem.pen.V, problem.pen.params.mu, problem.mesh, 3);
  CHECK(chk_big.min_margin < 0.0);
  CHECK(chk_big.eps_threshold < 0.02);
}

TEST_CASE("outer barrier: maximum principle bounds and monotonicity") {
  // kappa -> 0 keeps the system an M-matrix: 0 <= Psi <= 1 exactly.
  PenalizationParams params = PenalizationParams::defaults(3);
  params.kappa = 1e-12;
  auto pen = PenalizedNonlinearity::make(1.2, 2.8, Nonlinearity::pure_power(3.0),
                                         RadialPotential::shifted_polynomial(0.1, 1.0, 2.0),
                                         RadialPotential::constant(1.0), params, 0.05, 3);
  const auto problem = PenalizedProblem::make(3, 0.05, pen, RadialGrid{0.1, 9.0, 4096});
  const auto outer = solve_outer_barrier(problem);
  CHECK(outer.max_value <= 1.0 + 1e-12);
  CHECK(outer.min_exterior > 0.0);
  CHECK(outer.monotone);

  // Default kappa at small eps: still inside [0, 1 + tol], monotone.
  const auto problem2 = standard_problem(0.02, 4096);
  const auto outer2 = solve_outer_barrier(problem2);
  CHECK(outer2.max_value <= 1.0 + 1e-9);
  CHECK(outer2.min_exterior > 0.0);
  CHECK(outer2.monotone);
}

TEST_CASE("outer barrier decay rate against the constant-coefficient oracle") {
  // Large constant V outside (and everywhere): the exterior two-point problem
  // has a nearly exponential solution with rate sqrt((1-mu) V)/eps.
  const double eps = 0.01, Vc = 9.0, mu = 0.5;
  PenalizationParams params = PenalizationParams::defaults(3);
  auto pen = PenalizedNonlinearity::make(1.2, 2.8, Nonlinearity::pure_power(3.0),
                                         RadialPotential::constant(Vc),
                                         RadialPotential::constant(1.0), params, eps, 3);
  const auto problem = PenalizedProblem::make(3, eps, pen, RadialGrid{0.8, 4.0, 8192});
  const auto outer = solve_outer_barrier(problem);

  // Fit on a window clear of both the boundary layer and the truncation.
  const auto& m = problem.mesh;
  std::size_t i0 = 0, i1 = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m.r[j] < 2.85) i0 = j;
    if (m.r[j] < 3.00) i1 = j;
  }
  const double rate = fit_decay_rate(m.r, outer.psi, i0, i1);
  const double predicted = std::sqrt((1.0 - mu) * Vc) / eps;
  CHECK(std::fabs(rate - predicted) / predicted < 0.01);
}

TEST_CASE("outer barrier power tail under quadratic V decay (log grid)") {
  // V = v0 / r^2 outside: log Psi vs log r slope bounded by the improved
  // decay exponent -(N-2)/2 - sqrt(((N-2)/2)^2 - kappa + lambda^2/eps^2).
  const double eps = 0.1, v0 = 2.0, mu = 0.5, kappa = 0.125;
  PenalizationParams params;
  params.kappa = kappa;
  params.beta = 1.0;
  params.mu = mu;
  auto pen = PenalizedNonlinearity::make(1.2, 2.8, Nonlinearity::pure_power(3.0),
                                         RadialPotential::power(v0, -2.0),
                                         RadialPotential::constant(1.0), params, eps, 3);
  const auto problem =
      PenalizedProblem::make(3, eps, pen, RadialGrid{0.5, 500.0, 8192, GridSpacing::LogUniform});
  const auto outer = solve_outer_barrier(problem);

  const auto& m = problem.mesh;
  std::vector<double> logr(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) logr[j] = std::log(m.r[j]);
  std::size_t i0 = 0, i1 = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m.r[j] < 10.0) i0 = j;
    if (m.r[j] < 100.0) i1 = j;
  }
  const double slope = -fit_decay_rate(logr, outer.psi, i0, i1);  // d log(psi) / d log(r)
  const double lambda_sq = (1.0 - mu) * v0;
  const double bound = -0.5 - std::sqrt(0.25 - kappa + lambda_sq / (eps * eps));
  CHECK(slope <= bound + 0.05);
  // A fortiori the eps-uniform algebraic bound psi <= C (1+r)^{-(N-2)}.
  CHECK(slope <= -1.0);
}

TEST_CASE("exterior operator positivity for all legal kappa samples") {
  for (double frac : {0.1, 0.5, 0.9}) {
    PenalizationParams params = PenalizationParams::defaults(3);
    params.kappa = frac * 0.25;
    auto pen = PenalizedNonlinearity::make(1.2, 2.8, Nonlinearity::pure_power(3.0),
                                           RadialPotential::shifted_polynomial(0.1, 1.0, 2.0),
                                           RadialPotential::constant(1.0), params, 0.05, 3);
    const auto problem = PenalizedProblem::make(3, 0.05, pen, RadialGrid{0.1, 9.0, 2048});
    const auto est = exterior_operator_positivity(problem);
    CHECK(est.converged);
    CHECK(est.lambda_min >= -1e-8);
  }
}

TEST_CASE("envelope regimes: values, consistency, monotonicity, ordering") {
  GrowthClass cls;
  cls.at_origin = OriginClass::G0_1;
  cls.at_infinity = InfinityClass::Ginf_2;
  const double eps = 0.05, lambda = 0.3;

  const auto base = make_envelope(EnvelopeRegime::Base, cls, 1.0, lambda, 0.0, eps, 3);
  // d = 0: no exponential factor, pure algebraic decay.
  for (double r : {0.5, 2.0, 5.0})
    CHECK(envelope_eval(base, r, r) == doctest::Approx(std::pow(1.0 + r * r, -0.5)));

  // Monotone decreasing in d at fixed |x|.
  double prev = envelope_eval(base, 3.0, 3.0);
  for (double shift : {0.5, 1.0, 2.0, 4.0}) {
    const double v = envelope_eval(base, 3.0, 3.0 + shift);
    CHECK(v < prev);
    prev = v;
  }

  // Quadratic-infinity regime tightens the base envelope for large r when
  // nu/eps > N-2 (same C, same lambda).
  const auto quad = make_envelope(EnvelopeRegime::QuadInfinity, cls, 1.0, lambda, lambda, eps, 3);
  for (double r : {2.0, 5.0, 8.0})
    CHECK(envelope_eval(quad, r, 2.0) <= envelope_eval(base, r, 2.0) + 1e-300);

  // Regime / growth-class consistency is enforced.
  CHECK_THROWS_AS(make_envelope(EnvelopeRegime::StretchedInfinity, cls, 1.0, lambda, 0.0, eps, 3),
                  std::invalid_argument);
  GrowthClass cls3;
  cls3.at_infinity = InfinityClass::Ginf_3;
  cls3.alpha = 1.0;
  CHECK_THROWS_AS(make_envelope(EnvelopeRegime::QuadInfinity, cls3, 1.0, lambda, 0.0, eps, 3),
                  std::invalid_argument);

  // Stretched-origin regime (gamma > 2): factor tends to 1 on the sphere.
  GrowthClass clsO;
  clsO.at_origin = OriginClass::G0_3;
  clsO.gamma = 3.0;
  const auto st = make_envelope(EnvelopeRegime::StretchedOrigin, clsO, 1.0, lambda, 0.0, eps, 3);
  CHECK(envelope_eval(st, 2.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("glued barrier dominates the certified solution outside the peak ball") {
  const auto problem = standard_problem(0.02);
  PenalizedSolveOptions opt;
  opt.seed_radius = standard_r_star();
  opt.grad_tol = 1e-12;
  opt.stall_accept_tol = 1e-8;
  const auto sol = solve(problem, opt);
  CHECK(certify_original(problem, sol).certified);

  const auto pk = peak_extract(problem.mesh, sol.u);
  const auto outer = solve_outer_barrier(problem);
  const double R = 0.5 * std::min(pk.r_eps - 1.2, 2.8 - pk.r_eps);
  double inf_ball_V = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 512; ++i) {
    const double r = pk.r_eps - R + 2.0 * R * i / 512.0;
    inf_ball_V = std::min(inf_ball_V, problem.pen.V(r));
  }
  const double lambda =
      feasible_peak_lambda(inf_ball_V, problem.pen.params.mu, problem.eps, pk.r_eps, R, 3);
  const auto barrier = glue_barrier(problem, outer, pk.r_eps, lambda, 1.0);
  const auto rep = barrier_comparison(problem, sol.u, barrier);
  CHECK(rep.sup_ball > 0.0);
  CHECK(rep.pass);
}

TEST_CASE("fit_decay_rate recovers a synthetic exponential") {
  std::vector<double> r(101), v(101);
  for (int i = 0; i <= 100; ++i) {
    r[static_cast<std::size_t>(i)] = 1.0 + 0.01 * i;
    v[static_cast<std::size_t>(i)] = 3.0 * std::exp(-4.2 * r[static_cast<std::size_t>(i)]);
  }
  CHECK(fit_decay_rate(r, v, 0, 101) == doctest::Approx(4.2).epsilon(1e-10));
  CHECK_THROWS_AS(fit_decay_rate(r, v, 0, 1), std::invalid_argument);
}
