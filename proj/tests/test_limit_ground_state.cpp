#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spherecon/limit_ground_state.hpp"

using namespace spherecon;

namespace {

// Closed-form soliton of -w'' + a w = b w^3 on the line:
// w(rho) = sqrt(2a/b) sech(sqrt(a) rho).
double soliton(double a, double b, double rho) {
  return std::sqrt(2.0 * a / b) / std::cosh(std::sqrt(a) * rho);
}

LimitProblem cubic_problem(int d, double a, double b) {
  return LimitProblem::make(d, a, b, Nonlinearity::pure_power(3.0));
}

}  // namespace

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(cubic_problem(4, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cubic_problem(1, 0.0, 1.0), std::invalid_argument);
  // d = 3 subcriticality: p < 5.
  CHECK_THROWS_AS(LimitProblem::make(3, 1.0, 1.0, Nonlinearity::pure_power(6.0)),
                  std::invalid_argument);
  CHECK_NOTHROW(LimitProblem::make(3, 1.0, 1.0, Nonlinearity::pure_power(3.0)));
}

TEST_CASE("d=1 soliton oracle: profile and energy") {
  LimitSolveOptions opt;
  opt.n = 4097;
  opt.rho_max = 20.0;
  const GroundState gs = solve_limit(cubic_problem(1, 1.0, 1.0), LimitMethod::Shooting, opt);

  CHECK(gs.w0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  double sup_err = 0.0;
  for (std::size_t j = 0; j < gs.mesh.size(); ++j)
    sup_err = std::max(sup_err, std::fabs(gs.w[j] - soliton(1.0, 1.0, gs.mesh.r[j])));
  CHECK(sup_err < 1e-6);

  // Closed-form integrals: int w'^2 = 4/3, int w^2 = 4, int w^4 = 16/3 -> E = 4/3.
  CHECK(gs.energy == doctest::Approx(4.0 / 3.0).epsilon(1e-5));
  CHECK(gs.nehari_residual < 1e-6);
}

TEST_CASE("d=1 scaling identity: w_{4,1}(rho) = 2 w_{1,1}(2 rho)") {
  LimitSolveOptions opt;
  opt.n = 4097;
  const GroundState gs = solve_limit(cubic_problem(1, 4.0, 1.0), LimitMethod::Shooting, opt);
  CHECK(gs.w0 == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-8));
  for (std::size_t j = 0; j < gs.mesh.size(); j += 97) {
    const double rho = gs.mesh.r[j];
    CHECK(gs.w[j] == doctest::Approx(2.0 * soliton(1.0, 1.0, 2.0 * rho)).epsilon(1e-6));
  }
  // E(4,1) = (4/3) a^{3/2} = 32/3.
  CHECK(gs.energy == doctest::Approx(32.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("d=3 ground state against the independent RK4 oracle") {
  // Frozen from oracles::ShootOracle{d=3,a=b=1,p=3,rho_max=30,h=1e-4}:
  const double w0_frozen = 4.3373876495;

  oracles::ShootOracle oracle;
  oracle.d = 3;
  oracle.h = 2e-4;
  const double w0_oracle = oracle.solve_w0();
  CHECK(w0_oracle == doctest::Approx(w0_frozen).epsilon(1e-7));

  const GroundState gs = solve_limit(cubic_problem(3, 1.0, 1.0));
  CHECK(gs.w0 == doctest::Approx(w0_frozen).epsilon(1e-6));

  // Pohozaev: for d = 3, p = 3, E(1,1) = ||w||_{L2}^2.
  double l2 = 0.0;
  for (std::size_t j = 0; j < gs.mesh.size(); ++j)
    l2 += gs.mesh.node_w[j] * gs.w[j] * gs.w[j];
  l2 *= 4.0 * std::numbers::pi;
  CHECK(gs.energy == doctest::Approx(l2).epsilon(1e-4));
}

TEST_CASE("profile positivity, strict decrease, tail smallness, Nehari identity") {
  for (int d : {1, 2, 3}) {
    const GroundState gs = solve_limit(cubic_problem(d, 1.3, 0.7));
    CHECK(gs.w.front() == gs.w0);
    CHECK(gs.w[gs.mesh.size() - 1] < 1e-8 * gs.w0);
    CHECK(gs.nehari_residual < 1e-6);
    for (std::size_t j = 0; j + 1 < gs.mesh.size(); ++j) {
      CHECK(gs.w[j] > 0.0);
      CHECK(gs.w[j + 1] < gs.w[j]);
    }
  }
}

TEST_CASE("ground energy scaling laws (iv) and (v)") {
  // (iv): E(la, lb) = l^{1-d/2} E(a, b); (v): pure-power closed form.
  for (int d : {1, 3}) {
    const double E11 = ground_energy(cubic_problem(d, 1.0, 1.0));
    for (double lambda : {0.5, 2.0, 5.0}) {
      const double El = ground_energy(cubic_problem(d, lambda, lambda));
      const double predicted = std::pow(lambda, 1.0 - 0.5 * d) * E11;
      CHECK(std::fabs(El - predicted) / predicted < 1e-4);
    }
    for (double a : {0.5, 1.0, 2.0}) {
      for (double b : {0.5, 1.0, 2.0}) {
        const double E = ground_energy(cubic_problem(d, a, b));
        const double predicted =
            E11 * std::pow(a, (3.0 + 1.0) / (3.0 - 1.0) - 0.5 * d) * std::pow(b, -1.0);
        CHECK(std::fabs(E - predicted) / predicted < 1e-4);
      }
    }
  }
}

TEST_CASE("d=1 closed-form energy curves") {
  // E(a, 1) = (4/3) a^{3/2} and E(1, b) = (4/3) / b.
  for (double a : {0.5, 1.0, 2.0, 4.0})
    CHECK(ground_energy(cubic_problem(1, a, 1.0)) ==
          doctest::Approx(4.0 / 3.0 * std::pow(a, 1.5)).epsilon(1e-5));
  for (double b : {0.5, 1.0, 2.0, 4.0})
    CHECK(ground_energy(cubic_problem(1, 1.0, b)) == doctest::Approx(4.0 / 3.0 / b).epsilon(1e-5));
}

TEST_CASE("energy monotonicity in a and b") {
  const auto tmpl = cubic_problem(1, 1.0, 1.0);
  const std::vector<double> a_grid = {0.5, 0.8, 1.0, 1.5, 2.0};
  const std::vector<double> b_grid = {0.5, 0.8, 1.0, 1.5, 2.0};
  const auto rep = check_energy_monotonicity(tmpl, a_grid, b_grid);
  CHECK(rep.pass);
  CHECK(rep.violations.empty());
  CHECK_THROWS_AS(check_energy_monotonicity(tmpl, std::vector<double>{1.0}, b_grid),
                  std::invalid_argument);
}

TEST_CASE("nehari projection") {
  const auto pr = cubic_problem(1, 1.0, 1.0);
  const GroundState gs = solve_limit(pr, LimitMethod::Shooting, {});

  // Ground state projects to t* = 1.
  CHECK(nehari_t_star(pr, gs.mesh, gs.w) == doctest::Approx(1.0).epsilon(1e-6));

  // Doubled ground state, p = 3: t* = 1/2 by homogeneity.
  std::vector<double> doubled(gs.w);
  for (auto& v : doubled) v *= 2.0;
  CHECK(nehari_t_star(pr, gs.mesh, doubled) == doctest::Approx(0.5).epsilon(1e-6));

  // Closed-form maximizer for pure powers on a generic trial function.
  std::vector<double> trial(gs.mesh.size());
  for (std::size_t j = 0; j < trial.size(); ++j)
    trial[j] = std::exp(-0.7 * gs.mesh.r[j] * gs.mesh.r[j]);
  trial.back() = 0.0;
  auto E = limit_energy(pr, gs.mesh);
  const double quad = E.quad_form(trial);
  const double quart = E.pairing(trial);  // b int u^4 at t = 1
  const double closed = std::sqrt(quad / quart);
  CHECK(nehari_t_star(pr, gs.mesh, trial) == doctest::Approx(closed).epsilon(1e-10));

  std::vector<double> zero(gs.mesh.size(), 0.0);
  CHECK_THROWS_AS(nehari_t_star(pr, gs.mesh, zero), std::domain_error);
}

TEST_CASE("shooting and Nehari-descent agree on five random problems") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> adist(0.5, 3.0), bdist(0.5, 3.0);
  std::uniform_real_distribution<double> pdist(2.0, 4.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const double p = pdist(rng);
    const auto pr = LimitProblem::make(d, adist(rng), bdist(rng), Nonlinearity::pure_power(p));
    LimitSolveOptions opt;
    opt.n = 2049;
    const GroundState by_shoot = solve_limit(pr, LimitMethod::Shooting, opt);
    const GroundState by_descent = solve_limit(pr, LimitMethod::NehariDescent, opt);
    CHECK(std::fabs(by_shoot.energy - by_descent.energy) / by_shoot.energy < 1e-4);
  }
}

TEST_CASE("discrete gradient of I_{a,b} matches finite differences") {
  const auto pr = cubic_problem(1, 1.2, 0.8);
  const auto mesh = RadialMesh::uniform(0.0, 12.0, 257, 0);
  auto E = limit_energy(pr, mesh);

  std::vector<double> u(mesh.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = 1.3 / std::cosh(mesh.r[j]);
  u.back() = 0.0;

  std::vector<double> grad(u.size());
  E.gradient(u, grad);
  auto func = [&](const std::vector<double>& v) { return E.energy(v); };

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dir = oracles::random_direction(u.size(), rng);
    const double fd = oracles::directional_fd(func, u, dir, 1e-6);
    double an = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) an += grad[j] * dir[j];
    CHECK(an == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("monotonicity detector flags equal neighbors") {
  // A detector-level check: feeding a grid with a repeated value must fail.
  const auto tmpl = cubic_problem(1, 1.0, 1.0);
  const std::vector<double> a_grid = {1.0, 1.0};
  const std::vector<double> b_grid = {0.5, 1.0};
  const auto rep = check_energy_monotonicity(tmpl, a_grid, b_grid);
  CHECK_FALSE(rep.pass);
}
