#include "spherecon/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spherecon/nonlinearity.hpp"

namespace spherecon {

double d_H(double x_r, double y_r) { return std::fabs(x_r - y_r); }

PeakBarrier PeakBarrier::make(double center, double R, double lambda, double eps,
                              double inf_lambda_V, double mu) {
  if (!(center > 0.0 && R > 0.0 && eps > 0.0))
    throw std::invalid_argument("PeakBarrier: center, R, eps must be positive");
  if (!(lambda > 0.0 && lambda * lambda < (1.0 - mu) * inf_lambda_V))
    throw std::domain_error("PeakBarrier: requires lambda^2 < (1 - mu) inf_Lambda V");
  return PeakBarrier{center, R, lambda, eps};
}

double PeakBarrier::operator()(double r) const {
  return std::cosh(lambda * (R - d_H(r, center)) / eps);
}

double peak_barrier_eval(const PeakBarrier& b, double r) { return b(r); }

double feasible_peak_lambda(double inf_ball_V, double mu, double eps, double center, double R,
                            int N) {
  if (!(center > R && R > 0.0)) throw std::invalid_argument("feasible_peak_lambda: need 0 < R < center");
  const double c = (1.0 - mu) * inf_ball_V;
  const double b = eps * (N - 1) / (center - R);
  const double root = 0.5 * (-b + std::sqrt(b * b + 4.0 * c));
  return 0.95 * root;
}

PeakBarrierCheck peak_barrier_check(const PeakBarrier& b, const RadialPotential& V, double mu,
                                    const RadialMesh& mesh, int N) {
  PeakBarrierCheck chk;
  chk.min_margin = std::numeric_limits<double>::infinity();
  double inf_ball_V = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double r = mesh.r[j];
    const double d = d_H(r, b.center);
    if (d >= b.R || d == 0.0) continue;
    const double arg = b.lambda * (b.R - d) / b.eps;
    const double ch = std::cosh(arg), sh = std::sinh(arg);
    const double sign = r > b.center ? 1.0 : -1.0;
    const double lap = -b.lambda * b.lambda * ch +
                       b.eps * b.lambda * (N - 1) * sign / r * sh;  // -eps^2 Delta Phi
    const double margin = lap + (1.0 - mu) * V(r) * ch;
    chk.min_margin = std::min(chk.min_margin, margin);
    inf_ball_V = std::min(inf_ball_V, V(r));
  }
  const double gap = (1.0 - mu) * inf_ball_V - b.lambda * b.lambda;
  chk.eps_threshold =
      gap > 0.0 ? gap * (b.center - b.R) / (b.lambda * (N - 1)) : 0.0;
  return chk;
}

// ---------------------------------------------------------------------------

namespace {

// Solve the linear exterior equation on nodes [lo, hi] (global indices) with
// Dirichlet data value_lo at lo and value_hi at hi; writes into psi.
void solve_piece(const PenalizedProblem& pr, std::size_t lo, std::size_t hi, double value_lo,
                 double value_hi, std::vector<double>& psi) {
  const auto& m = pr.mesh;
  const std::size_t ni = hi - lo - 1;
  if (ni < 1) throw std::invalid_argument("solve_outer_barrier: exterior piece too thin");
  const double e2 = pr.eps * pr.eps;
  Tridiag A;
  A.diag.assign(ni, 0.0);
  A.lower.assign(ni - 1, 0.0);
  A.upper.assign(ni - 1, 0.0);
  std::vector<double> rhs(ni, 0.0);
  for (std::size_t jj = 0; jj < ni; ++jj) {
    const std::size_t j = lo + 1 + jj;
    const double sl = e2 * m.face_a[j - 1] / m.h[j - 1];
    const double sr = e2 * m.face_a[j] / m.h[j];
    const double r = m.r[j];
    const double c = m.node_w[j] * (-e2 * hardy_weight(r, pr.pen.params, pr.N) +
                                    (1.0 - pr.pen.params.mu) * pr.Vnode[j]);
    A.diag[jj] = sl + sr + c;
    if (jj > 0) A.lower[jj - 1] = -sl;
    if (jj + 1 < ni) A.upper[jj] = -sr;
    if (jj == 0) rhs[jj] += sl * value_lo;
    if (jj + 1 == ni) rhs[jj] += sr * value_hi;
  }
  const auto x = thomas_solve(A, rhs);
  psi[lo] = value_lo;
  psi[hi] = value_hi;
  for (std::size_t jj = 0; jj < ni; ++jj) psi[lo + 1 + jj] = x[jj];
}

}  // namespace

OuterBarrier solve_outer_barrier(const PenalizedProblem& problem) {
  const auto& m = problem.mesh;
  const std::size_t n = m.size();
  // Lambda-side anchor nodes: last node <= r_lo and first node >= r_hi.
  std::size_t j_lo = 0, j_hi = n - 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (m.r[j] <= problem.pen.r_lo) j_lo = j;
    if (m.r[n - 1 - j] >= problem.pen.r_hi) j_hi = n - 1 - j;
  }
  OuterBarrier out;
  out.psi.assign(n, 1.0);
  solve_piece(problem, 0, j_lo, 0.0, 1.0, out.psi);
  solve_piece(problem, j_hi, n - 1, 1.0, 0.0, out.psi);

  out.max_value = *std::max_element(out.psi.begin(), out.psi.end());
  out.min_exterior = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < j_lo; ++j)
    out.min_exterior = std::min(out.min_exterior, out.psi[j]);
  for (std::size_t j = j_hi + 1; j + 1 < n; ++j)
    out.min_exterior = std::min(out.min_exterior, out.psi[j]);
  out.monotone = true;
  for (std::size_t j = 0; j < j_lo; ++j)
    if (out.psi[j] > out.psi[j + 1] + 1e-14) out.monotone = false;
  for (std::size_t j = j_hi; j + 1 < n; ++j)
    if (out.psi[j] < out.psi[j + 1] - 1e-14) out.monotone = false;
  return out;
}

EigenEstimate exterior_operator_positivity(const PenalizedProblem& problem) {
  const auto& m = problem.mesh;
  const std::size_t n = m.size();
  std::size_t j_lo = 0, j_hi = n - 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (m.r[j] <= problem.pen.r_lo) j_lo = j;
    if (m.r[n - 1 - j] >= problem.pen.r_hi) j_hi = n - 1 - j;
  }
  const double e2 = problem.eps * problem.eps;
  EigenEstimate worst;
  worst.lambda_min = std::numeric_limits<double>::infinity();
  for (int piece = 0; piece < 2; ++piece) {
    const std::size_t lo = piece == 0 ? 0 : j_hi;
    const std::size_t hi = piece == 0 ? j_lo : n - 1;
    std::vector<double> nodes(m.r.begin() + static_cast<long>(lo),
                              m.r.begin() + static_cast<long>(hi) + 1);
    RadialMesh sub = RadialMesh::from_nodes(std::move(nodes), problem.N - 1);
    Tridiag S = interior_stiffness(sub);
    const std::size_t ni = sub.size() - 2;
    for (auto& v : S.diag) v *= e2;
    for (auto& v : S.lower) v *= e2;
    for (auto& v : S.upper) v *= e2;
    std::vector<double> c(ni), mass(ni);
    for (std::size_t jj = 0; jj < ni; ++jj) {
      const double r = sub.r[jj + 1];
      c[jj] = -e2 * hardy_weight(r, problem.pen.params, problem.N) +
              (1.0 - problem.pen.params.mu) * problem.pen.V(r);
      mass[jj] = sub.node_w[jj + 1];
    }
    EigenEstimate est = smallest_eigenvalue(S, c, mass);
    if (est.lambda_min < worst.lambda_min) worst = est;
  }
  return worst;
}

// ---------------------------------------------------------------------------

DecayEnvelope make_envelope(EnvelopeRegime regime, const GrowthClass& cls, double C,
                            double lambda, double nu, double eps, int N) {
  DecayEnvelope env;
  env.regime = regime;
  env.C = C;
  env.lambda = lambda;
  env.nu = nu;
  env.eps = eps;
  env.N = N;
  switch (regime) {
    case EnvelopeRegime::Base:
      break;
    case EnvelopeRegime::QuadInfinity:
      if (cls.at_infinity != InfinityClass::Ginf_2)
        throw std::invalid_argument("make_envelope: quadratic-infinity regime needs Ginf_2");
      break;
    case EnvelopeRegime::StretchedInfinity:
      if (cls.at_infinity != InfinityClass::Ginf_3)
        throw std::invalid_argument("make_envelope: stretched-infinity regime needs Ginf_3");
      env.exponent = cls.alpha;
      break;
    case EnvelopeRegime::QuadOrigin:
      if (cls.at_origin != OriginClass::G0_2)
        throw std::invalid_argument("make_envelope: quadratic-origin regime needs G0_2");
      break;
    case EnvelopeRegime::StretchedOrigin:
      if (cls.at_origin != OriginClass::G0_3)
        throw std::invalid_argument("make_envelope: stretched-origin regime needs G0_3");
      env.exponent = cls.gamma;
      break;
  }
  return env;
}

double envelope_eval(const DecayEnvelope& env, double r, double r_eps) {
  if (!(r > 0.0)) throw std::domain_error("envelope_eval: r must be positive");
  const double d = d_H(r, r_eps);
  const double sat = d / (1.0 + d);
  const double le = env.lambda / env.eps;
  switch (env.regime) {
    case EnvelopeRegime::Base:
      return env.C * std::exp(-le * sat) * std::pow(1.0 + r * r, -0.5 * (env.N - 2));
    case EnvelopeRegime::QuadInfinity:
      return env.C * std::exp(-le * sat) * std::pow(1.0 + r, -env.nu / env.eps);
    case EnvelopeRegime::StretchedInfinity:
      return env.C * std::exp(-le * sat * std::pow(1.0 + r, 0.5 * (2.0 - env.exponent)));
    case EnvelopeRegime::QuadOrigin:
      return env.C * std::exp(-le * sat) * std::pow(1.0 + r * r, -0.5 * (env.N - 2)) *
             std::pow(r / (1.0 + r), env.nu / env.eps);
    case EnvelopeRegime::StretchedOrigin:
      return env.C * std::exp(-le * sat * std::pow(r / (1.0 + r), 0.5 * (env.exponent - 2.0)));
  }
  throw std::logic_error("envelope_eval: unknown regime");
}

// ---------------------------------------------------------------------------

GluedBarrier glue_barrier(const PenalizedProblem& problem, const OuterBarrier& outer,
                          double center, double lambda, double rho) {
  GluedBarrier gb;
  gb.lambda = lambda;
  gb.rho = rho;
  gb.center = center;
  // Gluing radius: half the distance from the center to the Lambda boundary.
  gb.R = 0.5 * std::min(center - problem.pen.r_lo, problem.pen.r_hi - center);
  if (!(gb.R > 0.0)) throw std::invalid_argument("glue_barrier: center outside Lambda");
  const double norm = std::cosh(lambda * (gb.R / problem.eps - rho));
  const auto& m = problem.mesh;
  gb.W.resize(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double r = m.r[j];
    const double d = d_H(r, center);
    if (d < gb.R)
      gb.W[j] = std::cosh(lambda * (gb.R - d) / problem.eps) / norm;
    else
      gb.W[j] = outer.psi[j] / norm;
  }
  return gb;
}

ComparisonReport barrier_comparison(const PenalizedProblem& problem, std::span<const double> u,
                                    const GluedBarrier& barrier) {
  ComparisonReport rep;
  const auto& m = problem.mesh;
  const double ball = barrier.rho * problem.eps;
  rep.sup_ball = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j)
    if (d_H(m.r[j], barrier.center) <= ball) rep.sup_ball = std::max(rep.sup_ball, u[j]);
  if (!(rep.sup_ball > 0.0)) {
    rep.pass = false;
    return rep;
  }
  rep.worst_ratio = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (d_H(m.r[j], barrier.center) <= ball) continue;
    const double bound = rep.sup_ball * barrier.W[j];
    if (bound <= 0.0) continue;
    rep.worst_ratio = std::max(rep.worst_ratio, u[j] / bound);
  }
  rep.pass = rep.worst_ratio <= 1.0 + 1e-9;
  return rep;
}

double fit_decay_rate(std::span<const double> r, std::span<const double> values, std::size_t i0,
                      std::size_t i1) {
  if (i1 > r.size() || i0 + 2 > i1)
    throw std::invalid_argument("fit_decay_rate: window too small");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = i0; i < i1; ++i) {
    if (!(values[i] > 0.0)) continue;
    const double x = r[i] - r[i0];
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw std::invalid_argument("fit_decay_rate: not enough positive samples");
  const double nd = static_cast<double>(count);
  const double denom = nd * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_decay_rate: degenerate window");
  const double slope = (nd * sxy - sx * sy) / denom;
  return -slope;
}

}  // namespace spherecon
