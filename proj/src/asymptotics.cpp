#include "spherecon/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spherecon/common.hpp"
#include "spherecon/kernels.hpp"

namespace spherecon {

PenalizedProblem ProblemTemplate::at_eps(double eps) const {
  if (k != N - 1)
    throw std::invalid_argument("ProblemTemplate: the penalized solver requires k = N-1");
  auto pen = PenalizedNonlinearity::make(lambda.r_lo, lambda.r_hi, f, V, K, params, eps, N);
  return PenalizedProblem::make(N, eps, std::move(pen), grid);
}

AuxPotential ProblemTemplate::aux() const {
  if (f.kind == NonlinearityKind::PurePower)
    return AuxPotential::closed_form(N, k, f.p, V, K);
  return AuxPotential::general(N, k, f, V, K);
}

void SweepConfig::validate() const {
  if (eps_list.empty()) throw std::invalid_argument("SweepConfig: empty eps_list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("SweepConfig: eps must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("SweepConfig: eps_list must be strictly decreasing");
  }
}

PeakInfo peak_extract(const RadialMesh& mesh, std::span<const double> u) {
  const double peak = kernels::max_abs(u);
  if (!(peak > 0.0)) throw std::domain_error("peak_extract: degenerate (zero) solution");
  const std::size_t m = kernels::argmax(u);
  PeakInfo info;
  info.at_boundary = (m == 0 || m + 1 == u.size());
  if (info.at_boundary) {
    info.r_eps = mesh.r[m];
    info.peak = u[m];
    return info;
  }
  // Parabolic refinement through the three nodes around the argmax.
  const double um = u[m - 1], u0 = u[m], up = u[m + 1];
  const double denom = um - 2.0 * u0 + up;
  double shift = 0.0;
  if (denom < 0.0) shift = 0.5 * (um - up) / denom;
  shift = std::clamp(shift, -0.5, 0.5);
  const double h = 0.5 * (mesh.r[m + 1] - mesh.r[m - 1]);
  info.r_eps = mesh.r[m] + shift * h;
  info.peak = u0 - 0.25 * (um - up) * shift;
  return info;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> rescale_profile(const RadialMesh& mesh, std::span<const double> u,
                                    double center, double factor) {
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double r_src = center + (mesh.r[j] - center) * factor;
    if (r_src <= mesh.r.front() || r_src >= mesh.r.back()) continue;
    const auto it = std::upper_bound(mesh.r.begin(), mesh.r.end(), r_src);
    const auto i1 = static_cast<std::size_t>(it - mesh.r.begin());
    const std::size_t i0 = i1 - 1;
    const double t = (r_src - mesh.r[i0]) / (mesh.r[i1] - mesh.r[i0]);
    out[j] = (1.0 - t) * u[i0] + t * u[i1];
  }
  if (!out.empty()) {
    out.front() = 0.0;
    out.back() = 0.0;
  }
  return out;
}

}  // namespace

DecayFit decay_fit(const PenalizedProblem& problem, const DiscreteSolution& sol, double r_eps,
                   EnvelopeRegime regime, const GrowthClass& growth) {
  DecayFit fit;
  const auto& m = problem.mesh;
  const auto& u = sol.u;
  const double peak = kernels::max_abs(u);

  // Fit window: a narrow band of right-exterior nodes (the decay rate is a
  // local quantity; V may keep growing further out), past a 2 eps pad,
  // stopping at the solver noise floor and before the Dirichlet boundary
  // layer where truncation steepens the decay.
  // Newton-polished tails stay relatively accurate far below the gradient
  // norm; 1e-14 * peak keeps the fit well inside the trustworthy range.
  const double noise_floor = 1e-14 * peak;
  const double start_r = problem.pen.r_hi + 2.0 * problem.eps;
  const double stop_r =
      std::min(start_r + 0.25, m.r.back() - std::max(0.2, 20.0 * m.h.back()));
  std::size_t i0 = m.size(), i1 = m.size();
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (i0 == m.size() && m.r[j] >= start_r) i0 = j;
    if (i0 != m.size() && (u[j] <= noise_floor || m.r[j] >= stop_r || j + 1 == m.size())) {
      i1 = j;
      break;
    }
  }
  if (i0 >= m.size() || i1 <= i0 + 8)
    throw std::invalid_argument("decay_fit: fit region empty (peak too close to truncation)");

  const double rate = fit_decay_rate(m.r, u, i0, i1);
  fit.lambda_fit = rate * problem.eps;
  fit.vacuous = !(fit.lambda_fit > 0.0);

  // Envelope rate: the comparison-principle barriers require
  // lambda^2 < (1 - mu) inf_Lambda V; clamp the fitted rate below that bound.
  double inf_lambda_V = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 256; ++i) {
    const double r = problem.pen.r_lo + (problem.pen.r_hi - problem.pen.r_lo) * i / 256.0;
    inf_lambda_V = std::min(inf_lambda_V, problem.pen.V(r));
  }
  const double bound = 0.99 * std::sqrt((1.0 - problem.pen.params.mu) * inf_lambda_V);
  fit.lambda_env = std::min(std::max(fit.lambda_fit, 0.0), bound);

  // Envelope with C anchored so that envelope(r_eps) equals the peak.
  DecayEnvelope env =
      make_envelope(regime, growth, 1.0, fit.lambda_env, fit.lambda_env, problem.eps, problem.N);
  const double at_peak = envelope_eval(env, r_eps, r_eps);
  env.C = peak / at_peak;

  fit.envelope_ok = true;
  const double atol = 1e-12 * peak;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double r = m.r[j];
    if (r >= problem.pen.r_lo && r <= problem.pen.r_hi) continue;
    const double bound = envelope_eval(env, r, r_eps) * (1.0 + 1e-6) + atol;
    if (u[j] > bound) {
      fit.envelope_ok = false;
      break;
    }
  }

  // Finite-grid L2 norm plus the integrability flag of the analytic tail.
  const double l2sq = problem.surface * kernels::block_reduce(u.size(), [&](std::size_t j) {
                        return m.node_w[j] * u[j] * u[j];
                      });
  fit.l2_norm = std::sqrt(l2sq);
  // Integrability of env^2 r^{N-1} dr beyond r_max.
  switch (regime) {
    case EnvelopeRegime::QuadInfinity:
      fit.tail_finite = 2.0 * fit.lambda_env / problem.eps > problem.N;
      break;
    case EnvelopeRegime::StretchedInfinity:
      fit.tail_finite = true;
      break;
    default:
      fit.tail_finite = problem.N >= 5;  // (1+r^2)^{-(N-2)} r^{N-1} integrable iff N > 4
      break;
  }
  fit.corollary_applies =
      problem.N >= 5 || growth.at_infinity == InfinityClass::Ginf_2;
  return fit;
}

double superlevel_width(const RadialMesh& mesh, std::span<const double> u, double r_eps,
                        double delta, const AnnulusLambda& lambda) {
  double width = 0.0;
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double r = mesh.r[j];
    if (r < lambda.r_lo || r > lambda.r_hi) continue;
    if (u[j] > delta) width = std::max(width, std::fabs(r - r_eps));
  }
  return width;
}

// ---------------------------------------------------------------------------

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result;

  const AuxPotential aux = cfg.problem.aux();
  const MinResult mn = find_min(aux, cfg.problem.lambda, cfg.find_min_resolution);
  result.r_star = mn.r_star;
  result.inf_m = mn.m_star;

  std::vector<double> prev_u;
  double prev_eps = 0.0, prev_peak_r = 0.0;

  for (double eps : cfg.eps_list) {
    ConcentrationReport rep;
    rep.eps = eps;
    try {
      PenalizedProblem problem = cfg.problem.at_eps(eps);
      PenalizedSolveOptions opt;
      // Push toward the Newton floor (the decay diagnostics read the far
      // tail), accepting a stall anywhere below the user tolerance.
      opt.grad_tol = std::min(cfg.grad_tol, 1e-12);
      opt.stall_accept_tol = cfg.grad_tol;
      opt.max_iters = cfg.max_iters;
      opt.seed_radius = mn.r_star;
      if (cfg.warm_start && !prev_u.empty())
        opt.warm_start = rescale_profile(problem.mesh, prev_u, prev_peak_r, prev_eps / eps);

      DiscreteSolution sol = solve(problem, opt);

      const PeakInfo pk = peak_extract(problem.mesh, sol.u);
      rep.solved = true;
      rep.r_eps = pk.r_eps;
      rep.peak = pk.peak;
      rep.peak_at_boundary = pk.at_boundary;
      rep.m_at_peak = aux(pk.r_eps);
      rep.c_eps = sol.c_eps;
      rep.scaled_energy = sol.c_eps / std::pow(eps, cfg.problem.N - cfg.problem.k);
      rep.grad_norm = sol.grad_norm;
      rep.iters = sol.iters;
      rep.truncation_ok = sol.truncation_ok;

      const CertificationReport cert = certify_original(problem, sol);
      rep.certified = cert.certified;
      rep.cert_margin = cert.margin;

      try {
        const DecayFit fit = decay_fit(problem, sol, pk.r_eps, cfg.regime, cfg.growth);
        rep.lambda_fit = fit.lambda_fit;
        rep.lambda_env = fit.lambda_env;
        rep.envelope_ok = fit.envelope_ok;
        rep.envelope_vacuous = fit.vacuous;
        rep.l2_norm = fit.l2_norm;
        rep.l2_tail_finite = fit.tail_finite;
        rep.corollary_applies = fit.corollary_applies;
      } catch (const std::invalid_argument& e) {
        rep.lambda_fit = 0.0;
        rep.envelope_vacuous = true;
      }

      prev_u = sol.u;
      prev_eps = eps;
      prev_peak_r = pk.r_eps;
      result.profiles.push_back(std::move(sol.u));
    } catch (const std::exception& e) {
      rep.solved = false;
      rep.error = e.what();
      result.profiles.emplace_back();
    }
    result.reports.push_back(std::move(rep));
  }
  return result;
}

// ---------------------------------------------------------------------------

Verdict concentration_check(std::span<const ConcentrationReport> reports, double inf_m,
                            const AnnulusLambda& lambda, double gap_tol) {
  Verdict v;
  std::vector<const ConcentrationReport*> ok;
  for (const auto& r : reports)
    if (r.solved) ok.push_back(&r);
  if (ok.size() < 3) {
    v.status = VerdictStatus::Insufficient;
    v.detail = "insufficient data: need >= 3 solved eps values";
    return v;
  }
  std::ostringstream detail;
  bool pass = true;
  double prev_gap = std::numeric_limits<double>::infinity();
  double min_dist = std::numeric_limits<double>::infinity();
  for (const auto* r : ok) {
    const double gap = std::fabs(r->m_at_peak - inf_m);
    if (gap > prev_gap * (1.0 + 1e-9)) {
      pass = false;
      detail << "gap increased at eps=" << r->eps << "; ";
    }
    prev_gap = gap;
    min_dist = std::min(min_dist, std::min(r->r_eps - lambda.r_lo, lambda.r_hi - r->r_eps));
  }
  const double final_gap = std::fabs(ok.back()->m_at_peak - inf_m) / inf_m;
  if (final_gap > gap_tol) {
    pass = false;
    detail << "final relative gap " << final_gap << " exceeds " << gap_tol << "; ";
  }
  const double dist_floor = 0.01 * (lambda.r_hi - lambda.r_lo);
  if (!(min_dist > dist_floor)) {
    pass = false;
    detail << "peak approaches the Lambda boundary (min distance " << min_dist << "); ";
  }
  v.status = pass ? VerdictStatus::Pass : VerdictStatus::Fail;
  if (pass) detail << "final relative gap " << final_gap;
  v.detail = detail.str();
  return v;
}

Verdict energy_scaling_check(std::span<const ConcentrationReport> reports, int k, double inf_m,
                             const SweepTolerances& tol, std::vector<double>* ratios) {
  Verdict v;
  const double omega_k = sphere_measure(k);
  std::vector<double> rr;
  for (const auto& r : reports)
    if (r.solved) rr.push_back(r.scaled_energy / (omega_k * inf_m));
  if (ratios) *ratios = rr;
  if (rr.size() < 3) {
    v.status = VerdictStatus::Insufficient;
    v.detail = "insufficient data: need >= 3 solved eps values";
    return v;
  }
  std::ostringstream detail;
  detail << "final ratio " << rr.back();
  const bool pass = rr.back() >= tol.ratio_lo && rr.back() <= tol.ratio_hi;
  v.status = pass ? VerdictStatus::Pass : VerdictStatus::Fail;
  if (!pass) detail << " outside [" << tol.ratio_lo << ", " << tol.ratio_hi << "]";
  v.detail = detail.str();
  return v;
}

}  // namespace spherecon
