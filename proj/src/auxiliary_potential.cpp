#include "spherecon/auxiliary_potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spherecon/common.hpp"
#include "spherecon/kernels.hpp"

namespace spherecon {

namespace {

void check_dims(int N, int k) {
  if (N < 2) throw std::invalid_argument("AuxPotential: N must be >= 2");
  if (k < 1 || k > N - 1) throw std::invalid_argument("AuxPotential: need 1 <= k <= N-1");
  if (N - k > 3) throw std::invalid_argument("AuxPotential: reduced dimension N-k must be <= 3");
}

}  // namespace

AuxPotential AuxPotential::closed_form(int N, int k, double p, RadialPotential V,
                                       RadialPotential K) {
  check_dims(N, k);
  AuxPotential aux;
  aux.N = N;
  aux.k = k;
  aux.f = Nonlinearity::pure_power(p);
  aux.V = std::move(V);
  aux.K = std::move(K);
  aux.mode = AuxMode::ClosedForm;
  aux.e11 = ground_energy(LimitProblem::make(N - k, 1.0, 1.0, aux.f));
  return aux;
}

AuxPotential AuxPotential::general(int N, int k, Nonlinearity f, RadialPotential V,
                                   RadialPotential K) {
  check_dims(N, k);
  AuxPotential aux;
  aux.N = N;
  aux.k = k;
  aux.f = std::move(f);
  aux.V = std::move(V);
  aux.K = std::move(K);
  aux.mode = AuxMode::General;
  aux.e11 = ground_energy(LimitProblem::make(N - k, 1.0, 1.0, aux.f));
  return aux;
}

double aux_closed_form(double r, int N, int k, double p, const RadialPotential& V,
                       const RadialPotential& K, double e11) {
  const double kv = K(r);
  if (kv == 0.0) return std::numeric_limits<double>::infinity();
  const double vv = V(r);
  if (vv == 0.0)
    throw std::domain_error("aux_closed_form: V(r) = 0 (exponent may be negative)");
  const double d = N - k;
  const double ev = (p + 1.0) / (p - 1.0) - 0.5 * d;
  const double ek = -2.0 / (p - 1.0);
  return e11 * std::pow(r, k) * std::pow(vv, ev) * std::pow(kv, ek);
}

double aux_general(double r, int N, int k, const Nonlinearity& f, const RadialPotential& V,
                   const RadialPotential& K) {
  const double kv = K(r);
  if (kv == 0.0) return std::numeric_limits<double>::infinity();
  const double vv = V(r);
  if (!(vv > 0.0)) throw std::domain_error("aux_general: requires V(r) > 0");
  const double E = ground_energy(LimitProblem::make(N - k, vv, kv, f));
  return std::pow(r, k) * E;
}

double AuxPotential::operator()(double r) const {
  if (mode == AuxMode::ClosedForm) return aux_closed_form(r, N, k, f.p, V, K, e11);
  return aux_general(r, N, k, f, V, K);
}

AnnulusLambda AnnulusLambda::make(double r_lo, double r_hi) {
  if (!(0.0 < r_lo && r_lo < r_hi && std::isfinite(r_hi)))
    throw std::invalid_argument("AnnulusLambda: need 0 < r_lo < r_hi < infinity");
  return AnnulusLambda{r_lo, r_hi};
}

namespace {

// Scans must not leak exceptions out of the parallel region; a V = 0 node is
// reported as +infinity and handled by the admissibility checks.
double safe_eval(const AuxPotential& aux, double r) {
  try {
    return aux(r);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

MinResult find_min(const AuxPotential& aux, const AnnulusLambda& lambda, int resolution) {
  if (resolution < 3) throw std::invalid_argument("find_min: resolution must be >= 3");
  const auto r = lin_spaced(lambda.r_lo, lambda.r_hi, resolution);
  std::vector<double> m(r.size());
  kernels::parallel_fill(m, [&](std::size_t i) { return safe_eval(aux, r[i]); });

  std::size_t best = 0;
  for (std::size_t i = 1; i < m.size(); ++i)
    if (m[i] < m[best]) best = i;  // strict: ties stay at the smaller radius

  MinResult res;
  if (best == 0 || best + 1 == m.size()) {
    res.boundary = true;
    res.r_star = r[best];
    res.m_star = m[best];
    return res;
  }

  // Golden-section refinement inside the bracketing neighbors.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = r[best - 1], b = r[best + 1];
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = safe_eval(aux, x1), f2 = safe_eval(aux, x2);
  while (b - a > 1e-8) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = safe_eval(aux, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = safe_eval(aux, x2);
    }
  }
  res.r_star = 0.5 * (a + b);
  res.m_star = safe_eval(aux, res.r_star);
  if (res.m_star > m[best]) {  // refinement never worsens a unimodal valley
    res.r_star = r[best];
    res.m_star = m[best];
  }
  return res;
}

AdmissibilityReport validate_lambda(const AuxPotential& aux, const AnnulusLambda& lambda,
                                    int resolution) {
  AdmissibilityReport rep;
  const auto r = lin_spaced(lambda.r_lo, lambda.r_hi, resolution);
  std::vector<double> m(r.size()), v(r.size());
  kernels::parallel_fill(v, [&](std::size_t i) { return aux.V(r[i]); });
  kernels::parallel_fill(m, [&](std::size_t i) { return safe_eval(aux, r[i]); });

  double inf_int = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < m.size(); ++i) inf_int = std::min(inf_int, m[i]);
  const double inf_bnd = std::min(m.front(), m.back());
  const double inf_closed = std::min(inf_int, inf_bnd);
  rep.inf_interior = inf_int;
  rep.inf_boundary = inf_bnd;

  rep.checks.push_back({"inf M > 0 on Lambda", inf_int > 0.0, inf_int});
  rep.checks.push_back(
      {"inf_Lambda M < inf_boundary M", inf_int < inf_bnd, inf_bnd - inf_int});
  const double vmin = *std::min_element(v.begin(), v.end());
  rep.checks.push_back({"V > 0 on closure of Lambda", vmin > 0.0, vmin});
  if (aux.k == aux.N - 2) {
    const double margin = 2.0 * inf_closed - inf_int;
    rep.checks.push_back({"k = N-2: inf M < 2 inf_closure M", inf_int < 2.0 * inf_closed, margin});
  }
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                         [](const AdmissibilityCheck& c) { return c.pass; });
  return rep;
}

}  // namespace spherecon
