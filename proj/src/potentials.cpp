#include "spherecon/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spherecon/common.hpp"

namespace spherecon {

namespace {

double eval_base(const RadialPotential& pot, double y) {
  const auto& p = pot.params;
  switch (pot.kind) {
    case PotentialKind::Constant:
      return p[0];
    case PotentialKind::Power:
      return p[0] * std::pow(y, p[1]);
    case PotentialKind::ShiftedPolynomial: {
      const double d = y - p[2];
      return p[0] + p[1] * d * d;
    }
    case PotentialKind::GaussianBump: {
      const double d = y - p[3];
      return p[0] + p[1] * std::exp(-p[2] * d * d);
    }
    case PotentialKind::Rational: {
      const auto nn = static_cast<std::size_t>(p[0]);
      double num = 0.0, den = 0.0, pw = 1.0;
      for (std::size_t i = 1; i <= nn; ++i, pw *= y) num += p[i] * pw;
      pw = 1.0;
      for (std::size_t i = nn + 1; i < p.size(); ++i, pw *= y) den += p[i] * pw;
      return num / den;
    }
    case PotentialKind::Product: {
      double v = 1.0;
      for (const auto& f : pot.factors) v *= eval_base(f, f.inverted ? 1.0 / y : y) *
                                             std::pow(y, f.power_shift);
      return v;
    }
  }
  throw std::logic_error("eval_base: unknown kind");
}

// Spot-check the nonnegativity invariant on a log grid at construction.
void check_nonnegative(const RadialPotential& pot) {
  for (double r : log_spaced(1e-6, 1e6, 241)) {
    const double v = pot(r);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "RadialPotential: model is negative or non-finite at r = " << r;
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace

double RadialPotential::operator()(double r) const {
  if (!(r > 0.0)) throw std::domain_error("RadialPotential: r must be positive");
  const double y = inverted ? 1.0 / r : r;
  double v = eval_base(*this, y);
  if (power_shift != 0.0) v *= std::pow(r, power_shift);
  return v;
}

double eval_potential(const RadialPotential& pot, double r) { return pot(r); }

RadialPotential RadialPotential::constant(double c) {
  RadialPotential p{PotentialKind::Constant, {c}, {}, 0.0, false};
  check_nonnegative(p);
  return p;
}

RadialPotential RadialPotential::power(double c, double s) {
  RadialPotential p{PotentialKind::Power, {c, s}, {}, 0.0, false};
  check_nonnegative(p);
  return p;
}

RadialPotential RadialPotential::shifted_polynomial(double c0, double a, double r0) {
  RadialPotential p{PotentialKind::ShiftedPolynomial, {c0, a, r0}, {}, 0.0, false};
  check_nonnegative(p);
  return p;
}

RadialPotential RadialPotential::gaussian_bump(double c0, double amp, double a, double r0) {
  RadialPotential p{PotentialKind::GaussianBump, {c0, amp, a, r0}, {}, 0.0, false};
  check_nonnegative(p);
  return p;
}

RadialPotential RadialPotential::rational(std::vector<double> num, std::vector<double> den) {
  if (num.empty() || den.empty())
    throw std::invalid_argument("RadialPotential::rational: empty coefficients");
  std::vector<double> params;
  params.push_back(static_cast<double>(num.size()));
  params.insert(params.end(), num.begin(), num.end());
  params.insert(params.end(), den.begin(), den.end());
  RadialPotential p{PotentialKind::Rational, std::move(params), {}, 0.0, false};
  check_nonnegative(p);
  return p;
}

RadialPotential RadialPotential::product(std::vector<RadialPotential> factors) {
  if (factors.empty()) throw std::invalid_argument("RadialPotential::product: no factors");
  RadialPotential p{PotentialKind::Product, {}, std::move(factors), 0.0, false};
  check_nonnegative(p);
  return p;
}

RadialPotential RadialPotential::canonical() const {
  RadialPotential out = *this;
  if (kind == PotentialKind::Constant) {
    out.inverted = false;
    if (out.power_shift != 0.0) {
      out = RadialPotential{PotentialKind::Power, {params[0], power_shift}, {}, 0.0, false};
    }
  } else if (kind == PotentialKind::Power) {
    const double s = inverted ? -params[1] : params[1];
    const double total = s + power_shift;
    if (total == 0.0)
      out = RadialPotential{PotentialKind::Constant, {params[0]}, {}, 0.0, false};
    else
      out = RadialPotential{PotentialKind::Power, {params[0], total}, {}, 0.0, false};
  }
  return out;
}

std::string RadialPotential::describe() const {
  std::ostringstream os;
  switch (kind) {
    case PotentialKind::Constant: os << params[0]; break;
    case PotentialKind::Power: os << params[0] << "*r^" << params[1]; break;
    case PotentialKind::ShiftedPolynomial:
      os << params[0] << " + " << params[1] << "*(r - " << params[2] << ")^2";
      break;
    case PotentialKind::GaussianBump:
      os << params[0] << " + " << params[1] << "*exp(-" << params[2] << "*(r - " << params[3]
         << ")^2)";
      break;
    case PotentialKind::Rational: os << "rational"; break;
    case PotentialKind::Product: os << "product(" << factors.size() << ")"; break;
  }
  if (inverted) os << " at 1/r";
  if (power_shift != 0.0) os << " * r^" << power_shift;
  return os.str();
}

// ---------------------------------------------------------------------------

void GrowthClass::check_params() const {
  if (at_origin == OriginClass::G0_1 && !(tau > -2.0))
    throw std::invalid_argument("GrowthClass: G0_1 requires tau > -2");
  if (at_origin == OriginClass::G0_3 && !(gamma > 2.0))
    throw std::invalid_argument("GrowthClass: G0_3 requires gamma > 2");
  if (at_infinity == InfinityClass::Ginf_3 && !(alpha < 2.0))
    throw std::invalid_argument("GrowthClass: Ginf_3 requires alpha < 2");
}

namespace {

constexpr double kPositivityFloor = 1e-12;
constexpr double kSlopeTol = 0.05;  // log10 per decade

struct TailGrid {
  std::vector<double> r;  // ordered toward the limit
  int decades = 0;
  int per_decade = 0;
};

TailGrid make_tail(bool toward_origin, const SamplingPolicy& pol) {
  if (pol.points_per_decade <= 0 || pol.decades <= 0)
    throw std::invalid_argument("validate_growth: empty sample grid");
  TailGrid g;
  g.decades = pol.decades;
  g.per_decade = pol.points_per_decade;
  const int n = pol.decades * pol.points_per_decade;
  g.r.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const double e = static_cast<double>(i) / pol.points_per_decade;  // decades from 1
    g.r.push_back(toward_origin ? std::pow(10.0, -e) : std::pow(10.0, e));
  }
  return g;
}

// liminf surrogate: min over the decades nearest the limit (last half of the tail).
template <class F>
GrowthCheck liminf_check(const std::string& name, const TailGrid& g, F&& f) {
  GrowthCheck c;
  c.condition = name;
  c.threshold = kPositivityFloor;
  double mn = std::numeric_limits<double>::infinity();
  const std::size_t start = g.r.size() / 2;
  for (std::size_t i = start; i < g.r.size(); ++i) mn = std::min(mn, f(g.r[i]));
  c.surrogate = mn;
  c.pass = mn > kPositivityFloor;
  return c;
}

// limsup surrogate: max over the tail decades (pass iff finite), plus a
// divergence-trend diagnostic (log10 slope per decade of the decade maxima).
template <class F>
std::pair<GrowthCheck, GrowthCheck> limsup_check(const std::string& name, const TailGrid& g,
                                                 F&& f) {
  GrowthCheck c;
  c.condition = name;
  c.threshold = std::numeric_limits<double>::infinity();
  std::vector<double> decade_max(static_cast<std::size_t>(g.decades), 0.0);
  for (int d = 0; d < g.decades; ++d) {
    double m = 0.0;
    for (int i = 0; i < g.per_decade; ++i) {
      const auto idx = static_cast<std::size_t>(d * g.per_decade + i);
      m = std::max(m, std::fabs(f(g.r[idx])));
    }
    decade_max[static_cast<std::size_t>(d)] = m;
  }
  const auto nd = decade_max.size();
  c.surrogate = *std::max_element(decade_max.end() - std::min<std::size_t>(3, nd),
                                  decade_max.end());
  c.pass = std::isfinite(c.surrogate);

  GrowthCheck trend;
  trend.condition = name + " [trend, log10/decade]";
  trend.threshold = kSlopeTol;
  const std::size_t far = nd >= 3 ? nd - 3 : 0;
  const double m_far = decade_max[far], m_last = decade_max[nd - 1];
  const double span = far < nd - 1 ? static_cast<double>(nd - 1 - far) : 1.0;
  if (m_last == 0.0) {
    trend.surrogate = -std::numeric_limits<double>::infinity();
    trend.pass = true;
  } else if (m_far == 0.0) {
    trend.surrogate = std::numeric_limits<double>::infinity();
    trend.pass = false;
  } else {
    trend.surrogate = (std::log10(m_last) - std::log10(m_far)) / span;
    trend.pass = trend.surrogate <= kSlopeTol;
  }
  return {c, trend};
}

}  // namespace

GrowthReport validate_growth(const RadialPotential& V, const RadialPotential& K,
                             const GrowthClass& cls, double q, int N,
                             const SamplingPolicy& policy) {
  cls.check_params();
  GrowthReport rep;
  const TailGrid origin = make_tail(true, policy);
  const TailGrid infinity = make_tail(false, policy);

  switch (cls.at_origin) {
    case OriginClass::G0_1: {
      GrowthCheck par{"G0_1: tau > -2", cls.tau, -2.0, cls.tau > -2.0};
      rep.checks.push_back(par);
      {
        auto [chk, trend] = limsup_check("G0_1: limsup K/r^tau < inf (r->0)", origin,
                                        [&](double r) { return K(r) / std::pow(r, cls.tau); });
        rep.checks.push_back(chk);
        rep.diagnostics.push_back(trend);
      }
      break;
    }
    case OriginClass::G0_2: {
      rep.checks.push_back(liminf_check("G0_2: liminf V*r^2 > 0 (r->0)", origin,
                                        [&](double r) { return V(r) * r * r; }));
      {
        auto [chk, trend] = limsup_check("G0_2: limsup K/r^tau < inf (r->0)", origin,
                                        [&](double r) { return K(r) / std::pow(r, cls.tau); });
        rep.checks.push_back(chk);
        rep.diagnostics.push_back(trend);
      }
      break;
    }
    case OriginClass::G0_3: {
      GrowthCheck par{"G0_3: gamma > 2", cls.gamma, 2.0, cls.gamma > 2.0};
      rep.checks.push_back(par);
      rep.checks.push_back(liminf_check("G0_3: liminf V*r^gamma > 0 (r->0)", origin,
                                        [&](double r) { return V(r) * std::pow(r, cls.gamma); }));
      const double e = 0.5 * (cls.gamma - 2.0);
      {
        auto [chk, trend] =
            limsup_check("G0_3: limsup K/exp(tau*r^-((gamma-2)/2)) < inf (r->0)", origin,
                         [&](double r) { return K(r) / std::exp(cls.tau * std::pow(r, -e)); });
        rep.checks.push_back(chk);
        rep.diagnostics.push_back(trend);
      }
      break;
    }
  }

  switch (cls.at_infinity) {
    case InfinityClass::Ginf_1: {
      const double bound = (N - 2.0) * q - N;
      GrowthCheck par{"Ginf_1: sigma < (N-2)q - N", cls.sigma, bound, cls.sigma < bound};
      rep.checks.push_back(par);
      {
        auto [chk, trend] = limsup_check("Ginf_1: limsup K/r^sigma < inf (r->inf)", infinity,
                                        [&](double r) { return K(r) / std::pow(r, cls.sigma); });
        rep.checks.push_back(chk);
        rep.diagnostics.push_back(trend);
      }
      break;
    }
    case InfinityClass::Ginf_2: {
      rep.checks.push_back(liminf_check("Ginf_2: liminf V*r^2 > 0 (r->inf)", infinity,
                                        [&](double r) { return V(r) * r * r; }));
      {
        auto [chk, trend] = limsup_check("Ginf_2: limsup K/r^sigma < inf (r->inf)", infinity,
                                        [&](double r) { return K(r) / std::pow(r, cls.sigma); });
        rep.checks.push_back(chk);
        rep.diagnostics.push_back(trend);
      }
      break;
    }
    case InfinityClass::Ginf_3: {
      GrowthCheck par{"Ginf_3: alpha < 2", cls.alpha, 2.0, cls.alpha < 2.0};
      rep.checks.push_back(par);
      rep.checks.push_back(liminf_check("Ginf_3: liminf V*r^alpha > 0 (r->inf)", infinity,
                                        [&](double r) { return V(r) * std::pow(r, cls.alpha); }));
      const double e = 0.5 * (2.0 - cls.alpha);
      {
        auto [chk, trend] =
            limsup_check("Ginf_3: limsup K/exp(sigma*r^((2-alpha)/2)) < inf (r->inf)", infinity,
                         [&](double r) { return K(r) / std::exp(cls.sigma * std::pow(r, e)); });
        rep.checks.push_back(chk);
        rep.diagnostics.push_back(trend);
      }
      break;
    }
  }

  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                         [](const GrowthCheck& c) { return c.pass; });
  return rep;
}

// ---------------------------------------------------------------------------

RadialPotential kelvin_apply(const RadialPotential& pot, double exponent) {
  RadialPotential out = pot;
  out.inverted = !pot.inverted;
  out.power_shift = exponent - pot.power_shift;
  return out;
}

KelvinPair kelvin_transform_potentials(const RadialPotential& V, const RadialPotential& K,
                                       double p, int N) {
  if (N < 3)
    throw std::invalid_argument("kelvin_transform_potentials: requires N >= 3");
  const double k_exp = -(N + 2.0 - p * (N - 2.0));
  return KelvinPair{kelvin_apply(V, -4.0), kelvin_apply(K, k_exp), p, N};
}

GrowthClass kelvin_mirror(const GrowthClass& cls, double p, int N) {
  const double m = N + 2.0 - p * (N - 2.0);
  GrowthClass out;
  // origin -> infinity
  switch (cls.at_origin) {
    case OriginClass::G0_1:
      out.at_infinity = InfinityClass::Ginf_1;
      out.sigma = -m - cls.tau;
      break;
    case OriginClass::G0_2:
      out.at_infinity = InfinityClass::Ginf_2;
      out.sigma = -m - cls.tau;
      break;
    case OriginClass::G0_3:
      out.at_infinity = InfinityClass::Ginf_3;
      out.alpha = 4.0 - cls.gamma;
      out.sigma = cls.tau;
      break;
  }
  // infinity -> origin
  switch (cls.at_infinity) {
    case InfinityClass::Ginf_1:
      out.at_origin = OriginClass::G0_1;
      out.tau = -m - cls.sigma;
      break;
    case InfinityClass::Ginf_2:
      out.at_origin = OriginClass::G0_2;
      out.tau = -m - cls.sigma;
      break;
    case InfinityClass::Ginf_3:
      out.at_origin = OriginClass::G0_3;
      out.gamma = 4.0 - cls.alpha;
      out.tau = cls.sigma;
      break;
  }
  return out;
}

RadialProfile kelvin_transform_field(const RadialProfile& profile, int N) {
  if (profile.r.size() != profile.u.size())
    throw std::invalid_argument("kelvin_transform_field: size mismatch");
  RadialProfile out;
  const std::size_t n = profile.r.size();
  out.r.resize(n);
  out.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = profile.r[n - 1 - i];
    if (!(r > 0.0)) throw std::domain_error("kelvin_transform_field: grid must avoid r = 0");
    const double rho = 1.0 / r;
    out.r[i] = rho;
    out.u[i] = std::pow(rho, 2.0 - N) * profile.u[n - 1 - i];
  }
  return out;
}

}  // namespace spherecon
