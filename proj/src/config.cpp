#include "spherecon/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace spherecon {

using nlohmann::json;

namespace {

const std::map<std::string, PotentialKind> kKindNames = {
    {"constant", PotentialKind::Constant},
    {"power", PotentialKind::Power},
    {"shifted-polynomial", PotentialKind::ShiftedPolynomial},
    {"gaussian-bump", PotentialKind::GaussianBump},
    {"rational", PotentialKind::Rational},
    {"product", PotentialKind::Product},
};

std::string kind_name(PotentialKind k) {
  for (const auto& [name, kind] : kKindNames)
    if (kind == k) return name;
  return "?";
}

}  // namespace

RadialPotential potential_from_json(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError(field + ": potential model must be {\"kind\": ..., \"params\": [...]}",
                      {field});
  const std::string kind = j.at("kind").get<std::string>();
  const auto it = kKindNames.find(kind);
  if (it == kKindNames.end()) throw ConfigError(field + ": unknown potential kind " + kind, {field});
  std::vector<double> params;
  if (j.contains("params")) params = j.at("params").get<std::vector<double>>();
  try {
    RadialPotential pot;
    switch (it->second) {
      case PotentialKind::Constant:
        if (params.size() != 1) throw std::invalid_argument("constant needs params [c]");
        pot = RadialPotential::constant(params[0]);
        break;
      case PotentialKind::Power:
        if (params.size() != 2) throw std::invalid_argument("power needs params [c, s]");
        pot = RadialPotential::power(params[0], params[1]);
        break;
      case PotentialKind::ShiftedPolynomial:
        if (params.size() != 3)
          throw std::invalid_argument("shifted-polynomial needs params [c0, a, r0]");
        pot = RadialPotential::shifted_polynomial(params[0], params[1], params[2]);
        break;
      case PotentialKind::GaussianBump:
        if (params.size() != 4)
          throw std::invalid_argument("gaussian-bump needs params [c0, amp, a, r0]");
        pot = RadialPotential::gaussian_bump(params[0], params[1], params[2], params[3]);
        break;
      case PotentialKind::Rational: {
        if (!j.contains("num") || !j.contains("den"))
          throw std::invalid_argument("rational needs arrays num, den");
        pot = RadialPotential::rational(j.at("num").get<std::vector<double>>(),
                                        j.at("den").get<std::vector<double>>());
        break;
      }
      case PotentialKind::Product: {
        if (!j.contains("factors")) throw std::invalid_argument("product needs factors array");
        std::vector<RadialPotential> factors;
        int idx = 0;
        for (const auto& fj : j.at("factors"))
          factors.push_back(potential_from_json(fj, field + ".factors[" + std::to_string(idx++) + "]"));
        pot = RadialPotential::product(std::move(factors));
        break;
      }
    }
    if (j.contains("power_shift")) pot.power_shift = j.at("power_shift").get<double>();
    if (j.contains("inverted")) pot.inverted = j.at("inverted").get<bool>();
    return pot;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field + ": " + e.what(), {field});
  }
}

json potential_to_json(const RadialPotential& pot) {
  json j;
  j["kind"] = kind_name(pot.kind);
  if (pot.kind == PotentialKind::Rational) {
    const auto nn = static_cast<std::size_t>(pot.params[0]);
    j["num"] = std::vector<double>(pot.params.begin() + 1, pot.params.begin() + 1 + nn);
    j["den"] = std::vector<double>(pot.params.begin() + 1 + nn, pot.params.end());
  } else if (pot.kind == PotentialKind::Product) {
    json factors = json::array();
    for (const auto& f : pot.factors) factors.push_back(potential_to_json(f));
    j["factors"] = factors;
  } else {
    j["params"] = pot.params;
  }
  if (pot.power_shift != 0.0) j["power_shift"] = pot.power_shift;
  if (pot.inverted) j["inverted"] = pot.inverted;
  return j;
}

namespace {

Nonlinearity nonlinearity_from_json(const json& problem, std::vector<std::string>& bad) {
  try {
    if (problem.contains("p") && !problem.contains("f"))
      return Nonlinearity::pure_power(problem.at("p").get<double>());
    if (problem.contains("f")) {
      const json& fj = problem.at("f");
      const std::string kind = fj.value("kind", "pure-power");
      if (kind == "pure-power") return Nonlinearity::pure_power(fj.at("p").get<double>());
      if (kind == "sum-of-powers") {
        std::optional<double> theta;
        if (fj.contains("theta")) theta = fj.at("theta").get<double>();
        return Nonlinearity::sum_of_powers(fj.at("coeffs").get<std::vector<double>>(),
                                           fj.at("exponents").get<std::vector<double>>(), theta);
      }
      bad.push_back("problem.f.kind");
      return Nonlinearity::pure_power(3.0);
    }
  } catch (const std::exception&) {
    bad.push_back("problem.f");
    return Nonlinearity::pure_power(3.0);
  }
  bad.push_back("problem.p");
  return Nonlinearity::pure_power(3.0);
}

GrowthClass growth_from_json(const json& g, std::vector<std::string>& bad) {
  GrowthClass cls;
  try {
    if (g.contains("at_origin")) {
      const json& o = g.at("at_origin");
      const std::string name = o.at("class").get<std::string>();
      if (name == "G0_1")
        cls.at_origin = OriginClass::G0_1;
      else if (name == "G0_2")
        cls.at_origin = OriginClass::G0_2;
      else if (name == "G0_3")
        cls.at_origin = OriginClass::G0_3;
      else
        bad.push_back("growth.at_origin.class");
      cls.tau = o.value("tau", 0.0);
      cls.gamma = o.value("gamma", 0.0);
    }
    if (g.contains("at_infinity")) {
      const json& i = g.at("at_infinity");
      const std::string name = i.at("class").get<std::string>();
      if (name == "Ginf_1")
        cls.at_infinity = InfinityClass::Ginf_1;
      else if (name == "Ginf_2")
        cls.at_infinity = InfinityClass::Ginf_2;
      else if (name == "Ginf_3")
        cls.at_infinity = InfinityClass::Ginf_3;
      else
        bad.push_back("growth.at_infinity.class");
      cls.sigma = i.value("sigma", 0.0);
      cls.alpha = i.value("alpha", 0.0);
    }
    cls.check_params();
  } catch (const std::exception&) {
    bad.push_back("growth");
  }
  return cls;
}

}  // namespace

RunConfig parse_config(const json& j) {
  std::vector<std::string> bad;
  RunConfig cfg;

  if (!j.contains("problem")) throw ConfigError("missing required section: problem", {"problem"});
  const json& problem = j.at("problem");

  cfg.problem.N = problem.value("N", 3);
  if (cfg.problem.N < 2) bad.push_back("problem.N");
  cfg.problem.k = problem.value("k", cfg.problem.N - 1);
  if (cfg.problem.k < 1 || cfg.problem.k > cfg.problem.N - 1) bad.push_back("problem.k");

  cfg.problem.f = nonlinearity_from_json(problem, bad);

  if (problem.contains("V"))
    cfg.problem.V = potential_from_json(problem.at("V"), "problem.V");
  else
    bad.push_back("problem.V");
  if (problem.contains("K"))
    cfg.problem.K = potential_from_json(problem.at("K"), "problem.K");
  else
    cfg.problem.K = RadialPotential::constant(1.0);

  if (!j.contains("lambda")) {
    bad.push_back("lambda");
  } else {
    const json& l = j.at("lambda");
    const double r_lo = l.value("r_lo", 0.0), r_hi = l.value("r_hi", 0.0);
    if (!(0.0 < r_lo && r_lo < r_hi)) {
      bad.push_back("lambda.r_lo/r_hi");
      cfg.problem.lambda = AnnulusLambda{1.0, 2.0};
    } else {
      cfg.problem.lambda = AnnulusLambda{r_lo, r_hi};
    }
  }

  cfg.problem.params = PenalizationParams::defaults(cfg.problem.N);
  if (j.contains("penalization")) {
    const json& p = j.at("penalization");
    cfg.problem.params.kappa = p.value("kappa", cfg.problem.params.kappa);
    cfg.problem.params.beta = p.value("beta", cfg.problem.params.beta);
    cfg.problem.params.mu = p.value("mu", cfg.problem.params.mu);
  }
  try {
    cfg.problem.params.validate(cfg.problem.N);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    if (what.find("kappa") != std::string::npos) bad.push_back("penalization.kappa");
    if (what.find("beta") != std::string::npos) bad.push_back("penalization.beta");
    if (what.find("mu") != std::string::npos) bad.push_back("penalization.mu");
  }

  cfg.problem.grid.r_min = cfg.problem.lambda.r_lo / 4.0;
  cfg.problem.grid.r_max = 3.0 * cfg.problem.lambda.r_hi;
  cfg.problem.grid.n = 8192;
  cfg.problem.grid.spacing = GridSpacing::Uniform;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    cfg.problem.grid.r_min = g.value("r_min", cfg.problem.grid.r_min);
    cfg.problem.grid.r_max = g.value("r_max", cfg.problem.grid.r_max);
    cfg.problem.grid.n = g.value("n", cfg.problem.grid.n);
    const std::string sp = g.value("spacing", "uniform");
    if (sp == "uniform")
      cfg.problem.grid.spacing = GridSpacing::Uniform;
    else if (sp == "log")
      cfg.problem.grid.spacing = GridSpacing::LogUniform;
    else
      bad.push_back("grid.spacing");
  }
  if (!(0.0 < cfg.problem.grid.r_min && cfg.problem.grid.r_min < cfg.problem.lambda.r_lo &&
        cfg.problem.lambda.r_hi < cfg.problem.grid.r_max))
    bad.push_back("grid.r_min/r_max");
  if (cfg.problem.grid.n < 16) bad.push_back("grid.n");

  cfg.eps_list = {0.2, 0.1, 0.05, 0.025, 0.0125};
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (s.contains("eps_list")) cfg.eps_list = s.at("eps_list").get<std::vector<double>>();
    if (s.contains("warm_start")) cfg.warm_start = s.at("warm_start").get<bool>();
  }
  if (cfg.eps_list.empty()) bad.push_back("sweep.eps_list");
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    if (!(cfg.eps_list[i] > 0.0) || (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1]))) {
      bad.push_back("sweep.eps_list");
      break;
    }
  }
  cfg.eps = j.value("eps", cfg.eps_list.empty() ? 0.05 : cfg.eps_list.back());
  if (!(cfg.eps > 0.0)) bad.push_back("eps");

  if (j.contains("growth")) {
    cfg.growth_declared = true;
    cfg.growth = growth_from_json(j.at("growth"), bad);
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    cfg.tol.m_gap_rel = t.value("m_gap_rel", cfg.tol.m_gap_rel);
    cfg.tol.ratio_lo = t.value("energy_ratio_lo", cfg.tol.ratio_lo);
    cfg.tol.ratio_hi = t.value("energy_ratio_hi", cfg.tol.ratio_hi);
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    cfg.grad_tol = s.value("grad_tol", cfg.grad_tol);
    cfg.max_iters = s.value("max_iters", cfg.max_iters);
    if (!(cfg.grad_tol > 0.0)) bad.push_back("solver.grad_tol");
    if (cfg.max_iters < 1) bad.push_back("solver.max_iters");
  }

  if (j.contains("aux")) {
    cfg.aux_resolution = j.at("aux").value("resolution", cfg.aux_resolution);
    cfg.find_min_resolution = j.at("aux").value("find_min_resolution", cfg.find_min_resolution);
    if (cfg.aux_resolution < 3) bad.push_back("aux.resolution");
  }

  cfg.limit.d = cfg.problem.N - cfg.problem.k;
  if (j.contains("limit")) {
    const json& l = j.at("limit");
    cfg.limit.d = l.value("d", cfg.limit.d);
    cfg.limit.a = l.value("a", 1.0);
    cfg.limit.b = l.value("b", 1.0);
    if (cfg.limit.d < 1 || cfg.limit.d > 3) bad.push_back("limit.d");
    if (!(cfg.limit.a > 0.0)) bad.push_back("limit.a");
    if (!(cfg.limit.b > 0.0)) bad.push_back("limit.b");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    cfg.out_dir = o.value("directory", cfg.out_dir);
    if (o.contains("formats")) cfg.formats = o.at("formats").get<std::vector<std::string>>();
  }

  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "configuration invalid; violated fields:";
    for (const auto& f : bad) msg << " " << f;
    throw ConfigError(msg.str(), bad);
  }

  // Resolved echo with every default applied.
  json r;
  r["problem"]["N"] = cfg.problem.N;
  r["problem"]["k"] = cfg.problem.k;
  if (cfg.problem.f.kind == NonlinearityKind::PurePower) {
    r["problem"]["f"] = {{"kind", "pure-power"}, {"p", cfg.problem.f.p}};
  } else {
    r["problem"]["f"] = {{"kind", "sum-of-powers"},
                         {"coeffs", cfg.problem.f.coeffs},
                         {"exponents", cfg.problem.f.exponents},
                         {"theta", cfg.problem.f.theta}};
  }
  r["problem"]["V"] = potential_to_json(cfg.problem.V);
  r["problem"]["K"] = potential_to_json(cfg.problem.K);
  r["lambda"] = {{"r_lo", cfg.problem.lambda.r_lo}, {"r_hi", cfg.problem.lambda.r_hi}};
  r["penalization"] = {{"kappa", cfg.problem.params.kappa},
                       {"beta", cfg.problem.params.beta},
                       {"mu", cfg.problem.params.mu}};
  r["grid"] = {{"r_min", cfg.problem.grid.r_min},
               {"r_max", cfg.problem.grid.r_max},
               {"n", cfg.problem.grid.n},
               {"spacing", cfg.problem.grid.spacing == GridSpacing::Uniform ? "uniform" : "log"}};
  r["sweep"] = {{"eps_list", cfg.eps_list}, {"warm_start", cfg.warm_start}};
  r["eps"] = cfg.eps;
  r["tolerances"] = {{"m_gap_rel", cfg.tol.m_gap_rel},
                     {"energy_ratio_lo", cfg.tol.ratio_lo},
                     {"energy_ratio_hi", cfg.tol.ratio_hi}};
  r["solver"] = {{"grad_tol", cfg.grad_tol}, {"max_iters", cfg.max_iters}};
  r["aux"] = {{"resolution", cfg.aux_resolution},
              {"find_min_resolution", cfg.find_min_resolution}};
  r["limit"] = {{"d", cfg.limit.d}, {"a", cfg.limit.a}, {"b", cfg.limit.b}};
  r["output"] = {{"directory", cfg.out_dir}, {"formats", cfg.formats}};
  if (cfg.growth_declared) {
    json g;
    switch (cfg.growth.at_origin) {
      case OriginClass::G0_1: g["at_origin"] = {{"class", "G0_1"}, {"tau", cfg.growth.tau}}; break;
      case OriginClass::G0_2: g["at_origin"] = {{"class", "G0_2"}, {"tau", cfg.growth.tau}}; break;
      case OriginClass::G0_3:
        g["at_origin"] = {{"class", "G0_3"}, {"tau", cfg.growth.tau}, {"gamma", cfg.growth.gamma}};
        break;
    }
    switch (cfg.growth.at_infinity) {
      case InfinityClass::Ginf_1:
        g["at_infinity"] = {{"class", "Ginf_1"}, {"sigma", cfg.growth.sigma}};
        break;
      case InfinityClass::Ginf_2:
        g["at_infinity"] = {{"class", "Ginf_2"}, {"sigma", cfg.growth.sigma}};
        break;
      case InfinityClass::Ginf_3:
        g["at_infinity"] = {{"class", "Ginf_3"},
                            {"sigma", cfg.growth.sigma},
                            {"alpha", cfg.growth.alpha}};
        break;
    }
    r["growth"] = g;
  }
  cfg.resolved = std::move(r);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

SweepConfig RunConfig::to_sweep() const {
  SweepConfig s;
  s.eps_list = eps_list;
  s.problem = problem;
  s.warm_start = warm_start;
  s.regime = envelope_regime();
  s.growth = growth;
  s.tol = tol;
  s.grad_tol = grad_tol;
  s.max_iters = max_iters;
  s.find_min_resolution = find_min_resolution;
  return s;
}

EnvelopeRegime RunConfig::envelope_regime() const {
  if (!growth_declared) return EnvelopeRegime::Base;
  switch (growth.at_infinity) {
    case InfinityClass::Ginf_2: return EnvelopeRegime::QuadInfinity;
    case InfinityClass::Ginf_3: return EnvelopeRegime::StretchedInfinity;
    default: return EnvelopeRegime::Base;
  }
}

}  // namespace spherecon
