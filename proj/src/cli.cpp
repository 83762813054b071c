#include "spherecon/cli.hpp"

#include <filesystem>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spherecon/barriers.hpp"
#include "spherecon/common.hpp"
#include "spherecon/report.hpp"

namespace spherecon {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct OutputSink {
  fs::path dir;
  bool json_on = true;
  bool csv_on = true;

  void emit_json(const std::string& name, const json& j) const {
    if (json_on) write_json((dir / name).string(), j);
  }
  void emit_csv(const std::string& name, const std::string& h1, const std::string& h2,
                std::span<const double> a, std::span<const double> b) const {
    if (csv_on) write_csv((dir / name).string(), h1, h2, a, b);
  }
};

OutputSink make_sink(const RunConfig& cfg, const CliOptions& opt) {
  OutputSink sink;
  sink.dir = opt.out_dir.empty() ? fs::path(cfg.out_dir) : fs::path(opt.out_dir);
  fs::create_directories(sink.dir);
  if (opt.format == "json")
    sink.csv_on = false;
  else if (opt.format == "csv")
    sink.json_on = false;
  // The resolved-config echo is always written.
  write_json((sink.dir / "resolved_config.json").string(), json{{"config", cfg.resolved}});
  return sink;
}

int cmd_validate(const RunConfig& cfg, const OutputSink& sink) {
  json rep = report_header(cfg);
  bool hard_fail = false;

  const FCertificate fcert = validate_f(cfg.problem.f);
  rep["f_certificate"] = to_json(fcert);
  hard_fail |= !fcert.pass;

  if (cfg.growth_declared) {
    const GrowthReport grep =
        validate_growth(cfg.problem.V, cfg.problem.K, cfg.growth, cfg.problem.f.q, cfg.problem.N);
    rep["growth"] = to_json(grep);
    hard_fail |= !grep.pass;
  }

  const AuxPotential aux = cfg.problem.aux();
  const AdmissibilityReport arep = validate_lambda(aux, cfg.problem.lambda, cfg.aux_resolution);
  rep["lambda_admissibility"] = to_json(arep);
  hard_fail |= !arep.pass;

  const RadialMesh mesh = RadialMesh::uniform(cfg.problem.grid.r_min, cfg.problem.grid.r_max,
                                              std::min(cfg.problem.grid.n, 4096),
                                              cfg.problem.N - 1);
  const EigenEstimate eig = quadratic_form_positivity(cfg.problem.params, cfg.problem.N, mesh);
  rep["hardy_positivity"] = to_json(eig);
  hard_fail |= eig.lambda_min < -1e-8;

  rep["pass"] = !hard_fail;
  sink.emit_json("validate.json", rep);
  std::cout << (hard_fail ? "validate: FAIL" : "validate: pass") << "\n";
  return hard_fail ? kExitFailedVerdict : kExitOk;
}

int cmd_kelvin(const RunConfig& cfg, const OutputSink& sink) {
  const KelvinPair pair =
      kelvin_transform_potentials(cfg.problem.V, cfg.problem.K, cfg.problem.f.p, cfg.problem.N);
  json rep = report_header(cfg);
  rep["V_hat"] = potential_to_json(pair.v_hat.canonical());
  rep["K_hat"] = potential_to_json(pair.k_hat.canonical());
  rep["kelvin_exponent_K"] = -(cfg.problem.N + 2.0 - cfg.problem.f.p * (cfg.problem.N - 2.0));
  if (cfg.growth_declared) {
    const GrowthClass mirrored = kelvin_mirror(cfg.growth, cfg.problem.f.p, cfg.problem.N);
    json g;
    g["tau"] = mirrored.tau;
    g["sigma"] = mirrored.sigma;
    g["gamma"] = mirrored.gamma;
    g["alpha"] = mirrored.alpha;
    rep["mirrored_growth"] = g;
  }
  sink.emit_json("kelvin.json", rep);
  std::cout << rep["V_hat"].dump() << "\n" << rep["K_hat"].dump() << "\n";
  return kExitOk;
}

int cmd_limit_solve(const RunConfig& cfg, const OutputSink& sink) {
  const LimitProblem problem =
      LimitProblem::make(cfg.limit.d, cfg.limit.a, cfg.limit.b, cfg.problem.f);
  const GroundState gs = solve_limit(problem);
  json rep = report_header(cfg);
  rep["d"] = problem.d;
  rep["a"] = problem.a;
  rep["b"] = problem.b;
  rep["w0"] = gs.w0;
  rep["energy"] = gs.energy;
  rep["nehari_residual"] = gs.nehari_residual;
  sink.emit_json("limit_solve.json", rep);
  sink.emit_csv("limit_profile.csv", "rho", "w", gs.mesh.r, gs.w);
  std::cout << "limit-solve: w0 = " << gs.w0 << ", E = " << gs.energy << "\n";
  return kExitOk;
}

int cmd_aux_pot(const RunConfig& cfg, const OutputSink& sink) {
  const AuxPotential aux = cfg.problem.aux();
  const auto r = lin_spaced(cfg.problem.lambda.r_lo, cfg.problem.lambda.r_hi, cfg.aux_resolution);
  std::vector<double> m(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) m[i] = aux(r[i]);
  const MinResult mn = find_min(aux, cfg.problem.lambda, cfg.find_min_resolution);
  const AdmissibilityReport arep = validate_lambda(aux, cfg.problem.lambda, cfg.aux_resolution);

  json rep = report_header(cfg);
  rep["admissibility"] = to_json(arep);
  rep["r_star"] = mn.r_star;
  rep["m_star"] = mn.m_star;
  rep["min_at_boundary"] = mn.boundary;
  rep["E11"] = aux.e11;
  sink.emit_json("aux_potential.json", rep);
  sink.emit_csv("aux_potential.csv", "r", "M", r, m);
  std::cout << "aux-pot: r* = " << mn.r_star << ", M(r*) = " << mn.m_star << "\n";
  return kExitOk;
}

json solution_json(const PenalizedProblem& problem, const DiscreteSolution& sol,
                   const CertificationReport& cert) {
  json j;
  j["eps"] = problem.eps;
  j["j_eps"] = sol.j_eps;
  j["c_eps"] = sol.c_eps;
  j["grad_norm"] = sol.grad_norm;
  j["norm_eps_sq"] = sol.norm_eps;
  j["t_residual"] = sol.t_residual;
  j["nehari_defect"] = sol.nehari_defect;
  j["iters"] = sol.iters;
  j["truncation_ok"] = sol.truncation_ok;
  j["certified"] = cert.certified;
  j["cert_margin"] = cert.margin;
  j["cert_worst_r"] = cert.worst_r;
  return j;
}

std::string trace_jsonl(const std::vector<TracePoint>& trace) {
  std::string out;
  for (const auto& t : trace) {
    json e = {{"iteration", t.iter}, {"J", t.energy}, {"grad_norm", t.grad_norm}};
    out += e.dump() + "\n";
  }
  return out;
}

int cmd_solve(const RunConfig& cfg, const OutputSink& sink, const CliOptions& opt,
              bool certify_only) {
  const AuxPotential aux = cfg.problem.aux();
  const MinResult mn = find_min(aux, cfg.problem.lambda, cfg.find_min_resolution);
  PenalizedProblem problem = cfg.problem.at_eps(cfg.eps);
  PenalizedSolveOptions sopt;
  sopt.grad_tol = cfg.grad_tol;
  sopt.max_iters = cfg.max_iters;
  sopt.seed_radius = mn.r_star;
  const DiscreteSolution sol = solve(problem, sopt);
  const CertificationReport cert = certify_original(problem, sol);

  json rep = report_header(cfg);
  rep["solution"] = solution_json(problem, sol, cert);
  rep["r_star"] = mn.r_star;
  try {
    const PeakInfo pk = peak_extract(problem.mesh, sol.u);
    rep["solution"]["r_eps"] = pk.r_eps;
    rep["solution"]["peak"] = pk.peak;
    const DecayFit fit = decay_fit(problem, sol, pk.r_eps, cfg.envelope_regime(), cfg.growth);
    rep["solution"]["lambda_fit"] = fit.lambda_fit;
    rep["solution"]["lambda_env"] = fit.lambda_env;
    rep["solution"]["envelope_ok"] = fit.envelope_ok;
    rep["solution"]["l2_norm"] = fit.l2_norm;
  } catch (const std::exception& e) {
    rep["solution"]["decay_fit_error"] = e.what();
  }

  sink.emit_json(certify_only ? "certify.json" : "solution.json", rep);
  if (!certify_only) {
    sink.emit_csv("solution.csv", "r", "u", problem.mesh.r, sol.u);
    if (sink.json_on)
      write_text((sink.dir / "trace.jsonl").string(), trace_jsonl(sol.trace));
  }
  std::cout << (certify_only ? "certify" : "solve") << ": eps = " << cfg.eps
            << ", c_eps = " << sol.c_eps << ", certified = " << (cert.certified ? "true" : "false")
            << "\n";
  if (opt.require_certified && !cert.certified) return kExitFailedVerdict;
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const OutputSink& sink, const CliOptions& opt) {
  SweepConfig scfg = cfg.to_sweep();
  const SweepResult result = run_sweep(scfg);

  json rep = report_header(cfg);
  rep["r_star"] = result.r_star;
  rep["inf_M"] = result.inf_m;
  json reports = json::array();
  for (const auto& r : result.reports) reports.push_back(to_json(r));
  rep["reports"] = reports;

  const Verdict conc =
      concentration_check(result.reports, result.inf_m, cfg.problem.lambda, cfg.tol.m_gap_rel);
  std::vector<double> ratios;
  const Verdict scal =
      energy_scaling_check(result.reports, cfg.problem.k, result.inf_m, cfg.tol, &ratios);
  rep["concentration_verdict"] = to_json(conc);
  rep["energy_scaling_verdict"] = to_json(scal);
  rep["energy_ratios"] = ratios;
  sink.emit_json("sweep.json", rep);

  // Per-eps profiles and envelope overlays.
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto& r = result.reports[i];
    if (!r.solved || result.profiles[i].empty()) continue;
    PenalizedProblem problem = cfg.problem.at_eps(r.eps);
    const std::string tag = std::to_string(i);
    sink.emit_csv("profile_eps_" + tag + ".csv", "r", "u", problem.mesh.r, result.profiles[i]);
    if (sink.csv_on && r.lambda_env > 0.0) {
      DecayEnvelope env = make_envelope(cfg.envelope_regime(), cfg.growth, 1.0, r.lambda_env,
                                        r.lambda_env, r.eps, cfg.problem.N);
      env.C = r.peak / envelope_eval(env, r.r_eps, r.r_eps);
      std::vector<double> ev(problem.mesh.size());
      for (std::size_t jn = 0; jn < ev.size(); ++jn)
        ev[jn] = envelope_eval(env, problem.mesh.r[jn], r.r_eps);
      write_dat((sink.dir / ("envelope_eps_" + tag + ".dat")).string(), {"r", "u", "envelope"},
                {problem.mesh.r, result.profiles[i], ev});
    }
  }

  bool all_certified = true;
  for (const auto& r : result.reports)
    if (!r.solved || !r.certified) all_certified = false;
  std::cout << "sweep: " << result.reports.size() << " eps values, r* = " << result.r_star
            << ", concentration " << to_json(conc)["status"].get<std::string>()
            << ", energy scaling " << to_json(scal)["status"].get<std::string>() << "\n";
  if (opt.require_certified && !all_certified) return kExitFailedVerdict;
  return kExitOk;
}

}  // namespace

int dispatch(const std::string& command, const RunConfig& cfg, const CliOptions& opt) {
#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
  try {
    const OutputSink sink = make_sink(cfg, opt);
    if (command == "validate") return cmd_validate(cfg, sink);
    if (command == "kelvin") return cmd_kelvin(cfg, sink);
    if (command == "limit-solve") return cmd_limit_solve(cfg, sink);
    if (command == "aux-pot") return cmd_aux_pot(cfg, sink);
    if (command == "solve") return cmd_solve(cfg, sink, opt, false);
    if (command == "certify") return cmd_solve(cfg, sink, opt, true);
    if (command == "sweep") return cmd_sweep(cfg, sink, opt);
    std::cerr << "unknown command: " << command
              << " (expected limit-solve | aux-pot | solve | sweep | certify | kelvin | validate)\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    for (std::size_t i = e.trace.size() > 5 ? e.trace.size() - 5 : 0; i < e.trace.size(); ++i)
      std::cerr << "  iter " << e.trace[i].iter << ": J = " << e.trace[i].energy
                << ", grad_norm = " << e.trace[i].grad_norm << "\n";
    return kExitSolverError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverError;
  }
}

}  // namespace spherecon
