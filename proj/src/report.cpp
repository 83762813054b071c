#include "spherecon/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "spherecon/version.hpp"

namespace spherecon {

using nlohmann::json;

namespace {

// JSON cannot carry infinities; clamp margins of +inf to a sentinel string.
json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

json report_header(const RunConfig& cfg) {
  json j;
  j["artifact_version"] = kVersion;
  j["config"] = cfg.resolved;
  return j;
}

json to_json(const GrowthReport& rep) {
  auto render = [](const std::vector<GrowthCheck>& cs) {
    json arr = json::array();
    for (const auto& c : cs)
      arr.push_back({{"condition", c.condition},
                     {"surrogate", finite_or_string(c.surrogate)},
                     {"threshold", finite_or_string(c.threshold)},
                     {"pass", c.pass}});
    return arr;
  };
  return {{"pass", rep.pass},
          {"checks", render(rep.checks)},
          {"diagnostics", render(rep.diagnostics)}};
}

json to_json(const FCertificate& cert) {
  json conds = json::array();
  for (const auto& c : cert.conditions) {
    json e = {{"name", c.name}, {"pass", c.pass}};
    if (!c.pass) e["violation_s"] = c.violation_s;
    conds.push_back(e);
  }
  return {{"pass", cert.pass}, {"conditions", conds}};
}

json to_json(const AdmissibilityReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"margin", finite_or_string(c.margin)}});
  return {{"pass", rep.pass},
          {"inf_interior", finite_or_string(rep.inf_interior)},
          {"inf_boundary", finite_or_string(rep.inf_boundary)},
          {"checks", checks}};
}

json to_json(const EigenEstimate& est) {
  return {{"lambda_min", est.lambda_min},
          {"iterations", est.iterations},
          {"residual", est.residual},
          {"converged", est.converged}};
}

json to_json(const ConcentrationReport& rep) {
  json j;
  j["eps"] = rep.eps;
  j["solved"] = rep.solved;
  if (!rep.solved) {
    j["error"] = rep.error;
    return j;
  }
  j["r_eps"] = rep.r_eps;
  j["peak"] = rep.peak;
  j["m_at_peak"] = finite_or_string(rep.m_at_peak);
  j["c_eps"] = rep.c_eps;
  j["scaled_energy"] = rep.scaled_energy;
  j["lambda_fit"] = rep.lambda_fit;
  j["lambda_env"] = rep.lambda_env;
  j["certified"] = rep.certified;
  j["cert_margin"] = finite_or_string(rep.cert_margin);
  j["l2_norm"] = rep.l2_norm;
  j["l2_tail_finite"] = rep.l2_tail_finite;
  j["corollary_L2_applies"] = rep.corollary_applies;
  j["envelope_ok"] = rep.envelope_ok;
  j["envelope_vacuous"] = rep.envelope_vacuous;
  j["grad_norm"] = rep.grad_norm;
  j["iters"] = rep.iters;
  j["truncation_ok"] = rep.truncation_ok;
  j["peak_at_boundary"] = rep.peak_at_boundary;
  return j;
}

json to_json(const Verdict& v) {
  const char* s = v.status == VerdictStatus::Pass
                      ? "pass"
                      : (v.status == VerdictStatus::Fail ? "fail" : "insufficient");
  return {{"status", s}, {"detail", v.detail}};
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_csv(const std::string& path, const std::string& h1, const std::string& h2,
               std::span<const double> col1, std::span<const double> col2) {
  if (col1.size() != col2.size()) throw std::invalid_argument("write_csv: column size mismatch");
  std::string text = h1 + "," + h2 + "\n";
  for (std::size_t i = 0; i < col1.size(); ++i)
    text += format_double(col1[i]) + "," + format_double(col2[i]) + "\n";
  write_text(path, text);
}

void write_dat(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<std::span<const double>>& cols) {
  if (cols.empty()) throw std::invalid_argument("write_dat: no columns");
  std::string text = "#";
  for (const auto& h : headers) text += " " + h;
  text += "\n";
  for (std::size_t i = 0; i < cols[0].size(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) text += " ";
      text += format_double(cols[c][i]);
    }
    text += "\n";
  }
  write_text(path, text);
}

}  // namespace spherecon
