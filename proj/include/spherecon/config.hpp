// config.hpp — JSON run configuration: parsing, defaulting, validation.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spherecon/asymptotics.hpp"

namespace spherecon {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> fields = {})
      : std::runtime_error(what), violated_fields(std::move(fields)) {}
  std::vector<std::string> violated_fields;
};

struct RunConfig {
  ProblemTemplate problem;
  std::vector<double> eps_list;
  double eps = 0.0;  // single-solve epsilon (default: smallest of eps_list)
  bool warm_start = true;
  bool growth_declared = false;
  GrowthClass growth;
  SweepTolerances tol;
  double grad_tol = 1e-8;
  int max_iters = 20000;
  int aux_resolution = 4096;
  int find_min_resolution = 65536;
  struct LimitSection {
    int d = 1;
    double a = 1.0;
    double b = 1.0;
  } limit;
  std::string out_dir = "out";
  std::vector<std::string> formats = {"json", "csv"};

  nlohmann::json resolved;  // fully-defaulted echo of the configuration

  SweepConfig to_sweep() const;
  EnvelopeRegime envelope_regime() const;
};

RadialPotential potential_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json potential_to_json(const RadialPotential& pot);

// Parses and validates; throws ConfigError listing every violated field.
RunConfig parse_config(const nlohmann::json& j);

// Reads the file; parse errors are reported with line/column.
RunConfig load_config(const std::string& path);

}  // namespace spherecon
