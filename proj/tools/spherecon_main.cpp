// spherecon — command-line driver for the concentration toolkit.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spherecon/cli.hpp"
#include "spherecon/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spherecon: penalized solver for radial Schrodinger concentration on spheres"};
  app.set_version_flag("--version", spherecon::kVersion);

  std::string config_path;
  spherecon::CliOptions opt;

  app.add_option("--config", config_path, "Path to the JSON run configuration")->required();
  app.add_option("--out", opt.out_dir, "Output directory (overrides output.directory)");
  app.add_flag("--require-certified", opt.require_certified,
               "Exit 3 unless the run is certified to solve the original equation");
  app.add_option("--threads", opt.threads, "OpenMP thread count (0 = default)");
  app.add_option("--format", opt.format, "Report formats: json, csv or all")
      ->check(CLI::IsMember({"json", "csv", "all"}));

  app.require_subcommand(1);
  const char* names[] = {"limit-solve", "aux-pot", "solve", "sweep", "certify", "kelvin",
                         "validate"};
  const char* descs[] = {"Solve the limit equation ground state",
                         "Evaluate the auxiliary potential and its minimizer",
                         "Solve the penalized problem at a single epsilon",
                         "Run the epsilon sweep with concentration diagnostics",
                         "Solve and certify that the penalty is inactive",
                         "Echo the Kelvin-transformed potentials",
                         "Validate nonlinearity, growth classes and the annulus"};
  for (int i = 0; i < 7; ++i) app.add_subcommand(names[i], descs[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints usage / help text
    return rc == 0 ? 0 : spherecon::kExitConfigError;
  }

  spherecon::RunConfig cfg;
  try {
    cfg = spherecon::load_config(config_path);
  } catch (const spherecon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return spherecon::kExitConfigError;
  }

  return spherecon::dispatch(app.get_subcommands().front()->get_name(), cfg, opt);
}
