// report.hpp — JSON report assembly and CSV/.dat profile export. Floating
// point values are written in shortest round-trip form so identical runs
// produce byte-identical files.

#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spherecon/asymptotics.hpp"
#include "spherecon/auxiliary_potential.hpp"
#include "spherecon/config.hpp"
#include "spherecon/nonlinearity.hpp"
#include "spherecon/potentials.hpp"

namespace spherecon {

// Report skeleton carrying the resolved config and the artifact version.
nlohmann::json report_header(const RunConfig& cfg);

nlohmann::json to_json(const GrowthReport& rep);
nlohmann::json to_json(const FCertificate& cert);
nlohmann::json to_json(const AdmissibilityReport& rep);
nlohmann::json to_json(const EigenEstimate& est);
nlohmann::json to_json(const ConcentrationReport& rep);
nlohmann::json to_json(const Verdict& v);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& j);

// Two-column CSV with a header line.
void write_csv(const std::string& path, const std::string& h1, const std::string& h2,
               std::span<const double> col1, std::span<const double> col2);

// gnuplot-compatible .dat: '#' header comment, whitespace-separated columns.
void write_dat(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<std::span<const double>>& cols);

std::string format_double(double v);  // shortest round-trip

}  // namespace spherecon
