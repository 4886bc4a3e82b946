#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rydmf/analysis.hpp"
#include "rydmf/config.hpp"
#include "rydmf/ensemble.hpp"

namespace rydmf {

std::string version_string();

struct SweepRun {
  SpectrumTable table;
  std::optional<FeatureReport> feature;  // location in config units
  std::string csv;
  std::string summary_json;
};

// Runs the configured sweep and renders its outputs. `threads` = 0 picks the
// default thread count; the output does not depend on it.
SweepRun run_sweep(const RunConfig& c, int threads = 0);

// CSV layout: '#' metadata lines, then the header
//   swept_value,rho11_mean,rho11_stderr,...,im_rho12_mean,im_rho12_stderr,unconverged_frac
// followed by re_chi/im_chi columns when [susceptibility] is present.
// Swept values are in config units, numbers use 12 significant digits.
std::string format_spectrum_csv(const RunConfig& c, const SpectrumTable& t);

struct EigenRun {
  std::vector<double> grid;                   // internal units
  std::vector<std::array<double, 4>> values;  // rad/s, ascending per row
  std::vector<AvoidedCrossing> crossings;
  std::string csv;          // swept_value,eig1..eig4 in MHz, crossing report appended
  std::string report_json;  // crossing report
};

// Requires [scheme] and a [sweep] over delta1, delta2 or delta3.
EigenRun run_eigen(const RunConfig& c);

}  // namespace rydmf
