#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rydmf/analysis.hpp"
#include "rydmf/cloud.hpp"
#include "rydmf/core.hpp"
#include "rydmf/ensemble.hpp"
#include "rydmf/meanfield.hpp"

namespace rydmf {

// Run configuration. Grammar:
//
//   # comment            (also ';'; trailing comments allowed after values)
//   [section]
//   key = value
//
// Frequencies are MHz with omega = 2*pi*nu; C6 is in 2*pi*MHz*um^6; lengths
// in um; density in um^-3. Unknown sections and keys are rejected.
struct SweepSettings {
  SweepParameter parameter = SweepParameter::delta1;
  double start = 0.0;  // config units (MHz, or n)
  double stop = 0.0;
  std::size_t points = 0;
  std::size_t realizations = 1;
  std::uint64_t master_seed = 0;
};

struct CloudSettings {
  CloudGeometry geometry;            // radius resolved from density if given
  std::optional<double> density;     // um^-3, as configured
};

struct FeatureWindow {
  double lo = 0.0;  // config units
  double hi = 0.0;
  double significance = 5.0;
};

// Scheme and interaction values exactly as written (MHz, 2*pi*MHz*um^6).
// Conversion to rad/s happens only in scheme_params()/interaction_params().
struct SchemeConfig {
  double omega1 = 0.0, omega2 = 0.0, omega3 = 0.0;
  double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0, gamma3 = 0.0;
};

struct InteractionConfig {
  double c6_ref = 0.0;
  double n_ref = 0.0;
  double n = 0.0;
  std::optional<double> c6;
};

struct RunConfig {
  SchemeConfig scheme;
  bool has_interaction = false;
  InteractionConfig interaction;
  bool has_cloud = false;
  CloudSettings cloud;
  bool has_sweep = false;
  SweepSettings sweep;
  SolverConfig solver;
  std::optional<SusceptibilityParams> susceptibility;
  std::optional<FeatureWindow> feature;
  std::string output_csv;
  std::string output_summary;

  SchemeParams scheme_params() const;
  InteractionParams interaction_params() const;

  // Internal-unit conversion for swept values and windows.
  double to_internal(double config_value) const;
  double to_config_units(double internal_value) const;

  void require_sweep_sections() const;  // scheme, interaction, cloud, sweep, solver
  SweepSpec sweep_spec() const;
};

// `source` names the input in error messages ("file:line: message").
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
// Reads an INI config, or a JSON run summary carrying "resolved_config".
RunConfig load_config(const std::string& path);

// Canonical, fully-resolved text; parse_config(to_config_text(c)) == c.
std::string to_config_text(const RunConfig& c);
std::string config_hash(const RunConfig& c);  // 16 hex digits, FNV-1a of the canonical text

}  // namespace rydmf
