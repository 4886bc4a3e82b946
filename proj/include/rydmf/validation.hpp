#pragma once

#include <span>
#include <string>
#include <vector>

#include "rydmf/core.hpp"
#include "rydmf/meanfield.hpp"

namespace rydmf {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PairComparisonRow {
  double v12 = 0.0;          // rad/s
  double exact_rho44 = 0.0;  // reduced single-atom Rydberg population
  double mf_rho44 = 0.0;     // symmetric-pair mean-field fixed point
  double rel_diff = 0.0;     // |mf - exact| / exact
  bool converged = false;
};

// Mean-field versus exact two-atom steady state for a pair at distance
// 1 um with C6 = v12.
std::vector<PairComparisonRow> compare_mean_field_to_exact_pair(const SchemeParams& p,
                                                                std::span<const double> v12_values,
                                                                const SolverConfig& cfg);

struct ValidationOptions {
  // Multiplies the mean-field shift handed to the single-atom solver. Any
  // value other than 1 simulates a sign or scale error and must be caught.
  double shift_sign = 1.0;
  int random_parameter_sets = 5;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::vector<PairComparisonRow> pair_table;

  bool all_passed() const;
  std::string to_json() const;
  std::string to_text() const;
};

ValidationReport run_validation(const ValidationOptions& opts = {});

}  // namespace rydmf
