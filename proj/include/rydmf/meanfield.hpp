#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rydmf/cloud.hpp"
#include "rydmf/core.hpp"

namespace rydmf {

enum class InitialGuess { zeros, non_interacting, provided };

std::string_view to_string(InitialGuess g);
InitialGuess parse_initial_guess(std::string_view name);

struct SolverConfig {
  double tolerance = 1e-6;     // on max_i |delta rho44_i|
  int max_iterations = 500;
  double damping = 0.5;        // alpha in (0, 1]
  InitialGuess initial_guess = InitialGuess::non_interacting;
  std::vector<double> provided;  // used with InitialGuess::provided

  void validate() const;
};

// `rho44` is the guess the shifts were computed from, so
// shifts[i] == sum_{j != i} V_ij rho44[j] holds exactly.
struct MeanFieldState {
  std::vector<double> rho44;
  std::vector<double> shifts;
  // Counts every sweep of per-atom steady-state solves, including the sweep
  // that produces a non-interacting initial guess.
  int iteration = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

struct MeanFieldResult {
  std::vector<DensityMatrix> atoms;  // steady states at state.shifts
  MeanFieldState state;
};

// delta_i = sum_{j != i} V_ij rho44_j
std::vector<double> compute_shifts(const Eigen::MatrixXd& potentials, std::span<const double> rho44);

// Damped fixed-point iteration on the Rydberg populations:
//   shifts <- V rho44; rho44_new <- per-atom steady state;
//   residual <- max |rho44_new - rho44|; rho44 <- (1 - a) rho44 + a rho44_new.
// Non-convergence is reported through state.converged, not thrown. Inner
// solver failures are rethrown as SolverError naming the atom.
MeanFieldResult self_consistent_solve(const SchemeParams& p, const Cloud& cloud,
                                      const SolverConfig& cfg);

}  // namespace rydmf
