#include "rydmf/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rydmf/obe.hpp"

namespace rydmf {

std::string_view to_string(InitialGuess g) {
  switch (g) {
    case InitialGuess::zeros: return "zeros";
    case InitialGuess::non_interacting: return "non-interacting";
    case InitialGuess::provided: return "provided";
  }
  return "?";
}

InitialGuess parse_initial_guess(std::string_view name) {
  if (name == "zeros") return InitialGuess::zeros;
  if (name == "non-interacting" || name == "non_interacting") return InitialGuess::non_interacting;
  if (name == "provided") return InitialGuess::provided;
  throw ConfigError("unknown initial_guess '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw ConfigError("solver: tolerance must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("solver: damping must lie in (0, 1]");
  if (max_iterations < 1) throw ConfigError("solver: max_iterations must be at least 1");
}

std::vector<double> compute_shifts(const Eigen::MatrixXd& potentials, std::span<const double> rho44) {
  const auto n = static_cast<Eigen::Index>(rho44.size());
  if (potentials.rows() != n || potentials.cols() != n) {
    throw Error("compute_shifts: potential table and population sizes differ");
  }
  std::vector<double> shifts(rho44.size(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) s += potentials(i, j) * rho44[j];
    }
    shifts[i] = s;
  }
  return shifts;
}

namespace {

void solve_atoms(const SchemeParams& p, std::span<const double> shifts,
                 std::vector<DensityMatrix>& atoms) {
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    try {
      atoms[i] = steady_state(p, shifts[i]);
    } catch (const SolverError& e) {
      throw SolverError("atom " + std::to_string(i) + ": " + e.what(), e.rcond());
    }
  }
}

}  // namespace

MeanFieldResult self_consistent_solve(const SchemeParams& p, const Cloud& cloud,
                                      const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  const std::size_t n = cloud.size();
  MeanFieldResult out;
  out.atoms.resize(n);
  MeanFieldState& st = out.state;

  std::vector<double> rho44(n, 0.0);
  switch (cfg.initial_guess) {
    case InitialGuess::zeros:
      break;
    case InitialGuess::provided:
      if (cfg.provided.size() != n) {
        throw ConfigError("solver: provided initial guess has wrong length");
      }
      rho44 = cfg.provided;
      break;
    case InitialGuess::non_interacting: {
      const std::vector<double> zero(n, 0.0);
      solve_atoms(p, zero, out.atoms);
      for (std::size_t i = 0; i < n; ++i) rho44[i] = out.atoms[i].population(4);
      st.iteration = 1;
      break;
    }
  }

  std::vector<double> shifts;
  while (st.iteration < cfg.max_iterations) {
    shifts = compute_shifts(cloud.potentials, rho44);
    solve_atoms(p, shifts, out.atoms);
    ++st.iteration;

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual = std::max(residual, std::abs(out.atoms[i].population(4) - rho44[i]));
    }
    st.residual = residual;
    st.residual_history.push_back(residual);
    if (residual < cfg.tolerance) {
      st.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      rho44[i] = (1.0 - cfg.damping) * rho44[i] + cfg.damping * out.atoms[i].population(4);
    }
  }

  if (!st.converged) {
    // Keep the returned atoms consistent with the reported shifts.
    shifts = compute_shifts(cloud.potentials, rho44);
    solve_atoms(p, shifts, out.atoms);
  }
  st.rho44 = std::move(rho44);
  st.shifts = std::move(shifts);
  return out;
}

}  // namespace rydmf
