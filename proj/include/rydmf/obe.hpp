#pragma once

#include <array>

#include "rydmf/core.hpp"

namespace rydmf {

using SuperMatrix = Eigen::Matrix<cplx, 16, 16>;
using RhoVector = Eigen::Matrix<cplx, 16, 1>;

// Row-major vectorization of rho: component 4*(alpha-1) + (beta-1) holds
// rho_{alpha beta}. Fixed so that golden files stay portable.
constexpr int vec_index(int alpha, int beta) { return 4 * (alpha - 1) + (beta - 1); }

RhoVector vectorize(const DensityMatrix& rho);
DensityMatrix::Matrix unvectorize(const RhoVector& v);

// Generator of d vec(rho)/dt for one atom. `shift` is the mean-field level
// shift of |4>, which enters as Delta3 -> Delta3 - shift.
struct Liouvillian {
  SuperMatrix matrix;
  double shift = 0.0;

  RhoVector apply(const RhoVector& v) const { return matrix * v; }
  double norm_inf() const;
};

Liouvillian build_liouvillian(const SchemeParams& p, double shift);

// Single-atom RWA Hamiltonian divided by hbar (rad/s), including the shift on
// |4>. Used for eigenvalues and by the generic Lindblad builder.
Eigen::Matrix4cd hamiltonian(const SchemeParams& p, double shift = 0.0);

// Dense solve with the rho11 equation replaced by the trace constraint.
// Throws SolverError when the steady state is not unique.
DensityMatrix steady_state(const SchemeParams& p, double shift);

// Smallest reciprocal condition number accepted by steady_state: 16 machine
// epsilons, i.e. singular to working precision for a 16x16 system.
inline constexpr double kSteadyStateMinRcond = 16 * 2.220446049250313e-16;

// Reciprocal condition estimate of an LU factorization. The pivot ratio
// catches exactly singular systems that the 1-norm estimator can miss.
template <class Lu>
double rcond_estimate(const Lu& lu) {
  const Eigen::VectorXd d = lu.matrixLU().diagonal().cwiseAbs();
  const double pivots = d.maxCoeff() > 0.0 ? d.minCoeff() / d.maxCoeff() : 0.0;
  const double est = lu.rcond();
  return est < pivots ? est : pivots;
}

struct EvolveTolerances {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
};

// Adaptive Dormand-Prince integration of d vec(rho)/dt = L vec(rho). Times in s.
DensityMatrix time_evolve(const SchemeParams& p, double shift, const DensityMatrix& rho0,
                          double t_final, double dt_max, EvolveTolerances tol = {});

// Eigenvalues of the decay-free, interaction-free Hamiltonian, ascending (rad/s).
std::array<double, 4> dressed_eigenvalues(const SchemeParams& p);

}  // namespace rydmf
