#pragma once

#include <vector>

#include "rydmf/core.hpp"

namespace rydmf::oracle {

// Lindblad generator for d vec(rho)/dt = -i[H, rho] + sum_k D[c_k] rho, using
// the same row-major vectorization as the single-atom builder:
// vec(A rho B) = (A kron B^T) vec(rho).
Eigen::MatrixXcd lindblad_generator(const Eigen::MatrixXcd& h,
                                    const std::vector<Eigen::MatrixXcd>& collapse);

// Cascade decay operators sqrt(gamma_k) |k><k+1| of one atom.
std::vector<Eigen::MatrixXcd> single_atom_collapse(const SchemeParams& p);

// Steady state of a generator on a d-level system: one row replaced by the
// trace constraint, dense LU. Throws SolverError if not unique.
Eigen::MatrixXcd steady_state_of(const Eigen::MatrixXcd& generator, int dim);

struct PairSteadyState {
  Eigen::MatrixXcd pair;   // 16x16 on |alpha beta>, index 4*(alpha-1)+(beta-1)
  DensityMatrix reduced;   // trace over the second atom
  DensityMatrix reduced_other;  // trace over the first atom
  double rcond = 0.0;

  double double_rydberg_population() const { return pair(15, 15).real(); }
};

// Exact two-atom steady state with H = H_A x 1 + 1 x H_A + v12 s44 x s44 and
// independent decay of each atom.
PairSteadyState exact_pair_steady_state(const SchemeParams& p, double v12);

// Closed-form two-level steady state (levels 1, 2 only).
struct TwoLevelState {
  double rho22 = 0.0;
  cplx rho12;
};
TwoLevelState two_level_steady_state(double omega1, double delta1, double gamma1);

// Weak-probe linear response of the ladder as a nested continued fraction,
// using the coherence damping rates gamma1/2, gamma2/2, gamma3/2 of
// rho12, rho13, rho14.
cplx weak_probe_rho12(const SchemeParams& p);

}  // namespace rydmf::oracle
