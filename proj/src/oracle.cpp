#include "rydmf/oracle.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "rydmf/obe.hpp"

namespace rydmf::oracle {

using Eigen::MatrixXcd;

MatrixXcd lindblad_generator(const MatrixXcd& h, const std::vector<MatrixXcd>& collapse) {
  const Eigen::Index d = h.rows();
  const MatrixXcd id = MatrixXcd::Identity(d, d);
  const cplx i(0.0, 1.0);
  MatrixXcd gen = -i * (Eigen::kroneckerProduct(h, id).eval() -
                        Eigen::kroneckerProduct(id, h.transpose()).eval());
  for (const MatrixXcd& c : collapse) {
    const MatrixXcd cdc = c.adjoint() * c;
    gen += Eigen::kroneckerProduct(c, c.conjugate()).eval();
    gen -= 0.5 * Eigen::kroneckerProduct(cdc, id).eval();
    gen -= 0.5 * Eigen::kroneckerProduct(id, cdc.transpose()).eval();
  }
  return gen;
}

std::vector<MatrixXcd> single_atom_collapse(const SchemeParams& p) {
  std::vector<MatrixXcd> ops;
  const double rates[3] = {p.gamma1, p.gamma2, p.gamma3};
  for (int k = 0; k < 3; ++k) {
    if (rates[k] <= 0.0) continue;
    MatrixXcd c = MatrixXcd::Zero(4, 4);
    c(k, k + 1) = std::sqrt(rates[k]);
    ops.push_back(c);
  }
  return ops;
}

namespace {

MatrixXcd solve_trace_constrained(const MatrixXcd& generator, int dim, double& rcond_out) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  if (generator.rows() != n || generator.cols() != n) {
    throw Error("steady_state_of: generator has the wrong size");
  }
  MatrixXcd a = generator;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
  a.row(0).setZero();
  for (int k = 0; k < dim; ++k) a(0, static_cast<Eigen::Index>(k) * (dim + 1)) = 1.0;
  b(0) = 1.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const double m = a.row(r).cwiseAbs().maxCoeff();
    if (m > 0.0) {
      a.row(r) /= m;
      b(r) /= m;
    }
  }

  const Eigen::PartialPivLU<MatrixXcd> lu(a);
  const double rcond = rcond_estimate(lu);
  if (!(rcond > kSteadyStateMinRcond)) {
    std::ostringstream msg;
    msg << "steady state is not unique (condition estimate rcond=" << rcond << ")";
    throw SolverError(msg.str(), rcond);
  }
  const Eigen::VectorXcd x = lu.solve(b);
  MatrixXcd rho(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) rho(r, c) = x(static_cast<Eigen::Index>(r) * dim + c);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  rho /= rho.trace().real();
  rcond_out = rcond;
  return rho;
}

}  // namespace

MatrixXcd steady_state_of(const MatrixXcd& generator, int dim) {
  double rcond = 0.0;
  return solve_trace_constrained(generator, dim, rcond);
}

PairSteadyState exact_pair_steady_state(const SchemeParams& p, double v12) {
  p.validate();
  const MatrixXcd h1 = hamiltonian(p, 0.0);
  const MatrixXcd id = MatrixXcd::Identity(4, 4);
  MatrixXcd proj = MatrixXcd::Zero(4, 4);
  proj(3, 3) = 1.0;

  const MatrixXcd h = Eigen::kroneckerProduct(h1, id).eval() +
                      Eigen::kroneckerProduct(id, h1).eval() +
                      v12 * Eigen::kroneckerProduct(proj, proj).eval();
  std::vector<MatrixXcd> collapse;
  for (const MatrixXcd& c : single_atom_collapse(p)) {
    collapse.push_back(Eigen::kroneckerProduct(c, id).eval());
    collapse.push_back(Eigen::kroneckerProduct(id, c).eval());
  }

  PairSteadyState out;
  out.pair = solve_trace_constrained(lindblad_generator(h, collapse), 16, out.rcond);

  DensityMatrix::Matrix first = DensityMatrix::Matrix::Zero();
  DensityMatrix::Matrix second = DensityMatrix::Matrix::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int ap = 0; ap < 4; ++ap) {
      for (int b = 0; b < 4; ++b) {
        first(a, ap) += out.pair(4 * a + b, 4 * ap + b);
        second(a, ap) += out.pair(4 * b + a, 4 * b + ap);
      }
    }
  }
  out.reduced = DensityMatrix(first);
  out.reduced_other = DensityMatrix(second);
  return out;
}

TwoLevelState two_level_steady_state(double omega1, double delta1, double gamma1) {
  TwoLevelState s;
  const double q = 0.25 * omega1 * omega1;
  s.rho22 = q / (delta1 * delta1 + 0.25 * gamma1 * gamma1 + 2.0 * q);
  s.rho12 = cplx(0.0, 0.5 * omega1) * (1.0 - 2.0 * s.rho22) / cplx(0.5 * gamma1, delta1);
  return s;
}

cplx weak_probe_rho12(const SchemeParams& p) {
  const cplx i(0.0, 1.0);
  // An empty optional stands for an infinite denominator.
  const auto fold = [](cplx base, double coupling, std::optional<cplx> inner) -> std::optional<cplx> {
    if (coupling == 0.0 || !inner) return base;
    if (std::abs(*inner) == 0.0) return std::nullopt;
    return base + 0.25 * coupling * coupling / *inner;
  };
  const std::optional<cplx> d4 = 0.5 * p.gamma3 + i * (p.delta1 + p.delta2 + p.delta3);
  const auto d3 = fold(0.5 * p.gamma2 + i * (p.delta1 + p.delta2), p.omega3, d4);
  const auto d2 = fold(0.5 * p.gamma1 + i * p.delta1, p.omega2, d3);
  if (!d2) return 0.0;
  if (std::abs(*d2) == 0.0) throw Error("weak_probe_rho12: response diverges (gamma1 = 0 at resonance)");
  return 0.5 * i * p.omega1 / *d2;
}

}  // namespace rydmf::oracle
