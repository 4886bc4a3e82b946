#include "rydmf/obe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace rydmf {

namespace {

constexpr cplx kI{0.0, 1.0};

// Accumulates one equation of motion at a time. Every term added to the
// equation for rho_ab is mirrored, conjugated, into the equation for rho_ba,
// which makes the generator Hermiticity-preserving by construction.
class EquationWriter {
 public:
  explicit EquationWriter(SuperMatrix& m) : m_(m) {}

  void term(int a, int b, int c, int d, cplx coeff) {
    m_(vec_index(a, b), vec_index(c, d)) += coeff;
    if (a != b) m_(vec_index(b, a), vec_index(d, c)) += std::conj(coeff);
  }

 private:
  SuperMatrix& m_;
};

}  // namespace

RhoVector vectorize(const DensityMatrix& rho) {
  RhoVector v;
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) v(vec_index(a, b)) = rho(a, b);
  return v;
}

DensityMatrix::Matrix unvectorize(const RhoVector& v) {
  DensityMatrix::Matrix m;
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) m(a - 1, b - 1) = v(vec_index(a, b));
  return m;
}

double Liouvillian::norm_inf() const { return matrix.cwiseAbs().rowwise().sum().maxCoeff(); }

Liouvillian build_liouvillian(const SchemeParams& p, double shift) {
  p.validate();
  Liouvillian out{SuperMatrix::Zero(), shift};
  EquationWriter eq(out.matrix);

  const cplx h1 = 0.5 * kI * p.omega1;
  const cplx h2 = 0.5 * kI * p.omega2;
  const cplx h3 = 0.5 * kI * p.omega3;
  const double g1 = p.gamma1, g2 = p.gamma2, g3 = p.gamma3;
  const double d1 = p.delta1, d2 = p.delta2;
  // Mean-field shift of |4>: Delta3 -> Delta3 - shift.
  const double d3 = p.delta3 - shift;

  // rho11
  eq.term(1, 1, 1, 2, h1);
  eq.term(1, 1, 2, 1, -h1);
  eq.term(1, 1, 2, 2, g1);
  // rho22
  eq.term(2, 2, 1, 2, -h1);
  eq.term(2, 2, 2, 1, h1);
  eq.term(2, 2, 2, 3, h2);
  eq.term(2, 2, 3, 2, -h2);
  eq.term(2, 2, 3, 3, g2);
  eq.term(2, 2, 2, 2, -g1);
  // rho33
  eq.term(3, 3, 2, 3, -h2);
  eq.term(3, 3, 3, 2, h2);
  eq.term(3, 3, 3, 4, h3);
  eq.term(3, 3, 4, 3, -h3);
  eq.term(3, 3, 4, 4, g3);
  eq.term(3, 3, 3, 3, -g2);
  // rho44
  eq.term(4, 4, 3, 4, -h3);
  eq.term(4, 4, 4, 3, h3);
  eq.term(4, 4, 4, 4, -g3);
  // rho12
  eq.term(1, 2, 1, 1, h1);
  eq.term(1, 2, 2, 2, -h1);
  eq.term(1, 2, 1, 3, h2);
  eq.term(1, 2, 1, 2, -kI * d1 - 0.5 * g1);
  // rho13
  eq.term(1, 3, 1, 4, h3);
  eq.term(1, 3, 1, 2, h2);
  eq.term(1, 3, 2, 3, -h1);
  eq.term(1, 3, 1, 3, -kI * (d1 + d2) - 0.5 * g2);
  // rho14
  eq.term(1, 4, 1, 3, h3);
  eq.term(1, 4, 2, 4, -h1);
  eq.term(1, 4, 1, 4, -kI * (d1 + d2 + d3) - 0.5 * g3);
  // rho23; the Omega3 term carries the factor i like every other drive term.
  eq.term(2, 3, 2, 2, h2);
  eq.term(2, 3, 3, 3, -h2);
  eq.term(2, 3, 1, 3, -h1);
  eq.term(2, 3, 2, 4, h3);
  eq.term(2, 3, 2, 3, -kI * d2 - 0.5 * (g1 + g2));
  // rho24
  eq.term(2, 4, 2, 3, h3);
  eq.term(2, 4, 3, 4, -h2);
  eq.term(2, 4, 1, 4, -h1);
  eq.term(2, 4, 2, 4, -kI * (d2 + d3) - 0.5 * (g1 + g3));
  // rho34
  eq.term(3, 4, 3, 3, h3);
  eq.term(3, 4, 4, 4, -h3);
  eq.term(3, 4, 2, 4, -h2);
  eq.term(3, 4, 3, 4, -kI * d3 - 0.5 * (g2 + g3));

  return out;
}

Eigen::Matrix4cd hamiltonian(const SchemeParams& p, double shift) {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(1, 1) = -p.delta1;
  h(2, 2) = -(p.delta1 + p.delta2);
  h(3, 3) = -(p.delta1 + p.delta2 + p.delta3) + shift;
  h(0, 1) = h(1, 0) = 0.5 * p.omega1;
  h(1, 2) = h(2, 1) = 0.5 * p.omega2;
  h(2, 3) = h(3, 2) = 0.5 * p.omega3;
  return h;
}

DensityMatrix steady_state(const SchemeParams& p, double shift) {
  const Liouvillian L = build_liouvillian(p, shift);
  SuperMatrix a = L.matrix;
  RhoVector b = RhoVector::Zero();
  a.row(0).setZero();
  for (int k = 1; k <= 4; ++k) a(0, vec_index(k, k)) = 1.0;
  b(0) = 1.0;
  // Row equilibration: a large shift only inflates the |4> coherence rows.
  for (int r = 0; r < a.rows(); ++r) {
    const double m = a.row(r).cwiseAbs().maxCoeff();
    if (m > 0.0) {
      a.row(r) /= m;
      b(r) /= m;
    }
  }

  const Eigen::PartialPivLU<SuperMatrix> lu(a);
  const double rcond = rcond_estimate(lu);
  if (!(rcond > kSteadyStateMinRcond)) {
    std::ostringstream msg;
    msg << "steady state is not unique (condition estimate rcond=" << rcond << ")";
    throw SolverError(msg.str(), rcond);
  }
  DensityMatrix::Matrix rho = unvectorize(lu.solve(b));
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix time_evolve(const SchemeParams& p, double shift, const DensityMatrix& rho0,
                          double t_final, double dt_max, EvolveTolerances tol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<cplx, 16>;

  rho0.check_valid(1e-9, 1e-12);
  if (t_final < 0.0) throw IntegrationError("t_final must be non-negative");
  if (t_final == 0.0) return rho0;
  if (!(dt_max > 0.0)) throw IntegrationError("dt_max must be positive");

  const SuperMatrix L = build_liouvillian(p, shift).matrix;
  auto rhs = [&L](const State& x, State& dxdt, double) {
    Eigen::Map<const RhoVector> xv(x.data());
    Eigen::Map<RhoVector> dv(dxdt.data());
    dv.noalias() = L * xv;
  };

  State x;
  Eigen::Map<RhoVector>(x.data()) = vectorize(rho0);

  const double dt0 = std::min(dt_max, t_final / 100.0);
  auto stepper = odeint::make_controlled(tol.abs_tol, tol.rel_tol, dt_max,
                                         odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, t_final, dt0);
  } catch (const odeint::odeint_error& e) {
    throw IntegrationError(std::string("step size underflow: ") + e.what());
  }
  DensityMatrix::Matrix m = unvectorize(Eigen::Map<const RhoVector>(x.data()));
  if (!m.allFinite()) throw IntegrationError("integration produced non-finite values");
  return DensityMatrix(m);
}

std::array<double, 4> dressed_eigenvalues(const SchemeParams& p) {
  p.validate();
  const Eigen::Matrix4d h = hamiltonian(p, 0.0).real();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h, Eigen::EigenvaluesOnly);
  std::array<double, 4> ev{};
  for (int k = 0; k < 4; ++k) ev[k] = es.eigenvalues()(k);
  return ev;
}

}  // namespace rydmf
