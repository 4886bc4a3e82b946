#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace rydmf {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr int kLevels = 4;

// Error hierarchy. Everything thrown by the library derives from Error so
// callers can catch once at the boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double rcond)
      : Error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};
class IntegrationError : public Error {
 public:
  using Error::Error;
};
class SamplingError : public Error {
 public:
  using Error::Error;
};

// Unit policy: every frequency-like quantity is stored in rad/s. Config files
// and CSV output use MHz with the 2*pi factor implicit (omega = 2*pi*nu).
inline constexpr double mhz_to_angular(double mhz) { return kTwoPi * 1e6 * mhz; }
inline constexpr double angular_to_mhz(double w) { return w / (kTwoPi * 1e6); }

// Four-level ladder |1> -> |2> -> |3> -> |4>, all values in rad/s.
// gamma1..gamma3 are the decay rates of |2>, |3>, |4> into the level below.
struct SchemeParams {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;

  void validate() const;
  double three_photon_detuning() const { return delta1 + delta2 + delta3; }
  double max_rate() const;
};

// C6 is either given directly or scaled from a reference value as n^11.
// Units: rad/s * um^6.
struct InteractionParams {
  double c6_ref = 0.0;
  double n_ref = 0.0;
  double n = 0.0;
  std::optional<double> c6_direct;

  void validate() const;
};

double c6_from_n(const InteractionParams& ip);

// Bundles 2*rho^2/(hbar*eps0) into one user-supplied scale.
struct SusceptibilityParams {
  double prefactor = 1.0;
  void validate() const;
};

enum class SweepParameter { delta1, delta2, delta3, omega1, omega2, omega3, n };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);
bool is_frequency(SweepParameter p);
void apply_parameter(SweepParameter p, double value, SchemeParams& scheme,
                     InteractionParams& interaction);

// Reduced single-atom state. Accessors use physical level labels 1..4.
class DensityMatrix {
 public:
  using Matrix = Eigen::Matrix<cplx, 4, 4>;

  DensityMatrix() : m_(Matrix::Zero()) { m_(0, 0) = 1.0; }
  explicit DensityMatrix(const Matrix& m) : m_(m) {}

  static DensityMatrix pure_level(int level);

  cplx operator()(int alpha, int beta) const { return m_(alpha - 1, beta - 1); }
  double population(int level) const { return m_(level - 1, level - 1).real(); }
  cplx probe_coherence() const { return m_(0, 1); }

  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  double hermiticity_error() const;
  // Throws Error if the state is outside the documented tolerances.
  void check_valid(double tol_trace = 1e-9, double tol_herm = 1e-12) const;

 private:
  Matrix m_;
};

}  // namespace rydmf
