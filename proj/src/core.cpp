#include "rydmf/core.hpp"

#include <algorithm>
#include <cmath>

namespace rydmf {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be finite");
  }
}

}  // namespace

void SchemeParams::validate() const {
  const std::pair<double, const char*> all[] = {
      {omega1, "omega1"}, {omega2, "omega2"}, {omega3, "omega3"},
      {delta1, "delta1"}, {delta2, "delta2"}, {delta3, "delta3"},
      {gamma1, "gamma1"}, {gamma2, "gamma2"}, {gamma3, "gamma3"}};
  for (auto [v, name] : all) require_finite(v, name);
  if (omega1 < 0 || omega2 < 0 || omega3 < 0) {
    throw ConfigError("Rabi frequencies must be non-negative");
  }
  if (gamma1 < 0 || gamma2 < 0 || gamma3 < 0) {
    throw ConfigError("decay rates must be non-negative");
  }
}

double SchemeParams::max_rate() const {
  return std::max({omega1, omega2, omega3, std::abs(delta1), std::abs(delta2),
                   std::abs(delta3), gamma1, gamma2, gamma3});
}

void InteractionParams::validate() const {
  const bool scaled = n > 0.0;
  if (scaled && c6_direct) {
    throw ConfigError("interaction: give either n (with c6_ref, n_ref) or c6, not both");
  }
  if (!scaled && !c6_direct) {
    throw ConfigError("interaction: neither n (with c6_ref, n_ref) nor c6 given");
  }
  if (scaled) {
    require_finite(c6_ref, "c6_ref");
    if (!(n_ref > 0.0)) throw ConfigError("interaction: n_ref must be positive");
  } else {
    require_finite(*c6_direct, "c6");
  }
}

double c6_from_n(const InteractionParams& ip) {
  ip.validate();
  if (ip.c6_direct) return *ip.c6_direct;
  return ip.c6_ref * std::pow(ip.n / ip.n_ref, 11);
}

void SusceptibilityParams::validate() const {
  if (!(prefactor > 0.0) || !std::isfinite(prefactor)) {
    throw ConfigError("susceptibility prefactor must be positive");
  }
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::delta1: return "delta1";
    case SweepParameter::delta2: return "delta2";
    case SweepParameter::delta3: return "delta3";
    case SweepParameter::omega1: return "omega1";
    case SweepParameter::omega2: return "omega2";
    case SweepParameter::omega3: return "omega3";
    case SweepParameter::n: return "n";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  for (auto p : {SweepParameter::delta1, SweepParameter::delta2, SweepParameter::delta3,
                 SweepParameter::omega1, SweepParameter::omega2, SweepParameter::omega3,
                 SweepParameter::n}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown sweep parameter '" + std::string(name) + "'");
}

bool is_frequency(SweepParameter p) { return p != SweepParameter::n; }

void apply_parameter(SweepParameter p, double value, SchemeParams& scheme,
                     InteractionParams& interaction) {
  switch (p) {
    case SweepParameter::delta1: scheme.delta1 = value; break;
    case SweepParameter::delta2: scheme.delta2 = value; break;
    case SweepParameter::delta3: scheme.delta3 = value; break;
    case SweepParameter::omega1: scheme.omega1 = value; break;
    case SweepParameter::omega2: scheme.omega2 = value; break;
    case SweepParameter::omega3: scheme.omega3 = value; break;
    case SweepParameter::n:
      if (interaction.c6_direct) {
        throw ConfigError("cannot sweep n when c6 is given directly");
      }
      interaction.n = value;
      break;
  }
}

DensityMatrix DensityMatrix::pure_level(int level) {
  if (level < 1 || level > kLevels) throw Error("level out of range");
  Matrix m = Matrix::Zero();
  m(level - 1, level - 1) = 1.0;
  return DensityMatrix(m);
}

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

void DensityMatrix::check_valid(double tol_trace, double tol_herm) const {
  if (!m_.allFinite()) throw Error("density matrix has non-finite entries");
  if (std::abs(m_.trace() - cplx(1.0)) > tol_trace) {
    throw Error("density matrix trace deviates from 1");
  }
  if (hermiticity_error() > tol_herm) throw Error("density matrix is not Hermitian");
  for (int k = 0; k < kLevels; ++k) {
    const double p = m_(k, k).real();
    if (p < -tol_trace || p > 1.0 + tol_trace) {
      throw Error("density matrix population outside [0, 1]");
    }
  }
}

}  // namespace rydmf
