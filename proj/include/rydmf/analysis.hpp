#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rydmf/core.hpp"
#include "rydmf/ensemble.hpp"

namespace rydmf {

// chi = prefactor * rho12 / omega1. Throws Error for omega1 <= 0.
cplx susceptibility(cplx rho12, double omega1, const SusceptibilityParams& sp);

enum class FeatureKind { none, eit, eia };
std::string_view to_string(FeatureKind k);

struct FeatureReport {
  FeatureKind kind = FeatureKind::none;
  double location = 0.0;   // swept-variable units of the table
  double magnitude = 0.0;  // |Im rho12 - baseline| at the extremum
  double threshold = 0.0;  // significance the magnitude was compared to
  double window_lo = 0.0;
  double window_hi = 0.0;
};

struct ClassifyOptions {
  double significance = 5.0;  // multiples of the standard error
  // Relative floor on the threshold, as a fraction of max |Im rho12| in the
  // window; keeps noise-free (single realization, C6 = 0) spectra from being
  // classified on roundoff.
  double relative_floor = 1e-6;
};

// Linear baseline between the first and last rows inside [lo, hi]; the
// extremum is the interior row with the largest |Im rho12 - baseline|.
FeatureReport classify_feature(const SpectrumTable& spectrum, double lo, double hi,
                               ClassifyOptions opts = {});

struct AvoidedCrossing {
  double location = 0.0;  // swept value, internal units
  double gap = 0.0;       // rad/s
  int lower_level = 0;    // index (0..2) of the lower eigenvalue of the pair
};

// Dressed eigenvalues along a detuning sweep; one row per grid value.
std::vector<std::array<double, 4>> eigenvalue_sweep(const SchemeParams& p, SweepParameter detuning,
                                                    std::span<const double> grid);

// Local minima of each nearest-neighbour eigenvalue gap along the sweep.
// Requires at least 50 grid points.
std::vector<AvoidedCrossing> avoided_crossings(const SchemeParams& p, SweepParameter detuning,
                                               std::span<const double> grid);

// Indices of strict interior local extrema. Runs of equal values (within
// `tol`) count once, at the middle of the run.
std::vector<std::size_t> local_maxima(std::span<const double> y, double tol = 0.0);
std::vector<std::size_t> local_minima(std::span<const double> y, double tol = 0.0);

}  // namespace rydmf
