#include <doctest.h>

#include <cmath>

#include "rydmf/analysis.hpp"
#include "rydmf/obe.hpp"
#include "rydmf/presets.hpp"

using namespace rydmf;

namespace {

SpectrumTable synthetic(const std::vector<double>& x, const std::vector<double>& im, double se = 0.0) {
  SpectrumTable t;
  for (std::size_t i = 0; i < x.size(); ++i) {
    SpectrumRow r;
    r.swept_value = x[i];
    r.point.mean.values[5] = im[i];
    r.point.std_error.values[5] = se;
    r.point.n_realizations = r.point.n_converged = 1;
    t.rows.push_back(r);
  }
  return t;
}

// Noise-free C6 = 0 spectrum from single-atom steady states.
SpectrumTable free_spectrum(SchemeParams p, SweepParameter param, double lo_mhz, double hi_mhz,
                            int n) {
  std::vector<double> x, im;
  InteractionParams unused;
  for (int i = 0; i < n; ++i) {
    const double v = mhz_to_angular(lo_mhz + (hi_mhz - lo_mhz) * i / (n - 1));
    apply_parameter(param, v, p, unused);
    x.push_back(v);
    im.push_back(steady_state(p, 0.0).probe_coherence().imag());
  }
  return synthetic(x, im);
}

}  // namespace

TEST_CASE("susceptibility") {
  SusceptibilityParams sp;
  sp.prefactor = 2.0;
  const cplx rho12(0.1, 0.3);
  CHECK(susceptibility(0.0, 1.0, sp) == cplx(0.0));
  const cplx chi = susceptibility(rho12, 4.0, sp);
  CHECK(chi == cplx(0.05, 0.15));
  CHECK(susceptibility(rho12, 8.0, sp) == 0.5 * chi);
  sp.prefactor = 4.0;
  CHECK(susceptibility(rho12, 4.0, sp) == 2.0 * chi);
  CHECK(susceptibility(2.0 * rho12, 4.0, sp) == 2.0 * susceptibility(rho12, 4.0, sp));
  CHECK_THROWS_AS(susceptibility(rho12, 0.0, sp), Error);
  sp.prefactor = -1.0;
  CHECK_THROWS_AS(susceptibility(rho12, 1.0, sp), ConfigError);
}

TEST_CASE("classification of synthetic spectra") {
  std::vector<double> x;
  for (int i = 0; i < 21; ++i) x.push_back(i - 10.0);
  std::vector<double> flat(21, 0.3), peak, dip;
  for (double v : x) {
    peak.push_back(0.1 + 0.01 * v + 0.5 / (1 + v * v));
    dip.push_back(0.6 - 0.5 / (1 + v * v));
  }
  CHECK(classify_feature(synthetic(x, flat), -10, 10).kind == FeatureKind::none);

  const FeatureReport p = classify_feature(synthetic(x, peak, 0.01), -10, 10);
  CHECK(p.kind == FeatureKind::eia);
  CHECK(p.location == 0.0);
  CHECK(p.magnitude > 0.0);

  const FeatureReport d = classify_feature(synthetic(x, dip, 0.01), -5, 5);
  CHECK(d.kind == FeatureKind::eit);
  CHECK(d.location == 0.0);
  CHECK(d.window_lo == -5.0);
  CHECK(d.window_hi == 5.0);

  // Not significant against large error bars.
  CHECK(classify_feature(synthetic(x, dip, 1.0), -5, 5).kind == FeatureKind::none);

  // Vertical rescaling keeps the class and scales the depth.
  std::vector<double> scaled;
  for (double v : dip) scaled.push_back(7.0 * v);
  const FeatureReport s = classify_feature(synthetic(x, scaled, 0.07), -5, 5);
  CHECK(s.kind == d.kind);
  CHECK(s.magnitude == doctest::Approx(7.0 * d.magnitude));

  CHECK_THROWS_AS(classify_feature(synthetic(x, dip), -20, 5), Error);
  CHECK_THROWS_AS(classify_feature(synthetic(x, dip), -1, 1), Error);
}

TEST_CASE("Rb EIA at full resonance, EIT when detuned") {
  SchemeParams p = presets::rubidium_eia();
  const SpectrumTable eia = free_spectrum(p, SweepParameter::delta3, -10, 10, 201);
  CHECK(classify_feature(eia, mhz_to_angular(-5), mhz_to_angular(5)).kind == FeatureKind::eia);

  p.delta2 = mhz_to_angular(-20);
  const SpectrumTable eit = free_spectrum(p, SweepParameter::delta3, 10, 30, 201);
  CHECK(classify_feature(eit, mhz_to_angular(10), mhz_to_angular(30)).kind == FeatureKind::eit);
}

TEST_CASE("local extrema") {
  const std::vector<double> y = {0, 1, 0, 2, 2, 2, 0, -1, 3};
  CHECK(local_maxima(y) == std::vector<std::size_t>{1, 4});
  CHECK(local_minima(y) == std::vector<std::size_t>{2, 7});
  const std::vector<double> mono = {1, 2, 3, 4};
  CHECK(local_maxima(mono).empty());
  CHECK(local_minima(mono).empty());
}

TEST_CASE("avoided crossings") {
  std::vector<double> grid;
  for (int i = 0; i <= 300; ++i) grid.push_back(mhz_to_angular(-15 + 0.1 * i));

  SUBCASE("bare levels cross exactly") {
    SchemeParams p = presets::cesium_eit();
    p.omega1 = p.omega2 = p.omega3 = 0.0;
    const auto xs = avoided_crossings(p, SweepParameter::delta1, grid);
    REQUIRE_FALSE(xs.empty());
    for (const auto& x : xs) CHECK(x.gap <= 1e-6 * mhz_to_angular(1.0));
  }
  SUBCASE("Cs crossings sit at absorption maxima") {
    const SchemeParams p = presets::cesium_eit();
    const auto xs = avoided_crossings(p, SweepParameter::delta1, grid);
    const SpectrumTable t = free_spectrum(p, SweepParameter::delta1, -15, 15, 301);
    const auto im = t.column_mean(5);
    const auto maxima = local_maxima(im);
    REQUIRE(xs.size() == maxima.size());
    const double step = grid[1] - grid[0];
    for (std::size_t k = 0; k < xs.size(); ++k) {
      CHECK(std::abs(xs[k].location - grid[maxima[k]]) <= step * (1 + 1e-9));
      CHECK(xs[k].gap > 0.0);
    }
  }
  SUBCASE("stronger dressing pushes the outer crossings apart") {
    // The probe-level gaps scale with omega1; omega2 sets the Autler-Townes
    // separation of the outermost crossings.
    SchemeParams p = presets::cesium_eit();
    const auto a = avoided_crossings(p, SweepParameter::delta1, grid);
    p.omega2 *= 2;
    const auto b = avoided_crossings(p, SweepParameter::delta1, grid);
    REQUIRE(a.size() >= 2);
    REQUIRE(b.size() >= 2);
    const double sa = a.back().location - a.front().location;
    const double sb = b.back().location - b.front().location;
    CHECK(sb > 1.5 * sa);
  }
  SUBCASE("a common energy offset leaves the gaps unchanged") {
    const SchemeParams p = presets::cesium_eit();
    const double c = mhz_to_angular(2.5);
    const auto ev = eigenvalue_sweep(p, SweepParameter::delta1, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      SchemeParams r = p;
      r.delta1 = grid[i];
      const Eigen::Matrix4cd h = hamiltonian(r) + c * Eigen::Matrix4cd::Identity();
      const Eigen::Vector4d e = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(h).eigenvalues();
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs((e(k + 1) - e(k)) - (ev[i][k + 1] - ev[i][k])) <= 1e-9 * mhz_to_angular(1.0));
      }
    }
  }
  SUBCASE("too few points") {
    const std::vector<double> small(grid.begin(), grid.begin() + 10);
    CHECK_THROWS_AS(avoided_crossings(presets::cesium_eit(), SweepParameter::delta1, small), Error);
  }
}
