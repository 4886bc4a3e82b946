// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is the number of failures outside kKnownFailures. A known
// failure still prints FAIL; it marks a result the model does not reproduce
// at the pinned tolerance (see README).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "rydmf/analysis.hpp"
#include "rydmf/app.hpp"
#include "rydmf/cloud.hpp"
#include "rydmf/config.hpp"
#include "rydmf/meanfield.hpp"
#include "rydmf/obe.hpp"
#include "rydmf/oracle.hpp"
#include "rydmf/presets.hpp"
#include "rydmf/rng.hpp"
#include "rydmf/validation.hpp"

using namespace rydmf;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

const std::set<int> kKnownFailures = {4, 7, 10};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

RunConfig bundled(const char* name) {
  return load_config(std::string(RYDMF_SOURCE_DIR) + "/configs/" + name);
}

double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

Outcome two_level_limit() {
  double worst = 0.0;
  for (double omega1_mhz : {0.1, 2.0, 10.0}) {
    SchemeParams p = presets::cesium_eit();
    p.omega1 = mhz_to_angular(omega1_mhz);
    p.omega2 = p.omega3 = 0.0;
    p.gamma3 = mhz_to_angular(1.0);  // uncoupled |4> needs its own decay for a unique state
    for (double d : linspace(mhz_to_angular(-15), mhz_to_angular(15), 301)) {
      p.delta1 = d;
      const DensityMatrix rho = steady_state(p, 0.0);
      const auto ref = oracle::two_level_steady_state(p.omega1, d, p.gamma1);
      worst = std::max({worst, std::abs(rho.population(2) - ref.rho22),
                        std::abs(rho.probe_coherence() - ref.rho12)});
    }
  }
  return {worst <= 1e-8, fmt("max abs error %.2e, limit 1e-8", worst)};
}

Outcome weak_probe() {
  SchemeParams p = presets::cesium_eit();
  p.omega1 = mhz_to_angular(0.01);
  SchemeParams q = p;
  q.delta1 = 0.0;
  const Eigen::Matrix3d block = hamiltonian(q).real().bottomRightCorner<3, 3>();
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(block).eigenvalues();
  const std::vector<double> resonances = {ev(0), ev(1), ev(2), -(p.delta2 + p.delta3)};
  double worst = 0.0;
  int used = 0;
  for (double d : linspace(mhz_to_angular(-15), mhz_to_angular(15), 3001)) {
    if (std::any_of(resonances.begin(), resonances.end(),
                    [&](double r) { return std::abs(d - r) <= p.gamma2 / 10.0; })) {
      continue;
    }
    p.delta1 = d;
    const cplx solved = steady_state(p, 0.0).probe_coherence();
    worst = std::max(worst, std::abs(solved - oracle::weak_probe_rho12(p)) / std::abs(solved));
    ++used;
  }
  return {worst <= 0.01, fmt("max rel error %.2e over %.0f points, limit 1e-2", worst, used)};
}

Outcome long_time() {
  CounterRng rng(0xacce97);
  const auto u = [&](double lo, double hi) { return mhz_to_angular(lo + (hi - lo) * rng.uniform()); };
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    SchemeParams p;
    p.omega1 = u(0, 30);
    p.omega2 = u(0, 30);
    p.omega3 = u(0, 30);
    p.delta1 = u(-30, 30);
    p.delta2 = u(-30, 30);
    p.delta3 = u(-30, 30);
    p.gamma1 = u(1, 6);
    p.gamma2 = u(1, 6);
    p.gamma3 = u(1, 6);
    const double t = 100.0 / std::min({p.gamma1, p.gamma2, p.gamma3});
    const DensityMatrix evolved = time_evolve(p, 0.0, DensityMatrix::pure_level(1), t, t / 10.0);
    worst = std::max(worst, max_abs_diff(evolved, steady_state(p, 0.0)));
  }
  return {worst <= 1e-6, fmt("max elementwise diff %.2e over 20 sets, limit 1e-6", worst)};
}

// Non-interacting Cs probe spectrum from the bundled config.
struct CsSpectrum {
  std::vector<double> grid;  // MHz
  std::vector<double> im_rho12;
  double step;
};

CsSpectrum cs_spectrum() {
  const RunConfig c = bundled("cs_eit.cfg");
  CsSpectrum s;
  const SchemeParams base = c.scheme_params();
  s.grid = linspace(c.sweep.start, c.sweep.stop, static_cast<int>(c.sweep.points));
  s.step = s.grid[1] - s.grid[0];
  for (double d : s.grid) {
    SchemeParams p = base;
    p.delta1 = mhz_to_angular(d);
    s.im_rho12.push_back(steady_state(p, 0.0).probe_coherence().imag());
  }
  return s;
}

std::string list_mhz(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += fmt(i ? " %.2f" : "%.2f", v[i]);
  return out + "]";
}

Outcome cs_eit_shape() {
  const CsSpectrum s = cs_spectrum();
  const auto maxima = local_maxima(s.im_rho12);
  const auto minima = local_minima(s.im_rho12);
  std::vector<double> at_max, at_min;
  for (auto i : maxima) at_max.push_back(s.grid[i]);
  for (auto i : minima) at_min.push_back(s.grid[i]);
  bool ok = maxima.size() == 2 && minima.size() == 1;
  if (ok) ok = std::abs(at_min[0] - 4.0) <= s.step + 1e-9;
  return {ok, fmt("%.0f maxima, %.0f minima; ", maxima.size(), minima.size()) + "maxima at " +
                  list_mhz(at_max) + " MHz, minima at " + list_mhz(at_min) + " MHz"};
}

Outcome crossing_alignment() {
  const CsSpectrum s = cs_spectrum();
  const RunConfig c = bundled("fig4_cs_eigen.cfg");
  const EigenRun e = run_eigen(c);
  std::vector<double> crossings, peaks;
  for (const auto& x : e.crossings) crossings.push_back(angular_to_mhz(x.location));
  for (auto i : local_maxima(s.im_rho12)) peaks.push_back(s.grid[i]);
  std::sort(crossings.begin(), crossings.end());
  // Every gap minimum pairs with its own absorption maximum.
  bool ok = crossings.size() >= 2 && crossings.size() == peaks.size();
  for (std::size_t i = 0; ok && i < crossings.size(); ++i) {
    ok = std::abs(crossings[i] - peaks[i]) <= s.step + 1e-9;
  }
  return {ok, "gap minima at " + list_mhz(crossings) + " MHz, absorption maxima at " +
                  list_mhz(peaks) + " MHz"};
}

Outcome blockade() {
  RunConfig c = bundled("fig2_cs_blockade.cfg");
  if (c.sweep.realizations < 100) return {false, "config has fewer than 100 realizations"};
  const SweepRun run = run_sweep(c, 0);
  const auto mean = run.table.column_mean(3);
  const auto se = run.table.column_stderr(3);

  RunConfig free = c;
  free.interaction = InteractionConfig{};
  free.interaction.c6 = 0.0;
  free.sweep.parameter = SweepParameter::delta1;
  free.sweep.start = free.sweep.stop = c.scheme.delta1;
  free.sweep.points = 2;
  const double rho44_free = run_sweep(free, 0).table.column_mean(3)[0];

  bool ok = mean.size() == 6;
  std::string detail = "rho44:";
  for (std::size_t i = 0; i < mean.size(); ++i) {
    detail += fmt(" %.5f", mean[i]);
    if (i > 0 && mean[i] > mean[i - 1] + std::max(se[i], se[i - 1])) ok = false;
  }
  const double ratio = mean.back() / rho44_free;
  ok = ok && ratio < 0.5 && run.table.unconverged_fraction() == 0.0;
  return {ok, detail + fmt("; n=100 / C6=0 = %.3f (limit 0.5); unconverged %.3g", ratio,
                           run.table.unconverged_fraction())};
}

Outcome rb_crossover() {
  bool ok = true;
  std::string detail;
  for (double delta2 : {0.0, 20.0, -20.0}) {
    RunConfig c = bundled("rb_eia.cfg");
    const double resonance = 0.0 - (c.scheme.delta1 + delta2);
    c.scheme.delta2 = delta2;
    const double half = (c.sweep.stop - c.sweep.start) / 2.0;
    c.sweep.start = resonance - half;
    c.sweep.stop = resonance + half;
    c.feature = FeatureWindow{resonance - 5.0, resonance + 5.0, 5.0};
    const double step = (c.sweep.stop - c.sweep.start) / static_cast<double>(c.sweep.points - 1);
    const FeatureReport f = *run_sweep(c, 0).feature;
    const FeatureKind want = delta2 == 0.0 ? FeatureKind::eia : FeatureKind::eit;
    const bool here = f.kind == want && std::abs(f.location - resonance) <= step + 1e-9;
    ok = ok && here;
    detail += fmt("delta2=%+.0f: ", delta2);
    detail += std::string(to_string(f.kind)) +
              fmt(" at delta3=%.2f (resonance %.2f, step %.2f)", f.location, resonance, step);
    if (delta2 != -20.0) detail += "; ";
  }
  return {ok, detail};
}

Outcome pair_table() {
  SchemeParams p = presets::cesium_eit();
  p.delta1 = -(p.delta2 + p.delta3);
  std::vector<double> v12;
  for (double k : {1e-2, 1e-1, 1.0, 10.0}) v12.push_back(k * p.omega3);
  SolverConfig cfg;
  cfg.tolerance = 1e-12;
  cfg.max_iterations = 20000;
  const auto rows = compare_mean_field_to_exact_pair(p, v12, cfg);
  bool ok = rows.size() == 4;
  std::string detail = "rel diff:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += fmt(" %.2e", rows[i].rel_diff);
    ok = ok && rows[i].converged;
    if (i < 2) ok = ok && rows[i].rel_diff <= 0.01;
    if (i > 0) ok = ok && rows[i].rel_diff > rows[i - 1].rel_diff;
  }
  return {ok, detail};
}

Outcome mechanics() {
  std::string detail;

  // Decoupled cloud.
  RunConfig c = bundled("fig2_cs_blockade.cfg");
  CloudGeometry g = c.cloud.geometry;
  g.seed = realization_seed(c.sweep.master_seed, 0);
  const SchemeParams p = c.scheme_params();
  const MeanFieldResult free = self_consistent_solve(p, Cloud::sample(g, 0.0), c.solver);
  const bool iter2 = free.state.converged && free.state.iteration == 2;
  detail += fmt("C6=0 converged at iteration %.0f; ", free.state.iteration);

  // Damped versus undamped on the symmetric pair. Residuals bound the distance
  // to the fixed point only up to 1/(1 - contraction), so the comparison uses
  // couplings where the undamped map contracts well.
  SchemeParams pp = presets::cesium_eit();
  pp.delta1 = -(pp.delta2 + pp.delta3);
  SolverConfig a = c.solver, b = c.solver;
  a.damping = 0.3;
  b.damping = 1.0;
  double diff = 0.0;
  bool all_converged = true;
  for (double k : {0.1, 1.0, 10.0}) {
    const Cloud pair = Cloud::from_positions({Vec3{0, 0, 0}, Vec3{1, 0, 0}}, k * pp.omega3);
    const MeanFieldResult ra = self_consistent_solve(pp, pair, a);
    const MeanFieldResult rb = self_consistent_solve(pp, pair, b);
    all_converged = all_converged && ra.state.converged && rb.state.converged;
    for (std::size_t i = 0; i < pair.size(); ++i) {
      diff = std::max(diff, (ra.atoms[i].matrix() - rb.atoms[i].matrix()).cwiseAbs().maxCoeff());
    }
  }
  const bool damping_ok = all_converged && diff <= 10 * a.tolerance;
  detail += fmt("alpha 0.3 vs 1.0 on pairs, v12 = 0.1..10 omega3: max diff %.2e, limit %.0e; ", diff,
                10 * a.tolerance);

  // Thread count does not reach the output.
  c.sweep.realizations = 16;
  const std::string one = run_sweep(c, 1).csv;
  const std::string eight = run_sweep(c, 8).csv;
  const bool same = one == eight;
  detail += same ? "CSV identical at 1 and 8 threads" : "CSV differs between 1 and 8 threads";
  return {iter2 && damping_ok && same, detail};
}

Outcome susceptibility_ordering() {
  bool ok = true;
  std::string detail;
  for (double delta2 : {0.0, 20.0, -20.0}) {
    RunConfig c = bundled("fig8_rb_susceptibility.cfg");
    c.scheme.delta2 = delta2;
    c.scheme.delta3 = -(c.scheme.delta1 + delta2);
    const SweepRun run = run_sweep(c, 0);
    std::vector<double> im_chi;
    for (const auto& row : run.table.rows) {
      const double omega1 = c.scheme_params().omega1;
      im_chi.push_back(susceptibility(row.point.mean.rho12(), omega1, *c.susceptibility).imag());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < im_chi.size(); ++i) {
      monotone = monotone && (delta2 == 0.0 ? im_chi[i] < im_chi[i - 1] : im_chi[i] > im_chi[i - 1]);
    }
    ok = ok && monotone && im_chi.size() == 6;
    detail += fmt("delta2=%+.0f", delta2);
    detail += delta2 == 0.0 ? " decreasing" : " increasing";
    detail += monotone ? " yes [" : " no [";
    for (std::size_t i = 0; i < im_chi.size(); ++i) detail += fmt(i ? " %.4g" : "%.4g", im_chi[i]);
    detail += "]";
    if (delta2 != -20.0) detail += "; ";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "two-level analytic limit", 1.0, two_level_limit},
      {2, "weak-probe nested formula", 5.0, weak_probe},
      {3, "long-time evolution", 60.0, long_time},
      {4, "Cs EIT shape", 5.0, cs_eit_shape},
      {5, "avoided-crossing alignment", 5.0, crossing_alignment},
      {6, "blockade monotonicity", 600.0, blockade},
      {7, "Rb EIA and EIT crossover", 10.0, rb_crossover},
      {8, "mean-field vs exact pair", 60.0, pair_table},
      {9, "self-consistency mechanics", 60.0, mechanics},
      {10, "susceptibility ordering", 900.0, susceptibility_ordering},
  };
  int unexpected = 0, failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool passed = r.passed && in_time;
    std::printf("%s [%d] %s: %s; %.2f s (limit %.0f s)%s\n", passed ? "PASS" : "FAIL", c.id, c.name,
                r.detail.c_str(), secs, c.time_limit_s,
                !passed && kKnownFailures.count(c.id) ? " [known]" : "");
    std::fflush(stdout);
    if (!passed) {
      ++failed;
      if (!kKnownFailures.count(c.id)) ++unexpected;
    }
  }
  std::printf("%d of %zu criteria passed; %d unexpected failures\n",
              static_cast<int>(criteria.size()) - failed, criteria.size(), unexpected);
  return unexpected;
}
