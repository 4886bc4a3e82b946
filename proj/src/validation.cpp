#include "rydmf/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "rydmf/cloud.hpp"
#include "rydmf/obe.hpp"
#include "rydmf/oracle.hpp"
#include "rydmf/presets.hpp"
#include "rydmf/rng.hpp"

namespace rydmf {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

CheckResult check_two_level() {
  SchemeParams p;
  p.omega1 = mhz_to_angular(2.0);
  p.gamma1 = mhz_to_angular(5.39);
  p.gamma2 = mhz_to_angular(3.31);
  // |4> is uncoupled here; without its own decay the steady state is not unique.
  p.gamma3 = mhz_to_angular(1.0);
  double worst = 0.0;
  for (double d : linspace(mhz_to_angular(-15), mhz_to_angular(15), 301)) {
    p.delta1 = d;
    const DensityMatrix rho = steady_state(p, 0.0);
    const auto ref = oracle::two_level_steady_state(p.omega1, d, p.gamma1);
    worst = std::max({worst, std::abs(rho.population(2) - ref.rho22),
                      std::abs(rho.probe_coherence() - ref.rho12)});
  }
  return {"two_level_analytic", worst <= 1e-8, fmt("max abs error %.3e (limit 1e-8)", worst)};
}

CheckResult check_weak_probe() {
  SchemeParams p = presets::cesium_eit();
  p.omega1 = mhz_to_angular(0.01);
  // Dressed resonances: eigenvalues of the {2,3,4} block at Delta1 = 0, plus
  // the three-photon resonance.
  SchemeParams q = p;
  q.delta1 = 0.0;
  const Eigen::Matrix3d block = hamiltonian(q).real().bottomRightCorner<3, 3>();
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(block).eigenvalues();
  std::vector<double> resonances = {ev(0), ev(1), ev(2), -(p.delta2 + p.delta3)};
  const double exclusion = p.gamma2 / 10.0;

  double worst = 0.0;
  int used = 0;
  for (double d : linspace(mhz_to_angular(-15), mhz_to_angular(15), 301)) {
    if (std::any_of(resonances.begin(), resonances.end(),
                    [&](double r) { return std::abs(d - r) <= exclusion; })) {
      continue;
    }
    p.delta1 = d;
    const cplx solved = steady_state(p, 0.0).probe_coherence();
    const cplx ref = oracle::weak_probe_rho12(p);
    worst = std::max(worst, std::abs(solved - ref) / std::abs(solved));
    ++used;
  }
  return {"weak_probe_continued_fraction", worst <= 0.01,
          fmt("max rel error %.3e over %.0f points (limit 1e-2)", worst, used)};
}

SchemeParams random_params(CounterRng& rng) {
  const auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  SchemeParams p;
  p.omega1 = mhz_to_angular(u(0.0, 30.0));
  p.omega2 = mhz_to_angular(u(0.0, 30.0));
  p.omega3 = mhz_to_angular(u(0.0, 30.0));
  p.delta1 = mhz_to_angular(u(-30.0, 30.0));
  p.delta2 = mhz_to_angular(u(-30.0, 30.0));
  p.delta3 = mhz_to_angular(u(-30.0, 30.0));
  p.gamma1 = mhz_to_angular(u(1.0, 6.0));
  p.gamma2 = mhz_to_angular(u(1.0, 6.0));
  p.gamma3 = mhz_to_angular(u(1.0, 6.0));
  return p;
}

CheckResult check_long_time(int sets) {
  CounterRng rng(20240611);
  double worst = 0.0;
  for (int s = 0; s < sets; ++s) {
    const SchemeParams p = random_params(rng);
    const double gmin = std::min({p.gamma1, p.gamma2, p.gamma3});
    const double t = 100.0 / gmin;
    const DensityMatrix evolved = time_evolve(p, 0.0, DensityMatrix::pure_level(1), t, t / 10.0);
    worst = std::max(worst, max_abs_diff(evolved, steady_state(p, 0.0)));
  }
  return {"long_time_evolution", worst <= 1e-6,
          fmt("max elementwise diff %.3e over %.0f parameter sets (limit 1e-6)", worst, sets)};
}

CheckResult check_shift_equivalence(double shift_sign) {
  const SchemeParams p = presets::cesium_eit();
  double worst = 0.0;
  for (double delta_mhz : {-3.0, -0.4, 0.25, 1.0, 7.5}) {
    const double shift = mhz_to_angular(delta_mhz);
    SchemeParams moved = p;
    moved.delta3 -= shift;
    for (double d1 : {-4.0, 0.0, 3.7, 4.0, 4.4}) {
      SchemeParams a = p;
      a.delta1 = moved.delta1 = mhz_to_angular(d1);
      worst = std::max(worst, max_abs_diff(steady_state(a, shift_sign * shift),
                                           steady_state(moved, 0.0)));
    }
  }
  return {"shift_equivalence", worst <= 1e-10, fmt("max elementwise diff %.3e (limit 1e-10)", worst)};
}

CheckResult check_generator_routes() {
  CounterRng rng(7);
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    SchemeParams p = random_params(rng);
    if (s == 0) p = presets::cesium_eit();
    const double shift = mhz_to_angular(0.3 * s);
    const Eigen::MatrixXcd generic =
        oracle::lindblad_generator(hamiltonian(p, shift), oracle::single_atom_collapse(p));
    const Liouvillian l = build_liouvillian(p, shift);
    worst = std::max(worst, (generic - l.matrix).cwiseAbs().maxCoeff() / l.norm_inf());
  }
  return {"equations_match_lindblad_form", worst <= 1e-14,
          fmt("max relative entry diff %.3e (limit 1e-14)", worst)};
}

CheckResult check_decoupled_convergence() {
  CloudGeometry g;
  g.n_atoms = 8;
  g.radius = 3.0;
  g.r_min = 0.5;
  g.seed = 11;
  const Cloud cloud = Cloud::sample(g, 0.0);
  const SchemeParams p = presets::cesium_eit();
  const MeanFieldResult r = self_consistent_solve(p, cloud, SolverConfig{});
  const DensityMatrix single = steady_state(p, 0.0);
  double worst = 0.0;
  for (const auto& a : r.atoms) worst = std::max(worst, max_abs_diff(a, single));
  const bool ok = r.state.converged && r.state.iteration == 2 && worst == 0.0;
  return {"decoupled_converges_on_iteration_2", ok,
          fmt("iteration %.0f, max diff to single atom %.3e", r.state.iteration, worst)};
}

CheckResult check_pair_table(const std::vector<PairComparisonRow>& rows) {
  bool ok = rows.size() >= 4;
  for (std::size_t i = 0; ok && i < rows.size(); ++i) {
    ok = rows[i].converged;
    if (i < 2) ok = ok && rows[i].rel_diff <= 0.01;
    if (i > 0) ok = ok && rows[i].rel_diff > rows[i - 1].rel_diff;
  }
  std::string detail = "rel diffs:";
  for (const auto& r : rows) detail += fmt(" %.3e", r.rel_diff);
  return {"mean_field_vs_exact_pair", ok, detail};
}

}  // namespace

std::vector<PairComparisonRow> compare_mean_field_to_exact_pair(const SchemeParams& p,
                                                                std::span<const double> v12_values,
                                                                const SolverConfig& cfg) {
  std::vector<PairComparisonRow> rows;
  for (double v12 : v12_values) {
    PairComparisonRow row;
    row.v12 = v12;
    row.exact_rho44 = oracle::exact_pair_steady_state(p, v12).reduced.population(4);
    const Cloud pair = Cloud::from_positions({Vec3{0, 0, 0}, Vec3{1, 0, 0}}, v12);
    const MeanFieldResult mf = self_consistent_solve(p, pair, cfg);
    row.mf_rho44 = mf.atoms[0].population(4);
    row.converged = mf.state.converged;
    row.rel_diff = std::abs(row.mf_rho44 - row.exact_rho44) / row.exact_rho44;
    rows.push_back(row);
  }
  return rows;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["passed"] = all_passed();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  for (const auto& r : pair_table) {
    j["mean_field_vs_exact"].push_back({{"v12_mhz", angular_to_mhz(r.v12)},
                                        {"exact_rho44", r.exact_rho44},
                                        {"mean_field_rho44", r.mf_rho44},
                                        {"rel_diff", r.rel_diff},
                                        {"converged", r.converged}});
  }
  return j.dump(2);
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  os << "# mean-field vs exact pair (Cs scheme, three-photon resonance)\n";
  os << "v12_mhz,exact_rho44,mean_field_rho44,rel_diff\n";
  char buf[200];
  for (const auto& r : pair_table) {
    std::snprintf(buf, sizeof buf, "%.6g,%.12g,%.12g,%.6g\n", angular_to_mhz(r.v12), r.exact_rho44,
                  r.mf_rho44, r.rel_diff);
    os << buf;
  }
  os << "summary: " << (all_passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

ValidationReport run_validation(const ValidationOptions& opts) {
  ValidationReport rep;
  const auto guarded = [&](auto&& fn, const char* name) {
    try {
      rep.checks.push_back(fn());
    } catch (const std::exception& e) {
      rep.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded(check_two_level, "two_level_analytic");
  guarded(check_weak_probe, "weak_probe_continued_fraction");
  guarded([&] { return check_long_time(opts.random_parameter_sets); }, "long_time_evolution");
  guarded([&] { return check_shift_equivalence(opts.shift_sign); }, "shift_equivalence");
  guarded(check_generator_routes, "equations_match_lindblad_form");
  guarded(check_decoupled_convergence, "decoupled_converges_on_iteration_2");
  guarded(
      [&] {
        SchemeParams p = presets::cesium_eit();
        p.delta1 = -(p.delta2 + p.delta3);
        SolverConfig cfg;
        cfg.tolerance = 1e-12;
        cfg.max_iterations = 5000;
        std::vector<double> v12;
        for (double f : {1e-2, 1e-1, 1.0, 10.0}) v12.push_back(f * p.omega3);
        rep.pair_table = compare_mean_field_to_exact_pair(p, v12, cfg);
        return check_pair_table(rep.pair_table);
      },
      "mean_field_vs_exact_pair");
  return rep;
}

}  // namespace rydmf
