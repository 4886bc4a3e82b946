#include "rydmf/app.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace rydmf {

namespace {

std::string g12(double v) {
  if (v == 0.0) v = 0.0;  // no "-0" in output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const char* swept_unit(SweepParameter p) {
  return is_frequency(p) ? "MHz (omega = 2*pi*nu)" : "principal quantum number";
}

// Scale factor from rho12 to chi at one row; the probe Rabi frequency may be
// the swept parameter.
double chi_scale(const RunConfig& c, double swept_internal) {
  SchemeParams p = c.scheme_params();
  InteractionParams ip = c.interaction_params();
  apply_parameter(c.sweep.parameter, swept_internal, p, ip);
  return c.susceptibility->prefactor / p.omega1;
}

}  // namespace

std::string version_string() { return RYDMF_VERSION; }

std::string format_spectrum_csv(const RunConfig& c, const SpectrumTable& t) {
  std::ostringstream os;
  const CloudGeometry& g = c.cloud.geometry;
  os << "# rydmf " << version_string() << "\n"
     << "# config_hash = " << t.config_hash << "\n"
     << "# master_seed = " << t.master_seed << "\n"
     << "# swept_parameter = " << to_string(t.parameter) << "\n"
     << "# swept_unit = " << swept_unit(t.parameter) << "\n"
     << "# realizations = " << c.sweep.realizations << "\n"
     << "# n_atoms = " << g.n_atoms << "\n"
     << "# shape = " << to_string(g.shape) << "\n";
  if (g.shape == CloudShape::sphere) {
    os << "# radius_um = " << g12(g.radius) << "\n";
  } else {
    os << "# edges_um = " << g12(g.edges[0]) << " " << g12(g.edges[1]) << " " << g12(g.edges[2])
       << "\n";
  }
  if (c.cloud.density) os << "# density_um^-3 = " << g12(*c.cloud.density) << "\n";
  os << "# r_min_um = " << g12(g.r_min) << "\n"
     << "# unconverged_fraction = " << g12(t.unconverged_fraction()) << "\n";
  if (c.susceptibility) {
    os << "# chi = prefactor * rho12 / omega1, omega1 in rad/s, prefactor = "
       << g12(c.susceptibility->prefactor) << "\n";
  }
  std::size_t failed = 0;
  for (const auto& row : t.rows) {
    if (row.point.error) {
      ++failed;
      os << "# error at swept_value " << g12(c.to_config_units(row.swept_value)) << ": "
         << *row.point.error << "\n";
    }
  }
  if (failed) os << "# warning: " << failed << " of " << t.rows.size() << " points failed\n";

  os << "swept_value";
  for (const char* name : Observables::kNames) os << "," << name << "_mean," << name << "_stderr";
  os << ",unconverged_frac";
  if (c.susceptibility) os << ",re_chi_mean,re_chi_stderr,im_chi_mean,im_chi_stderr";
  os << "\n";

  for (const auto& row : t.rows) {
    const PointResult& pt = row.point;
    os << g12(c.to_config_units(row.swept_value));
    for (std::size_t k = 0; k < Observables::kCount; ++k) {
      if (pt.error) {
        os << ",nan,nan";
      } else {
        os << "," << g12(pt.mean.values[k]) << "," << g12(pt.std_error.values[k]);
      }
    }
    os << "," << g12(pt.error ? 1.0 : pt.unconverged_fraction());
    if (c.susceptibility) {
      if (pt.error) {
        os << ",nan,nan,nan,nan";
      } else {
        const double s = chi_scale(c, row.swept_value);
        os << "," << g12(s * pt.mean.re_rho12()) << "," << g12(std::abs(s) * pt.std_error.re_rho12())
           << "," << g12(s * pt.mean.im_rho12()) << "," << g12(std::abs(s) * pt.std_error.im_rho12());
      }
    }
    os << "\n";
  }
  return os.str();
}

SweepRun run_sweep(const RunConfig& c, int threads) {
  const SweepSpec spec = c.sweep_spec();
  SweepRun run;
  run.table = sweep(spec, c.sweep.master_seed, threads);
  run.table.config_hash = config_hash(c);

  if (c.feature) {
    ClassifyOptions opts;
    opts.significance = c.feature->significance;
    FeatureReport r = classify_feature(run.table, c.to_internal(c.feature->lo),
                                       c.to_internal(c.feature->hi), opts);
    r.location = c.to_config_units(r.location);
    r.window_lo = c.to_config_units(r.window_lo);
    r.window_hi = c.to_config_units(r.window_hi);
    run.feature = r;
  }

  run.csv = format_spectrum_csv(c, run.table);

  nlohmann::ordered_json j;
  j["version"] = version_string();
  j["config_hash"] = run.table.config_hash;
  j["master_seed"] = c.sweep.master_seed;
  j["swept_parameter"] = std::string(to_string(c.sweep.parameter));
  j["points"] = run.table.rows.size();
  j["unconverged_fraction"] = run.table.unconverged_fraction();
  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  for (const auto& row : run.table.rows) {
    if (row.point.error) {
      errors.push_back({{"swept_value", c.to_config_units(row.swept_value)}, {"error", *row.point.error}});
    }
  }
  j["point_errors"] = errors;
  if (run.feature) {
    const FeatureReport& f = *run.feature;
    j["feature"] = {{"kind", std::string(to_string(f.kind))},
                    {"location", f.location},
                    {"magnitude", f.magnitude},
                    {"threshold", f.threshold},
                    {"window_lo", f.window_lo},
                    {"window_hi", f.window_hi}};
  }
  j["resolved_config"] = to_config_text(c);
  run.summary_json = j.dump(2) + "\n";
  return run;
}

EigenRun run_eigen(const RunConfig& c) {
  if (!c.has_sweep) throw ConfigError("eigen needs a [sweep] section");
  const SweepParameter param = c.sweep.parameter;
  if (param != SweepParameter::delta1 && param != SweepParameter::delta2 &&
      param != SweepParameter::delta3) {
    throw ConfigError("eigen sweeps a detuning (delta1, delta2 or delta3), got " +
                      std::string(to_string(param)));
  }
  const SchemeParams p = c.scheme_params();
  EigenRun run;
  const std::size_t n = c.sweep.points;
  const double a = c.to_internal(c.sweep.start);
  const double b = c.to_internal(c.sweep.stop);
  for (std::size_t i = 0; i < n; ++i) {
    run.grid.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  run.values = eigenvalue_sweep(p, param, run.grid);
  if (n >= 50) run.crossings = avoided_crossings(p, param, run.grid);

  nlohmann::ordered_json report;
  report["swept_parameter"] = std::string(to_string(param));
  report["unit"] = "MHz";
  report["grid_step"] = angular_to_mhz(n > 1 ? (b - a) / static_cast<double>(n - 1) : 0.0);
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& x : run.crossings) {
    list.push_back({{"location", angular_to_mhz(x.location)},
                    {"gap", angular_to_mhz(x.gap)},
                    {"levels", {x.lower_level + 1, x.lower_level + 2}}});
  }
  report["avoided_crossings"] = list;
  if (n < 50) report["note"] = "crossing search needs at least 50 grid points";
  run.report_json = report.dump(2) + "\n";

  std::ostringstream os;
  os << "# rydmf " << version_string() << "\n"
     << "# config_hash = " << config_hash(c) << "\n"
     << "# swept_parameter = " << to_string(param) << "\n"
     << "# unit = MHz (omega = 2*pi*nu), eigenvalues ascending\n"
     << "swept_value,eig1,eig2,eig3,eig4\n";
  for (std::size_t i = 0; i < n; ++i) {
    os << g12(angular_to_mhz(run.grid[i]));
    for (double e : run.values[i]) os << "," << g12(angular_to_mhz(e));
    os << "\n";
  }
  os << "# avoided_crossings = " << report["avoided_crossings"].dump() << "\n";
  run.csv = os.str();
  return run;
}

}  // namespace rydmf
