#include "rydmf/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <span>
#include <thread>

#include "rydmf/rng.hpp"

namespace rydmf {

Observables Observables::from_atoms(const std::vector<DensityMatrix>& atoms) {
  Observables o;
  if (atoms.empty()) return o;
  for (const DensityMatrix& rho : atoms) {
    for (int k = 1; k <= 4; ++k) o.values[k - 1] += rho.population(k);
    o.values[4] += rho.probe_coherence().real();
    o.values[5] += rho.probe_coherence().imag();
  }
  for (double& v : o.values) v /= static_cast<double>(atoms.size());
  return o;
}

void EnsembleSpec::validate() const {
  scheme.validate();
  interaction.validate();
  geometry.validate();
  solver.validate();
}

RealizationResult run_realization(const EnsembleSpec& spec, std::uint64_t realization_seed) {
  RealizationResult r;
  r.seed = realization_seed;
  try {
    CloudGeometry g = spec.geometry;
    g.seed = realization_seed;
    const Cloud cloud = Cloud::sample(g, c6_from_n(spec.interaction));
    const MeanFieldResult mf = self_consistent_solve(spec.scheme, cloud, spec.solver);
    r.observables = Observables::from_atoms(mf.atoms);
    r.converged = mf.state.converged;
    r.iterations = mf.state.iteration;
    r.residual = mf.state.residual;
  } catch (const SolverError& e) {
    throw SolverError("realization seed " + std::to_string(realization_seed) + ": " + e.what(),
                      e.rcond());
  } catch (const SamplingError& e) {
    throw SamplingError("realization seed " + std::to_string(realization_seed) + ": " + e.what());
  }
  return r;
}

double PointResult::unconverged_fraction() const {
  if (n_realizations == 0) return 1.0;
  return 1.0 - static_cast<double>(n_converged) / static_cast<double>(n_realizations);
}

int default_thread_count() {
  if (const char* env = std::getenv("RYDMF_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each task writes
// only its own slot, so results do not depend on the schedule.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 0) threads = default_thread_count();
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct TaskOutcome {
  RealizationResult result;
  std::string error;
};

PointResult reduce_point(std::span<const TaskOutcome> outcomes) {
  PointResult pr;
  pr.n_realizations = outcomes.size();
  for (const TaskOutcome& t : outcomes) {
    if (!t.error.empty()) {
      pr.error = t.error;
      return pr;
    }
  }
  std::size_t m = 0;
  for (const TaskOutcome& t : outcomes) {
    if (!t.result.converged) continue;
    ++m;
    for (std::size_t k = 0; k < Observables::kCount; ++k) {
      pr.mean.values[k] += t.result.observables.values[k];
    }
  }
  pr.n_converged = m;
  if (m == 0) {
    pr.error = "all " + std::to_string(outcomes.size()) + " realizations unconverged";
    return pr;
  }
  for (double& v : pr.mean.values) v /= static_cast<double>(m);
  if (m > 1) {
    std::array<double, Observables::kCount> ss{};
    for (const TaskOutcome& t : outcomes) {
      if (!t.result.converged) continue;
      for (std::size_t k = 0; k < Observables::kCount; ++k) {
        const double d = t.result.observables.values[k] - pr.mean.values[k];
        ss[k] += d * d;
      }
    }
    const double md = static_cast<double>(m);
    for (std::size_t k = 0; k < Observables::kCount; ++k) {
      pr.std_error.values[k] = std::sqrt(ss[k] / (md - 1.0) / md);
    }
  }
  return pr;
}

TaskOutcome run_task(const EnsembleSpec& spec, std::uint64_t seed) {
  TaskOutcome t;
  try {
    t.result = run_realization(spec, seed);
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  return t;
}

}  // namespace

PointResult monte_carlo_point(const EnsembleSpec& spec, std::size_t n_realizations,
                              std::uint64_t master_seed, int threads) {
  spec.validate();
  if (n_realizations < 1) throw ConfigError("n_realizations must be at least 1");
  std::vector<TaskOutcome> outcomes(n_realizations);
  parallel_for(n_realizations, threads, [&](std::size_t k) {
    outcomes[k] = run_task(spec, realization_seed(master_seed, k));
  });
  PointResult pr = reduce_point(outcomes);
  if (pr.error) throw Error(*pr.error);
  return pr;
}

void SweepSpec::validate() const {
  if (points < 2) throw ConfigError("sweep: points must be at least 2");
  if (n_realizations < 1) throw ConfigError("sweep: realizations must be at least 1");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw ConfigError("sweep: bad range");
  base.validate();
  for (double v : grid()) at(v).validate();
}

std::vector<double> SweepSpec::grid() const {
  std::vector<double> g(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = start + step * static_cast<double>(i);
  g.back() = stop;
  return g;
}

EnsembleSpec SweepSpec::at(double value) const {
  EnsembleSpec s = base;
  apply_parameter(parameter, value, s.scheme, s.interaction);
  return s;
}

std::vector<double> SpectrumTable::column_mean(std::size_t observable) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.point.mean.values.at(observable));
  return out;
}

std::vector<double> SpectrumTable::column_stderr(std::size_t observable) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.point.std_error.values.at(observable));
  return out;
}

std::vector<double> SpectrumTable::swept_values() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.swept_value);
  return out;
}

double SpectrumTable::unconverged_fraction() const {
  std::size_t total = 0, conv = 0;
  for (const auto& r : rows) {
    total += r.point.n_realizations;
    conv += r.point.n_converged;
  }
  return total == 0 ? 0.0 : 1.0 - static_cast<double>(conv) / static_cast<double>(total);
}

SpectrumTable sweep(const SweepSpec& spec, std::uint64_t master_seed, int threads) {
  spec.validate();
  const std::vector<double> grid = spec.grid();
  const std::size_t nr = spec.n_realizations;

  std::vector<EnsembleSpec> specs;
  specs.reserve(grid.size());
  for (double v : grid) specs.push_back(spec.at(v));

  // Flattened (point, realization) tasks; seeds depend only on the
  // realization index, giving common random numbers across the grid.
  std::vector<TaskOutcome> outcomes(grid.size() * nr);
  parallel_for(outcomes.size(), threads, [&](std::size_t t) {
    const std::size_t point = t / nr, k = t % nr;
    outcomes[t] = run_task(specs[point], realization_seed(master_seed, k));
  });

  SpectrumTable table;
  table.parameter = spec.parameter;
  table.master_seed = master_seed;
  table.rows.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.rows[i].swept_value = grid[i];
    table.rows[i].point =
        reduce_point(std::span<const TaskOutcome>(outcomes).subspan(i * nr, nr));
  }
  return table;
}

}  // namespace rydmf
