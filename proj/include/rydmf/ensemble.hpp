#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rydmf/cloud.hpp"
#include "rydmf/core.hpp"
#include "rydmf/meanfield.hpp"

namespace rydmf {

// Atom-averaged observables, in this order everywhere (CSV columns included).
struct Observables {
  static constexpr std::size_t kCount = 6;
  static constexpr std::array<const char*, kCount> kNames = {
      "rho11", "rho22", "rho33", "rho44", "re_rho12", "im_rho12"};

  std::array<double, kCount> values{};

  double rho(int level) const { return values[level - 1]; }
  double re_rho12() const { return values[4]; }
  double im_rho12() const { return values[5]; }
  cplx rho12() const { return {values[4], values[5]}; }

  static Observables from_atoms(const std::vector<DensityMatrix>& atoms);
};

struct EnsembleSpec {
  SchemeParams scheme;
  InteractionParams interaction;
  CloudGeometry geometry;  // geometry.seed is replaced per realization
  SolverConfig solver;

  void validate() const;
};

struct RealizationResult {
  Observables observables;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::uint64_t seed = 0;
};

RealizationResult run_realization(const EnsembleSpec& spec, std::uint64_t realization_seed);

struct PointResult {
  Observables mean;
  Observables std_error;
  std::size_t n_realizations = 0;
  std::size_t n_converged = 0;
  std::optional<std::string> error;

  double unconverged_fraction() const;
};

// Number of worker threads when the caller passes 0: RYDMF_THREADS if set,
// otherwise std::thread::hardware_concurrency().
int default_thread_count();

// Realization k uses seed realization_seed(master_seed, k). Unconverged
// realizations are excluded from the statistics. Throws Error if none converge.
PointResult monte_carlo_point(const EnsembleSpec& spec, std::size_t n_realizations,
                              std::uint64_t master_seed, int threads = 0);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::delta1;
  double start = 0.0;  // internal units (rad/s, or n)
  double stop = 0.0;
  std::size_t points = 2;
  EnsembleSpec base;
  std::size_t n_realizations = 1;

  void validate() const;
  std::vector<double> grid() const;
  EnsembleSpec at(double value) const;
};

struct SpectrumRow {
  double swept_value = 0.0;  // internal units
  PointResult point;
};

struct SpectrumTable {
  SweepParameter parameter = SweepParameter::delta1;
  std::uint64_t master_seed = 0;
  std::string config_hash;
  std::vector<SpectrumRow> rows;

  std::vector<double> column_mean(std::size_t observable) const;
  std::vector<double> column_stderr(std::size_t observable) const;
  std::vector<double> swept_values() const;
  double unconverged_fraction() const;
};

// One Monte Carlo point per grid value, with the same realization seeds at
// every point. A failing point records its error and the sweep continues.
SpectrumTable sweep(const SweepSpec& spec, std::uint64_t master_seed, int threads = 0);

}  // namespace rydmf
