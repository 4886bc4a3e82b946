// rydmf: mean-field spectra of interacting four-level Rydberg ensembles.
//
//   rydmf sweep    --config FILE [--out CSV] [--summary JSON] [--seed N] [--threads N]
//   rydmf eigen    --config FILE [--out CSV] [--summary JSON]
//   rydmf validate [--json] [--random-sets N] [--tamper-shift-sign]
//   rydmf cloud    --config FILE [--realization K] [--seed N] [--out CSV]
//
// Exit codes: 0 success, 1 runtime or validation failure, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rydmf/app.hpp"
#include "rydmf/cloud.hpp"
#include "rydmf/config.hpp"
#include "rydmf/rng.hpp"
#include "rydmf/validation.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rydmf::Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw rydmf::Error("failed writing '" + path + "'");
}

// Summary path: explicit flag, then [output] summary, then next to the CSV.
std::string summary_path(const std::string& flag, const std::string& configured,
                         const std::string& csv_path) {
  if (!flag.empty()) return flag;
  if (!configured.empty()) return configured;
  if (csv_path.empty() || csv_path == "-") return {};
  return std::filesystem::path(csv_path).replace_extension(".json").string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field EIT/EIA spectra of four-level ladder Rydberg ensembles"};
  app.set_version_flag("--version", rydmf::version_string());
  app.require_subcommand(1);

  std::string config_path, out_path, summary_flag;
  std::optional<std::uint64_t> seed;
  int threads = 0;

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo mean-field spectrum to CSV");
  sweep_cmd->add_option("-c,--config", config_path, "Config file (INI, or a JSON run summary)")
      ->required();
  sweep_cmd->add_option("-o,--out", out_path, "CSV output path ('-' for stdout)");
  sweep_cmd->add_option("--summary", summary_flag, "JSON summary path");
  sweep_cmd->add_option("--seed", seed, "Override [sweep] master_seed");
  sweep_cmd->add_option("-j,--threads", threads, "Worker threads (default: RYDMF_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  auto* eigen_cmd = app.add_subcommand("eigen", "Dressed eigenvalues and avoided crossings");
  eigen_cmd->add_option("-c,--config", config_path, "Config file")->required();
  eigen_cmd->add_option("-o,--out", out_path, "CSV output path ('-' for stdout)");
  eigen_cmd->add_option("--summary", summary_flag, "JSON crossing report path");

  bool as_json = false, tamper = false;
  int random_sets = 5;
  auto* validate_cmd = app.add_subcommand("validate", "Run the built-in oracle checks");
  validate_cmd->add_flag("--json", as_json, "Machine-readable report");
  validate_cmd->add_option("--random-sets", random_sets, "Random parameter sets for the time-evolution check")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_flag("--tamper-shift-sign", tamper, "Flip the sign of the mean-field shift (negative control)");

  std::size_t realization = 0;
  auto* cloud_cmd = app.add_subcommand("cloud", "Atom positions of one realization");
  cloud_cmd->add_option("-c,--config", config_path, "Config file")->required();
  cloud_cmd->add_option("-r,--realization", realization, "Realization index");
  cloud_cmd->add_option("--seed", seed, "Override [sweep] master_seed");
  cloud_cmd->add_option("-o,--out", out_path, "CSV output path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) {
      rydmf::ValidationOptions opts;
      opts.shift_sign = tamper ? -1.0 : 1.0;
      opts.random_parameter_sets = random_sets;
      const rydmf::ValidationReport rep = rydmf::run_validation(opts);
      std::cout << (as_json ? rep.to_json() + "\n" : rep.to_text());
      return rep.all_passed() ? 0 : 1;
    }

    rydmf::RunConfig cfg = rydmf::load_config(config_path);
    if (seed) cfg.sweep.master_seed = *seed;

    if (*sweep_cmd) {
      const std::string csv = !out_path.empty() ? out_path : cfg.output_csv;
      const rydmf::SweepRun run = rydmf::run_sweep(cfg, threads);
      write_text(csv, run.csv);
      const std::string sp = summary_path(summary_flag, cfg.output_summary, csv);
      if (!sp.empty()) write_text(sp, run.summary_json);
      std::size_t failed = 0;
      for (const auto& row : run.table.rows) failed += row.point.error ? 1 : 0;
      if (failed) {
        std::cerr << "warning: " << failed << " of " << run.table.rows.size()
                  << " points failed; see the CSV metadata\n";
      }
      if (run.table.unconverged_fraction() > 0) {
        std::cerr << "warning: unconverged fraction " << run.table.unconverged_fraction() << "\n";
      }
      if (run.feature) {
        std::cerr << "feature: " << rydmf::to_string(run.feature->kind) << " at "
                  << run.feature->location << "\n";
      }
      return 0;
    }

    if (*eigen_cmd) {
      const std::string csv = !out_path.empty() ? out_path : cfg.output_csv;
      const rydmf::EigenRun run = rydmf::run_eigen(cfg);
      write_text(csv, run.csv);
      const std::string sp = summary_path(summary_flag, cfg.output_summary, csv);
      if (!sp.empty()) write_text(sp, run.report_json);
      return 0;
    }

    if (*cloud_cmd) {
      if (!cfg.has_cloud || !cfg.has_interaction) {
        throw rydmf::ConfigError("cloud needs [cloud] and [interaction] sections");
      }
      rydmf::CloudGeometry g = cfg.cloud.geometry;
      g.seed = rydmf::realization_seed(cfg.sweep.master_seed, realization);
      std::ostringstream os;
      os << "# realization = " << realization << ", seed = " << g.seed << "\n";
      rydmf::write_positions_csv(os, rydmf::sample_positions(g));
      write_text(out_path, os.str());
      return 0;
    }
  } catch (const rydmf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
