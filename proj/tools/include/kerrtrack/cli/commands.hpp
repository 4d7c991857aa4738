#pragma once

// Subcommand bodies. Each writes its files under an output directory and
// returns the manifest it wrote, so a run can be repeated from the manifest
// alone.

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrtrack/cli/config.hpp"

namespace kerrtrack::cli {

namespace fs = std::filesystem;

inline constexpr int kManifestVersion = 1;

/// Parameters derived from a config, recorded in every manifest.
nlohmann::json derived_parameters(const ScenarioConfig& cfg);

/// Trajectory CSV columns, in order.
const std::vector<std::string>& trajectory_columns();

/// trajectory.csv, crossings.csv, fixed_points_timeline.csv, manifest.json.
nlohmann::json run_simulate(const ScenarioConfig& cfg, const fs::path& out);

/// For every requested time: portrait_NNN_fixed_points.csv and
/// portrait_NNN_separatrices.csv, plus portraits.json. Snapshots are
/// computed concurrently.
nlohmann::json run_portrait(const ScenarioConfig& cfg, const std::vector<double>& times_s,
                            const fs::path& out);

struct FidelityRecord {
  double lambda_s_tilde = 0.0;
  double tau = 0.0;
  Sector branch = Sector::alphaPi;
  bool compensate_kerr = true;
  double final_P = 0.0;
  double infidelity = 0.0;
  std::size_t n_crossings = 0;
  bool ok = false;
  std::string error;

  /// Infinite when lambda_s_tilde == 0.
  double omega0_over_lambda_s() const;
};

/// One record per grid cell in grid order; a failing cell is recorded with
/// ok = false and the sweep goes on. `threads` = 0 picks the hardware count.
std::vector<FidelityRecord> evaluate_sweep(const SweepConfig& sweep, unsigned threads = 0);

/// sweep.csv and sweep_manifest.json.
nlohmann::json run_sweep(const SweepConfig& sweep, const fs::path& out, unsigned threads = 0);

/// design.csv and design_manifest.json.
nlohmann::json run_design(const ScenarioConfig& cfg, const fs::path& out);

/// One snapshot as CSV on `os`.
void write_fixed_points(const ScenarioConfig& cfg, double s, std::ostream& os);

void write_json(const fs::path& path, const nlohmann::json& doc);

}  // namespace kerrtrack::cli
