#pragma once

// JSON scenario configuration. Physical quantities carry their unit in the
// key name; every parsed config can be written back in a normalized form
// that reproduces the run on its own.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrtrack/dynamics.hpp"
#include "kerrtrack/errors.hpp"
#include "kerrtrack/simulation.hpp"
#include "kerrtrack/tracking.hpp"

namespace kerrtrack::cli {

/// Invalid configuration; `field()` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class PulseShape { sech, off };

struct ScenarioConfig {
  Sector branch = Sector::alphaPi;
  bool compensate_kerr = true;
  PulseShape pulse = PulseShape::sech;
  double tau = 5.0;
  double window_ct = 10.0;
  double omega0_per_s = 1.0;
  /// Kerr coefficients divided by omega0 (density already applied).
  KerrParams kerr_tilde;
  IntegratorConfig integrator;
  Representation representation = Representation::amplitude;
  std::size_t samples = 2001;
  std::size_t crossing_samples = 400;
  std::size_t separatrix_samples = 2000;

  /// Normalized JSON this config was parsed from.
  nlohmann::json source;

  double lambda_s_tilde() const { return kerr_tilde.lambda_s; }
  double lambda_a_tilde() const { return kerr_tilde.lambda_a; }
  KerrParams kerr_per_s() const { return kerr_tilde.scaled(omega0_per_s); }
  DimensionlessParams dimensionless() const { return {lambda_s_tilde(), tau, window_ct}; }
  TrackingScenario scenario() const;
};

/// Accepts either a scenario document or a run manifest (uses its "config").
/// Throws ConfigError with the key path of the first problem found.
ScenarioConfig parse_scenario(const nlohmann::json& doc);

struct SweepConfig {
  ScenarioConfig base;
  std::vector<double> lambda_s_tilde;
  std::vector<double> tau;
  std::vector<Sector> branch;
  std::vector<bool> compensate_kerr;
  nlohmann::json source;

  std::size_t cell_count() const {
    return lambda_s_tilde.size() * tau.size() * branch.size() * compensate_kerr.size();
  }
};

/// {"base": {...scenario...}, "grid": {"omega0_over_lambda_s" | "lambda_s_tilde": [...],
///  "tau": [...], "branch": [...], "compensate_kerr": [...]}}
SweepConfig parse_sweep(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::string& path);

/// A dimensionless Kerr triple (lambda12 = 0) with the given combinations.
KerrParams kerr_from_combinations(double lambda_s, double lambda_a);

}  // namespace kerrtrack::cli
