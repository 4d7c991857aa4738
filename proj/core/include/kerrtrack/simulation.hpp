#pragma once

// Runs a tracking scenario through one of the two integrators and collects
// the designed controls on the same grid.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "kerrtrack/dynamics.hpp"
#include "kerrtrack/tracking.hpp"

namespace kerrtrack {

enum class Representation { amplitude, reduced };

std::string_view to_string(Representation r);
std::optional<Representation> parse_representation(std::string_view text);

struct TrackedRun {
  Trajectory trajectory;
  std::vector<double> omega_tilde;
  std::vector<double> delta_tilde;  ///< designed (Delta - Lambda_a)/Omega0
  std::vector<double> target;

  double final_population() const { return trajectory.final_state().P; }
  double infidelity() const { return 1.0 - final_population(); }
};

/// Integrates the scenario from the all-atomic state. For the amplitude
/// representation `kerr_tilde` gives the dimensionless Kerr triple (its
/// lambda_s must equal the scenario's); the default puts all of lambda_s
/// into lambda22, which leaves lambda_a = 0.
TrackedRun simulate_tracked(const TrackingScenario& scenario, Representation representation,
                            const IntegratorConfig& config = {},
                            std::size_t samples = 2001,
                            std::optional<KerrParams> kerr_tilde = std::nullopt);

}  // namespace kerrtrack
