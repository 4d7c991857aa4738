#pragma once

// Pulse shapes, target population profiles and the tracking detunings that
// make the target an instantaneous fixed point on the alpha = 0 or alpha = pi
// side of the reduced phase space.

#include <functional>
#include <optional>
#include <string_view>

#include "kerrtrack/model.hpp"

namespace kerrtrack {

/// Function of the dimensionless time s.
using Profile = std::function<double(double)>;

/// Side of the reduced phase space a fixed point (or a tracking design) lives on.
enum class Sector { alpha0, alphaPi };

/// +1 for alpha = 0, -1 for alpha = pi (the value of cos(alpha)).
constexpr double sector_sign(Sector sector) {
  return sector == Sector::alpha0 ? 1.0 : -1.0;
}

std::string_view to_string(Sector sector);
std::optional<Sector> parse_sector(std::string_view text);

/// Omega_tilde(s) = sech(s / tau).
Profile sech_pulse(double tau);

/// P_track(s) = sin^2[arctan(sinh(s/tau))/2 + pi/4], evaluated through the
/// equivalent (1 + tanh(s/tau))/2, which is free of cancellation at the edges.
Profile canonical_target(double tau);

/// Time derivative of the canonical target.
double canonical_target_rate(double s, double tau);

struct TrackingScenario {
  Profile pulse;
  Profile target;
  Sector branch = Sector::alphaPi;
  DimensionlessParams params;
  /// When false the -lambda_s P_track term is left out of the designed
  /// detuning; the Kerr term stays in the dynamics.
  bool compensate_kerr = true;
  /// Limit of pulse/(2 sqrt(target)) as target -> 0, used where the target
  /// falls inside the pole guard band. Without it such points are rejected.
  std::optional<double> edge_ratio_limit;

  /// sech pulse, canonical target, edge limit 1.
  static TrackingScenario canonical(Sector branch, double lambda_s_tilde,
                                    double tau, bool compensate_kerr = true,
                                    double window_ct = 10.0);

  double window_begin() const { return -params.window_ct * params.tau; }
  double window_end() const { return params.window_ct * params.tau; }
};

/// Designed detuning at one time. Throws DomainError if the target is
/// exactly 0 or 1, leaves [0, 1], or sits in the guard band with no limit.
double tracking_detuning_at(const TrackingScenario& scenario, double s);

/// The designed detuning as a profile; the scenario is copied.
Profile design_detuning(const TrackingScenario& scenario);

}  // namespace kerrtrack
