#pragma once

// Instantaneous (frozen-parameter) phase portraits of the reduced dynamics:
// fixed points from the two cubic equations in x = sqrt(P), their stability,
// separatrices, and the scan for fixed-point crossings along a tracking
// scenario.

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "kerrtrack/cubic.hpp"
#include "kerrtrack/tracking.hpp"

namespace kerrtrack {

struct PortraitParams {
  double omega_tilde = 0.0;
  double delta_tilde = 0.0;
  double lambda_s_tilde = 0.0;
};

/// Frozen parameters of a scenario at time s (designed detuning included).
PortraitParams scenario_params_at(const TrackingScenario& scenario, double s);

enum class FixedPointKind { alpha0, alphaPi, pole_p1, pole_p0 };
enum class Stability { elliptic, hyperbolic, degenerate };

std::string_view to_string(FixedPointKind kind);
std::string_view to_string(Stability stability);

constexpr FixedPointKind kind_of(Sector sector) {
  return sector == Sector::alpha0 ? FixedPointKind::alpha0 : FixedPointKind::alphaPi;
}

struct FixedPoint {
  double P = 0.0;
  FixedPointKind kind = FixedPointKind::alpha0;
  Stability stability = Stability::degenerate;
  double energy = 0.0;
  bool clustered = false;

  bool interior() const {
    return kind == FixedPointKind::alpha0 || kind == FixedPointKind::alphaPi;
  }
  /// 0 or pi for interior points, 0 by convention at the poles.
  double alpha() const;
};

/// |det| at or below this value is treated as a bifurcation point.
inline constexpr double kDegenerateDeterminant = 1e-9;

/// Fixed-point cubic of one sector:
///   delta x + lambda_s x^3 + sigma (omega/2)(1 - 3x^2) = 0,  sigma = cos(alpha).
Cubic fixed_point_cubic(Sector sector, const PortraitParams& params);

/// All fixed points: interior roots of both cubics, the P = 1 pole, and the
/// P = 0 pole when omega_tilde == 0. Interior points come sorted by sector
/// then P.
std::vector<FixedPoint> fixed_points_at(const PortraitParams& params);

/// Determinant of the (P, alpha) linearization at an interior fixed point.
double linearization_determinant(double P, Sector sector, const PortraitParams& params);

/// (delta + lambda_s)^2 - omega^2: positive where the P = 1 pole is elliptic.
double pole_stability_margin(const PortraitParams& params);

Stability classify_stability(const FixedPoint& fp, const PortraitParams& params);

/// Small-oscillation angular frequency (elliptic) or exponential growth rate
/// (hyperbolic) of the linearization; 0 when degenerate.
double linear_rate(const FixedPoint& fp, const PortraitParams& params);

struct SeparatrixPoint {
  double P = 0.0;
  double alpha = 0.0;
};

struct Separatrix {
  FixedPoint owner;
  /// alpha >= 0 branch by increasing P, then the alpha <= 0 branch. The owner
  /// itself is included. Empty when the level set is only the owner point.
  std::vector<SeparatrixPoint> points;
};

/// Level set of the reduced energy through a hyperbolic fixed point, sampled
/// on a uniform P grid of `n_samples` points with refinement at the turning
/// points and wherever alpha changes quickly. Throws DomainError unless the
/// point is hyperbolic.
Separatrix trace_separatrix(const FixedPoint& hyperbolic, const PortraitParams& params,
                            std::size_t n_samples = 2000);

struct PortraitSnapshot {
  double s = std::numeric_limits<double>::quiet_NaN();
  PortraitParams params;
  std::vector<FixedPoint> fixed_points;
  std::vector<Separatrix> separatrices;
};

PortraitSnapshot portrait_at(const PortraitParams& params,
                             std::size_t separatrix_samples = 2000);
PortraitSnapshot portrait_at(const TrackingScenario& scenario, double s,
                             std::size_t separatrix_samples = 2000);

/// The fixed point that realizes the scenario's target at time s.
FixedPoint tracked_fixed_point(const TrackingScenario& scenario, double s);

enum class CrossingKind {
  tracked_crossing,  ///< another same-sector root passes through the tracked one
  root_collision,    ///< two untracked roots of one sector merge or appear
  pole_flip,         ///< stability change of the P = 1 pole (a root passes P = 1)
};

enum class CrossingTag { saddle_center, root_collision, none };

std::string_view to_string(CrossingKind kind);
std::string_view to_string(CrossingTag tag);

struct CrossingReport {
  double s = 0.0;
  FixedPointKind branch = FixedPointKind::alpha0;
  CrossingKind kind = CrossingKind::tracked_crossing;
  CrossingTag tag = CrossingTag::none;
  /// Stability of the tracked point (pole for pole_flip) on either side.
  Stability before = Stability::degenerate;
  Stability after = Stability::degenerate;
  /// Population where the event happens.
  double P = 0.0;
};

/// Scans the open window on `n_time_samples` uniform times and reports every
/// crossing of the tracked root, every merge/birth of untracked root pairs,
/// and every stability flip of the P = 1 pole, localized in time by
/// bisection to 1e-8 tau. Throws ResolutionError if roots move too far
/// between samples to be matched.
std::vector<CrossingReport> scan_crossings(const TrackingScenario& scenario,
                                           std::size_t n_time_samples = 400);

/// Number of tracked_crossing reports.
std::size_t count_tracked_crossings(const std::vector<CrossingReport>& reports);

}  // namespace kerrtrack
