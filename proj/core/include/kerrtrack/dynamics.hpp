#pragma once

// Time integration of the model in two independent representations:
// complex rotating-frame amplitudes (the exact two-mode equations) and the
// globally regular reduced coordinates (P, Pi2, Pi3). Both produce a
// Trajectory on a uniform output grid of the dimensionless time s.

#include <cstddef>
#include <vector>

#include "kerrtrack/model.hpp"
#include "kerrtrack/tracking.hpp"

namespace kerrtrack {

struct IntegratorConfig {
  enum class Method { fehlberg78, dopri5 };

  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;  ///< <= 0: unbounded
  Method method = Method::fehlberg78;
  std::size_t max_steps_per_sample = 100000;

  void validate() const;
};

/// Uniform output grid [begin, end] with `samples` points (>= 2).
struct Window {
  double begin = 0.0;
  double end = 1.0;
  std::size_t samples = 2001;

  static Window symmetric(double tau, double window_ct, std::size_t samples = 2001);
  std::vector<double> grid() const;
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ReducedState> states;
  /// Unwrapped atan2(Pi3, Pi2); NaN inside the pole guard band.
  std::vector<double> alpha;
  /// J - 1 per sample (amplitude runs); empty for reduced runs.
  std::vector<double> j_drift;
  /// Pi2^2 + Pi3^2 - 8(1-P)^2 P per sample.
  std::vector<double> surface_drift;
  /// Raw amplitudes (amplitude runs only).
  std::vector<AmplitudeState> amplitudes;

  std::size_t size() const { return times.size(); }
  const ReducedState& final_state() const { return states.back(); }
  double max_abs_j_drift() const;
  double max_abs_surface_drift() const;
};

/// Physical drive of the exact model. Profiles take the dimensionless time
/// s = omega0 t and return angular frequencies in s^-1.
struct AmplitudeDrive {
  double omega0 = 1.0;     ///< peak Rabi frequency, s^-1
  Profile omega;           ///< Rabi frequency, s^-1
  Profile delta;           ///< detuning Delta (Lambda_a not removed), s^-1
  KerrParams kerr;         ///< s^-1
};

/// Drive of the reduced equations (all dimensionless).
struct ReducedDrive {
  Profile omega_tilde;
  Profile delta_tilde;  ///< (Delta - Lambda_a)/omega0
  double lambda_s_tilde = 0.0;
};

/// Throws DomainError if `initial` is not normalized, IntegrationError if
/// the stepper stalls or the state becomes non-finite.
Trajectory integrate_amplitudes(const AmplitudeState& initial,
                                const AmplitudeDrive& drive, const Window& window,
                                const IntegratorConfig& config = {});

/// The surface relation is monitored (surface_drift), not enforced.
Trajectory integrate_reduced(const ReducedState& initial, const ReducedDrive& drive,
                             const Window& window,
                             const IntegratorConfig& config = {});

/// max over the grid of |P(s) - tanh^2(int (omega/2) sin(alpha) ds')|,
/// trapezoidal quadrature on the trajectory grid. The integrand is taken as
/// zero inside the pole guard band.
double verify_tanh_identity(const Trajectory& trajectory, const Profile& omega_tilde);

/// tanh^2 of the running pulse area int omega/2 ds' on the trajectory grid,
/// the upper bound on P for runs started at the pole.
std::vector<double> area_bound(const Trajectory& trajectory, const Profile& omega_tilde);

}  // namespace kerrtrack
