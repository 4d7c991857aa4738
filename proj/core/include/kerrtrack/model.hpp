#pragma once

// Domain types of the two-mode atom-molecule model with Kerr terms, the
// transforms between complex amplitudes and the reduced (P, Pi2, Pi3)
// coordinates, and energy evaluation.
//
// Conventions
//   a1, a2   rotating-frame amplitudes; |a1|^2 + 2|a2|^2 = J = 1.
//   P        molecular population 2|a2|^2.
//   Pi2+iPi3 = 4 a1^2 conj(a2) = 2 sqrt2 (1-P) sqrt(P) e^{i alpha}.
//   tilde quantities are divided by the peak Rabi frequency Omega0 and
//   time is s = Omega0 t. The detuning seen by the reduced dynamics is
//   delta_tilde = (Delta - Lambda_a) / Omega0.

#include <complex>

namespace kerrtrack {

/// Pole guard band of the (P, alpha) chart.
inline constexpr double kPoleGuard = 1e-9;

/// Accepted |J - 1| when converting amplitudes to reduced coordinates.
inline constexpr double kNormTolerance = 1e-6;

/// Elastic-scattering Kerr coefficients (angular frequency units, or
/// dimensionless when divided by Omega0) and the two combinations that
/// enter the population dynamics.
struct KerrParams {
  double lambda11 = 0.0;
  double lambda12 = 0.0;
  double lambda22 = 0.0;
  double lambda_s = 0.0;  ///< 2 L11 + L22/2 - 2 L12
  double lambda_a = 0.0;  ///< 2 L11 - L12

  /// All five fields multiplied by `factor` (e.g. 1/Omega0).
  KerrParams scaled(double factor) const;
};

KerrParams derive_kerr_combinations(double lambda11, double lambda12,
                                    double lambda22);

struct AmplitudeState {
  std::complex<double> a1{1.0, 0.0};
  std::complex<double> a2{0.0, 0.0};

  /// J = |a1|^2 + 2|a2|^2.
  double norm() const { return std::norm(a1) + 2.0 * std::norm(a2); }
};

struct ReducedState {
  double P = 0.0;
  double Pi2 = 0.0;
  double Pi3 = 0.0;

  /// Pi2^2 + Pi3^2 - 8 (1-P)^2 P; zero on the drop surface.
  double surface_residual() const;
};

/// Point of the (P, alpha) chart.
struct PolarPoint {
  double P = 0.0;
  double alpha = 0.0;
};

struct DimensionlessParams {
  double lambda_s_tilde = 0.0;  ///< Lambda_s / Omega0
  double tau = 1.0;             ///< Omega0 T
  double window_ct = 10.0;      ///< half-width of the window in units of T

  /// Throws DomainError unless tau > 0 and window_ct > 0.
  void validate() const;
};

/// Throws DomainError if |J - 1| > tolerance.
ReducedState amplitude_to_reduced(const AmplitudeState& state,
                                  double tolerance = kNormTolerance);

/// Inverse map with a1 real and non-negative (the overall phase is not
/// recoverable). Requires P in [0, 1].
AmplitudeState reduced_to_amplitude(const ReducedState& state);

/// alpha = atan2(Pi3, Pi2). Throws DomainError when P is within `guard`
/// of either pole, where the angle is undefined.
PolarPoint reduced_to_alpha(const ReducedState& state,
                            double guard = kPoleGuard);

ReducedState polar_to_reduced(double P, double alpha);

/// Reduced energy with the constant C dropped:
///   h = delta P/2 + lambda_s P^2/4 + (omega/2)(1-P) sqrt(P) cos(alpha).
double reduced_hamiltonian(double P, double alpha, double omega_tilde,
                           double delta_tilde, double lambda_s_tilde);

/// Same energy written on the drop surface: omega Pi2/(4 sqrt2) + ...
double reduced_hamiltonian(const ReducedState& state, double omega_tilde,
                           double delta_tilde, double lambda_s_tilde);

/// Full two-mode Hamilton function (dimensionless, includes C).
/// `delta_hat` is Delta/Omega0 (Lambda_a not removed) and `kerr` holds
/// dimensionless coefficients.
double amplitude_hamiltonian(const AmplitudeState& state, double omega_tilde,
                             double delta_hat, const KerrParams& kerr);

/// The constant C = (delta_hat/3) J - (lambda11/2) J^2 separating the two
/// energies above.
double hamiltonian_offset(double J, double delta_hat, double lambda11);

/// Right-hand sides of the (P, alpha) equations of motion. Singular at the
/// poles; used for fixed-point design and checks, never integrated.
double population_rate(double P, double alpha, double omega_tilde);
double angle_rate(double P, double alpha, double omega_tilde,
                  double delta_tilde, double lambda_s_tilde);

}  // namespace kerrtrack
