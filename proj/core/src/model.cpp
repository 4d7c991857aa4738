#include "kerrtrack/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrtrack/errors.hpp"

namespace kerrtrack {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

}  // namespace

KerrParams KerrParams::scaled(double factor) const {
  return {lambda11 * factor, lambda12 * factor, lambda22 * factor,
          lambda_s * factor, lambda_a * factor};
}

KerrParams derive_kerr_combinations(double lambda11, double lambda12,
                                    double lambda22) {
  KerrParams k;
  k.lambda11 = lambda11;
  k.lambda12 = lambda12;
  k.lambda22 = lambda22;
  k.lambda_s = 2.0 * lambda11 + 0.5 * lambda22 - 2.0 * lambda12;
  k.lambda_a = 2.0 * lambda11 - lambda12;
  return k;
}

double ReducedState::surface_residual() const {
  const double q = 1.0 - P;
  return Pi2 * Pi2 + Pi3 * Pi3 - 8.0 * q * q * P;
}

void DimensionlessParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw DomainError("tau must be positive and finite");
  }
  if (!(window_ct > 0.0) || !std::isfinite(window_ct)) {
    throw DomainError("window_ct must be positive and finite");
  }
  if (!std::isfinite(lambda_s_tilde)) {
    throw DomainError("lambda_s_tilde must be finite");
  }
}

ReducedState amplitude_to_reduced(const AmplitudeState& state,
                                  double tolerance) {
  const double J = state.norm();
  if (!(std::abs(J - 1.0) <= tolerance)) {
    std::ostringstream msg;
    msg << "amplitude state violates |a1|^2 + 2|a2|^2 = 1 (J = " << J << ")";
    throw DomainError(msg.str());
  }
  const std::complex<double> z = 4.0 * state.a1 * state.a1 * std::conj(state.a2);
  return {2.0 * std::norm(state.a2), z.real(), z.imag()};
}

AmplitudeState reduced_to_amplitude(const ReducedState& state) {
  if (!(state.P >= 0.0 && state.P <= 1.0)) {
    throw DomainError("reduced state population outside [0, 1]");
  }
  const double q = 1.0 - state.P;
  if (q <= 0.0) {
    return {{0.0, 0.0}, {std::sqrt(0.5), 0.0}};
  }
  const std::complex<double> a1{std::sqrt(q), 0.0};
  // |a2| comes from P; the phase from Pi2 + i Pi3 = 4 a1^2 conj(a2).
  const double mod = std::sqrt(0.5 * state.P);
  const double arg = std::atan2(state.Pi3, state.Pi2);
  const std::complex<double> a2 =
      (state.Pi2 == 0.0 && state.Pi3 == 0.0) ? std::complex<double>{mod, 0.0}
                                             : std::polar(mod, -arg);
  return {a1, a2};
}

PolarPoint reduced_to_alpha(const ReducedState& state, double guard) {
  if (!(state.P >= guard && state.P <= 1.0 - guard)) {
    std::ostringstream msg;
    msg << "angle undefined near the poles (P = " << state.P << ")";
    throw DomainError(msg.str());
  }
  return {state.P, std::atan2(state.Pi3, state.Pi2)};
}

ReducedState polar_to_reduced(double P, double alpha) {
  const double r = 2.0 * kSqrt2 * (1.0 - P) * std::sqrt(P);
  return {P, r * std::cos(alpha), r * std::sin(alpha)};
}

double reduced_hamiltonian(double P, double alpha, double omega_tilde,
                           double delta_tilde, double lambda_s_tilde) {
  return 0.5 * delta_tilde * P + 0.25 * lambda_s_tilde * P * P +
         0.5 * omega_tilde * (1.0 - P) * std::sqrt(P) * std::cos(alpha);
}

double reduced_hamiltonian(const ReducedState& state, double omega_tilde,
                           double delta_tilde, double lambda_s_tilde) {
  return omega_tilde * state.Pi2 / (4.0 * kSqrt2) + 0.5 * delta_tilde * state.P +
         0.25 * lambda_s_tilde * state.P * state.P;
}

double amplitude_hamiltonian(const AmplitudeState& state, double omega_tilde,
                             double delta_hat, const KerrParams& kerr) {
  const double n1 = std::norm(state.a1);
  const double n2 = std::norm(state.a2);
  const std::complex<double> z = state.a1 * state.a1 * std::conj(state.a2);
  return delta_hat / 3.0 * (n2 - n1) + omega_tilde / (2.0 * kSqrt2) * 2.0 * z.real() +
         0.5 * kerr.lambda11 * n1 * n1 + 0.5 * kerr.lambda22 * n2 * n2 +
         kerr.lambda12 * n1 * n2;
}

double hamiltonian_offset(double J, double delta_hat, double lambda11) {
  return delta_hat / 3.0 * J - 0.5 * lambda11 * J * J;
}

double population_rate(double P, double alpha, double omega_tilde) {
  return omega_tilde * (1.0 - P) * std::sqrt(P) * std::sin(alpha);
}

double angle_rate(double P, double alpha, double omega_tilde, double delta_tilde,
                  double lambda_s_tilde) {
  return delta_tilde + lambda_s_tilde * P +
         omega_tilde * (1.0 - 3.0 * P) / (2.0 * std::sqrt(P)) * std::cos(alpha);
}

}  // namespace kerrtrack
