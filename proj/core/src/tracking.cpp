#include "kerrtrack/tracking.hpp"

#include <cmath>
#include <sstream>

#include "kerrtrack/errors.hpp"

namespace kerrtrack {

std::string_view to_string(Sector sector) {
  return sector == Sector::alpha0 ? "alpha0" : "alphaPi";
}

std::optional<Sector> parse_sector(std::string_view text) {
  if (text == "alpha0" || text == "alpha_0" || text == "0") return Sector::alpha0;
  if (text == "alphaPi" || text == "alpha_pi" || text == "pi") return Sector::alphaPi;
  return std::nullopt;
}

Profile sech_pulse(double tau) {
  if (!(tau > 0.0)) throw DomainError("sech_pulse: tau must be positive");
  return [tau](double s) { return 1.0 / std::cosh(s / tau); };
}

Profile canonical_target(double tau) {
  if (!(tau > 0.0)) throw DomainError("canonical_target: tau must be positive");
  return [tau](double s) { return 0.5 * (1.0 + std::tanh(s / tau)); };
}

double canonical_target_rate(double s, double tau) {
  const double sech = 1.0 / std::cosh(s / tau);
  return 0.5 * sech * sech / tau;
}

TrackingScenario TrackingScenario::canonical(Sector branch, double lambda_s_tilde,
                                             double tau, bool compensate_kerr,
                                             double window_ct) {
  TrackingScenario sc;
  sc.params = {lambda_s_tilde, tau, window_ct};
  sc.params.validate();
  sc.pulse = sech_pulse(tau);
  sc.target = canonical_target(tau);
  sc.branch = branch;
  sc.compensate_kerr = compensate_kerr;
  // sech(x) / (2 sqrt(P_track)) = 1/sqrt(1 + e^{2x}) -> 1 as x -> -inf.
  sc.edge_ratio_limit = 1.0;
  return sc;
}

double tracking_detuning_at(const TrackingScenario& scenario, double s) {
  const double P = scenario.target(s);
  const double omega = scenario.pulse(s);
  if (!(P > 0.0 && P < 1.0)) {
    std::ostringstream msg;
    msg << "tracking target must lie strictly inside (0, 1); got " << P
        << " at s = " << s;
    throw DomainError(msg.str());
  }
  double ratio = 0.0;  // omega / (2 sqrt(P))
  if (P < kPoleGuard) {
    if (!scenario.edge_ratio_limit) {
      std::ostringstream msg;
      msg << "tracking target inside the pole guard band at s = " << s
          << " and no limiting ratio was provided";
      throw DomainError(msg.str());
    }
    ratio = *scenario.edge_ratio_limit;
  } else {
    ratio = omega / (2.0 * std::sqrt(P));
  }
  const double kerr_term =
      scenario.compensate_kerr ? -scenario.params.lambda_s_tilde * P : 0.0;
  return kerr_term - sector_sign(scenario.branch) * ratio * (1.0 - 3.0 * P);
}

Profile design_detuning(const TrackingScenario& scenario) {
  return [scenario](double s) { return tracking_detuning_at(scenario, s); };
}

}  // namespace kerrtrack
