#include "kerrtrack/simulation.hpp"

#include <cmath>

#include "kerrtrack/errors.hpp"

namespace kerrtrack {

std::string_view to_string(Representation r) {
  return r == Representation::amplitude ? "amplitude" : "reduced";
}

std::optional<Representation> parse_representation(std::string_view text) {
  if (text == "amplitude") return Representation::amplitude;
  if (text == "reduced") return Representation::reduced;
  return std::nullopt;
}

TrackedRun simulate_tracked(const TrackingScenario& scenario, Representation representation,
                            const IntegratorConfig& config, std::size_t samples,
                            std::optional<KerrParams> kerr_tilde) {
  scenario.params.validate();
  const Window window{scenario.window_begin(), scenario.window_end(), samples};
  const Profile delta = design_detuning(scenario);
  const double ls = scenario.params.lambda_s_tilde;

  TrackedRun run;
  if (representation == Representation::reduced) {
    run.trajectory = integrate_reduced({0.0, 0.0, 0.0}, {scenario.pulse, delta, ls},
                                       window, config);
  } else {
    const KerrParams k = kerr_tilde.value_or(derive_kerr_combinations(0.0, 0.0, 2.0 * ls));
    if (std::abs(k.lambda_s - ls) > 1e-12 * std::max(1.0, std::abs(ls))) {
      throw DomainError("Kerr triple does not reproduce the scenario's lambda_s_tilde");
    }
    AmplitudeDrive drive;
    drive.omega0 = 1.0;
    drive.omega = scenario.pulse;
    const double shift = k.lambda_a;
    drive.delta = [delta, shift](double s) { return delta(s) + shift; };
    drive.kerr = k;
    run.trajectory = integrate_amplitudes({{1.0, 0.0}, {0.0, 0.0}}, drive, window, config);
  }
  const auto& t = run.trajectory.times;
  run.omega_tilde.reserve(t.size());
  run.delta_tilde.reserve(t.size());
  run.target.reserve(t.size());
  for (double s : t) {
    run.omega_tilde.push_back(scenario.pulse(s));
    run.delta_tilde.push_back(delta(s));
    run.target.push_back(scenario.target(s));
  }
  return run;
}

}  // namespace kerrtrack
