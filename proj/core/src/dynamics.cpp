#include "kerrtrack/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "kerrtrack/errors.hpp"

namespace kerrtrack {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <std::size_t N>
using State = std::array<double, N>;

// Drives `system` over `grid`, calling `observe(x, t)` at every grid point
// (including the first). Stepper failures become IntegrationError.
template <std::size_t N, class System, class Observer>
void run_on_grid(System system, State<N> x, const std::vector<double>& grid,
                 const IntegratorConfig& config, Observer observe) {
  double last_time = grid.front();
  auto tracked = [&](const State<N>& state, double t) {
    last_time = t;
    for (double v : state) {
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite state at s = " << t;
        throw IntegrationError(msg.str(), t);
      }
    }
    observe(state, t);
  };
  const double dt0 = std::min(1e-3, (grid[1] - grid[0]) * 0.5);
  const odeint::max_step_checker checker(
      static_cast<int>(std::min<std::size_t>(config.max_steps_per_sample, 1u << 30)));
  try {
    if (config.method == IntegratorConfig::Method::fehlberg78) {
      odeint::runge_kutta_fehlberg78<State<N>> base;
      if (config.max_step > 0.0) {
        auto stepper = odeint::make_controlled(config.abs_tol, config.rel_tol,
                                               config.max_step, base);
        odeint::integrate_times(stepper, system, x, grid.begin(), grid.end(), dt0,
                                tracked, checker);
      } else {
        auto stepper = odeint::make_controlled(config.abs_tol, config.rel_tol, base);
        odeint::integrate_times(stepper, system, x, grid.begin(), grid.end(), dt0,
                                tracked, checker);
      }
    } else {
      odeint::runge_kutta_dopri5<State<N>> base;
      if (config.max_step > 0.0) {
        auto stepper = odeint::make_controlled(config.abs_tol, config.rel_tol,
                                               config.max_step, base);
        odeint::integrate_times(stepper, system, x, grid.begin(), grid.end(), dt0,
                                tracked, checker);
      } else {
        auto stepper = odeint::make_controlled(config.abs_tol, config.rel_tol, base);
        odeint::integrate_times(stepper, system, x, grid.begin(), grid.end(), dt0,
                                tracked, checker);
      }
    }
  } catch (const odeint::odeint_error& e) {
    std::ostringstream msg;
    msg << "step size underflow after s = " << last_time << ": " << e.what();
    throw IntegrationError(msg.str(), last_time);
  }
}

void append_alpha(Trajectory& traj, const ReducedState& r) {
  if (r.P < kPoleGuard || r.P > 1.0 - kPoleGuard) {
    traj.alpha.push_back(kNaN);
    return;
  }
  double a = std::atan2(r.Pi3, r.Pi2);
  // Unwrap against the last defined value.
  for (auto it = traj.alpha.rbegin(); it != traj.alpha.rend(); ++it) {
    if (std::isnan(*it)) continue;
    const double twopi = 2.0 * std::numbers::pi;
    a += twopi * std::round((*it - a) / twopi);
    break;
  }
  traj.alpha.push_back(a);
}

void reserve(Trajectory& traj, std::size_t n, bool amplitudes) {
  traj.times.reserve(n);
  traj.states.reserve(n);
  traj.alpha.reserve(n);
  traj.surface_drift.reserve(n);
  if (amplitudes) {
    traj.j_drift.reserve(n);
    traj.amplitudes.reserve(n);
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("integrator tolerances must be positive");
  }
  if (max_steps_per_sample == 0) {
    throw DomainError("max_steps_per_sample must be positive");
  }
}

Window Window::symmetric(double tau, double window_ct, std::size_t samples) {
  return {-window_ct * tau, window_ct * tau, samples};
}

std::vector<double> Window::grid() const {
  validate();
  std::vector<double> g(samples);
  const double h = (end - begin) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    g[i] = begin + h * static_cast<double>(i);
  }
  g.back() = end;
  return g;
}

void Window::validate() const {
  if (samples < 2) throw DomainError("window needs at least two samples");
  if (!(end > begin)) throw DomainError("window end must exceed its begin");
}

double Trajectory::max_abs_j_drift() const {
  double m = 0.0;
  for (double d : j_drift) m = std::max(m, std::abs(d));
  return m;
}

double Trajectory::max_abs_surface_drift() const {
  double m = 0.0;
  for (double d : surface_drift) m = std::max(m, std::abs(d));
  return m;
}

Trajectory integrate_amplitudes(const AmplitudeState& initial,
                                const AmplitudeDrive& drive, const Window& window,
                                const IntegratorConfig& config) {
  config.validate();
  if (std::abs(initial.norm() - 1.0) > kNormTolerance) {
    throw DomainError("initial amplitude state is not normalized (J != 1)");
  }
  if (!(drive.omega0 > 0.0)) throw DomainError("omega0 must be positive");
  const auto grid = window.grid();
  const double inv = 1.0 / drive.omega0;
  const KerrParams k = drive.kerr.scaled(inv);

  // x = (Re a1, Im a1, Re a2, Im a2); da/ds = -i * rhs.
  auto system = [&](const State<4>& x, State<4>& dxds, double s) {
    const std::complex<double> a1{x[0], x[1]};
    const std::complex<double> a2{x[2], x[3]};
    const double om = drive.omega(s) * inv;
    const double dl = drive.delta(s) * inv;
    const double n1 = std::norm(a1);
    const double n2 = std::norm(a2);
    const std::complex<double> r1 =
        (-dl / 3.0 + k.lambda11 * n1 + k.lambda12 * n2) * a1 +
        om / kSqrt2 * std::conj(a1) * a2;
    const std::complex<double> r2 =
        (dl / 3.0 + k.lambda12 * n1 + k.lambda22 * n2) * a2 +
        om / (2.0 * kSqrt2) * a1 * a1;
    dxds[0] = r1.imag();
    dxds[1] = -r1.real();
    dxds[2] = r2.imag();
    dxds[3] = -r2.real();
  };

  Trajectory traj;
  reserve(traj, grid.size(), true);
  auto observe = [&](const State<4>& x, double s) {
    const AmplitudeState a{{x[0], x[1]}, {x[2], x[3]}};
    ReducedState r;
    try {
      r = amplitude_to_reduced(a);
    } catch (const DomainError& e) {
      throw IntegrationError(e.what(), s);
    }
    traj.times.push_back(s);
    traj.amplitudes.push_back(a);
    traj.states.push_back(r);
    traj.j_drift.push_back(a.norm() - 1.0);
    traj.surface_drift.push_back(r.surface_residual());
    append_alpha(traj, r);
  };
  const State<4> x0{initial.a1.real(), initial.a1.imag(), initial.a2.real(),
                    initial.a2.imag()};
  run_on_grid<4>(system, x0, grid, config, observe);
  return traj;
}

Trajectory integrate_reduced(const ReducedState& initial, const ReducedDrive& drive,
                             const Window& window, const IntegratorConfig& config) {
  config.validate();
  if (!(initial.P >= 0.0 && initial.P <= 1.0)) {
    throw DomainError("initial reduced state population outside [0, 1]");
  }
  if (std::abs(initial.surface_residual()) > kNormTolerance) {
    throw DomainError("initial reduced state is off the drop surface");
  }
  const auto grid = window.grid();
  const double ls = drive.lambda_s_tilde;

  auto system = [&](const State<3>& x, State<3>& dxds, double s) {
    const double om = drive.omega_tilde(s);
    const double rot = drive.delta_tilde(s) + ls * x[0];
    dxds[0] = om / (2.0 * kSqrt2) * x[2];
    dxds[1] = -x[2] * rot;
    dxds[2] = kSqrt2 * om * (1.0 - x[0]) * (1.0 - 3.0 * x[0]) + x[1] * rot;
  };

  Trajectory traj;
  reserve(traj, grid.size(), false);
  auto observe = [&](const State<3>& x, double s) {
    const ReducedState r{x[0], x[1], x[2]};
    traj.times.push_back(s);
    traj.states.push_back(r);
    traj.surface_drift.push_back(r.surface_residual());
    append_alpha(traj, r);
  };
  run_on_grid<3>(system, State<3>{initial.P, initial.Pi2, initial.Pi3}, grid,
                 config, observe);
  return traj;
}

namespace {

double sin_alpha_weight(const ReducedState& r) {
  if (r.P < kPoleGuard || r.P > 1.0 - kPoleGuard) return 0.0;
  return r.Pi3 / (2.0 * kSqrt2 * (1.0 - r.P) * std::sqrt(r.P));
}

}  // namespace

double verify_tanh_identity(const Trajectory& trajectory, const Profile& omega_tilde) {
  if (trajectory.size() < 2) throw DomainError("trajectory too short");
  if (std::abs(trajectory.states.front().P) > kNormTolerance) {
    throw DomainError("tanh identity requires a run started at P = 0");
  }
  const std::size_t n = trajectory.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = 0.5 * omega_tilde(trajectory.times[i]) * sin_alpha_weight(trajectory.states[i]);
  }
  // Trapezoid on the sample grid. The residual is pure quadrature error, so
  // runs whose orbit swings past P = 0 (sin alpha flips sign quickly there)
  // need a dense grid to resolve it.
  const auto& s = trajectory.times;
  std::vector<double> area(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    area[i] = area[i - 1] + 0.5 * (s[i] - s[i - 1]) * (f[i] + f[i - 1]);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::tanh(area[i]);
    worst = std::max(worst, std::abs(trajectory.states[i].P - t * t));
  }
  return worst;
}

std::vector<double> area_bound(const Trajectory& trajectory, const Profile& omega_tilde) {
  std::vector<double> bound(trajectory.size(), 0.0);
  double area = 0.0;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    area += 0.25 * (omega_tilde(trajectory.times[i]) + omega_tilde(trajectory.times[i - 1])) *
            (trajectory.times[i] - trajectory.times[i - 1]);
    const double t = std::tanh(area);
    bound[i] = t * t;
  }
  return bound;
}

}  // namespace kerrtrack
