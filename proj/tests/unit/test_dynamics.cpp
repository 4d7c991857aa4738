#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kerrtrack/dynamics.hpp"
#include "kerrtrack/errors.hpp"
#include "kerrtrack/model.hpp"
#include "kerrtrack/simulation.hpp"
#include "oracles.hpp"

using namespace kerrtrack;

namespace {

constexpr double kPi = std::numbers::pi;

Profile constant(double v) {
  return [v](double) { return v; };
}

}  // namespace

TEST(Amplitudes, DecoupledModesKeepPopulations) {
  AmplitudeDrive d;
  d.omega = constant(0.0);
  d.delta = constant(1.3);
  const Trajectory t = integrate_amplitudes({}, d, {0.0, 50.0, 101});
  for (const auto& st : t.states) EXPECT_EQ(st.P, 0.0);

  d.kerr = derive_kerr_combinations(0.7, -1.1, 2.3);
  const AmplitudeState start{{std::sqrt(0.5), 0.0}, {0.5, 0.0}};
  const Trajectory u = integrate_amplitudes(start, d, {0.0, 50.0, 101});
  for (const auto& a : u.amplitudes) {
    EXPECT_NEAR(std::norm(a.a1), 0.5, 1e-10);
    EXPECT_NEAR(std::norm(a.a2), 0.25, 1e-10);
  }
}

TEST(Amplitudes, RejectsUnnormalizedStart) {
  AmplitudeDrive d;
  d.omega = constant(1.0);
  d.delta = constant(0.0);
  EXPECT_THROW(integrate_amplitudes({{0.9, 0.0}, {0.0, 0.0}}, d, {0.0, 1.0, 3}), DomainError);
}

TEST(Amplitudes, AgreesWithFixedStepOracle) {
  oracle::Gen g(41);
  for (int n = 0; n < 5; ++n) {
    const oracle::Frozen fr{g.uniform(0.2, 2), g.uniform(-2, 2), g.uniform(-1, 1),
                            g.uniform(-1, 1), g.uniform(-1, 1)};
    AmplitudeDrive d;
    d.omega = constant(fr.omega);
    d.delta = constant(fr.dhat);
    d.kerr = derive_kerr_combinations(fr.l11, fr.l12, fr.l22);
    const auto a0 = oracle::state_at(0.3, 1.0);
    const Trajectory t = integrate_amplitudes({a0[0], a0[1]}, d, {0.0, 10.0, 11});
    auto a = a0;
    const double h = 1e-3;
    for (std::size_t k = 1; k < t.size(); ++k) {
      for (int i = 0; i < 1000; ++i) oracle::rk4_step(fr, a, h);
      EXPECT_NEAR(std::abs(t.amplitudes[k].a1 - a[0]), 0.0, 1e-9);
      EXPECT_NEAR(std::abs(t.amplitudes[k].a2 - a[1]), 0.0, 1e-9);
    }
  }
}

TEST(Reduced, PoleIsStationary) {
  ReducedDrive d;
  d.omega_tilde = sech_pulse(3.0);
  d.delta_tilde = constant(0.4);
  d.lambda_s_tilde = 2.0;
  // All molecules: every rate vanishes at P = 1, unlike the P = 0 cusp.
  const Trajectory t = integrate_reduced({1.0, 0.0, 0.0}, d, {-30.0, 30.0, 61});
  for (const auto& st : t.states) {
    EXPECT_EQ(st.P, 1.0);
    EXPECT_EQ(st.Pi2, 0.0);
    EXPECT_EQ(st.Pi3, 0.0);
  }
}

TEST(Reduced, FrozenEnergyIsConserved) {
  ReducedDrive d;
  d.omega_tilde = constant(1.0);
  d.delta_tilde = constant(0.0);
  d.lambda_s_tilde = 0.0;
  for (auto [P, alpha] : {std::pair{0.2, 0.3}, std::pair{0.6, 2.0}, std::pair{0.45, -1.0}}) {
    const ReducedState start = polar_to_reduced(P, alpha);
    const Trajectory t = integrate_reduced(start, d, {0.0, 100.0, 1001});
    const double h0 = reduced_hamiltonian(start, 1.0, 0.0, 0.0);
    for (const auto& st : t.states) EXPECT_NEAR(reduced_hamiltonian(st, 1.0, 0.0, 0.0), h0, 1e-8);
  }
}

TEST(Reduced, FrozenEnergyWithKerr) {
  oracle::Gen g(42);
  for (int n = 0; n < 10; ++n) {
    const double om = g.uniform(0.2, 3), de = g.uniform(-3, 3), ls = g.uniform(0, 5);
    ReducedDrive d;
    d.omega_tilde = constant(om);
    d.delta_tilde = constant(de);
    d.lambda_s_tilde = ls;
    const ReducedState start = polar_to_reduced(g.uniform(0.05, 0.95), g.uniform(-kPi, kPi));
    const Trajectory t = integrate_reduced(start, d, {0.0, 100.0, 501});
    const double h0 = reduced_hamiltonian(start, om, de, ls);
    for (const auto& st : t.states) EXPECT_NEAR(reduced_hamiltonian(st, om, de, ls), h0, 1e-8);
    EXPECT_LE(t.max_abs_surface_drift(), 1e-8);
  }
}

TEST(Representations, AgreeOnRandomScenarios) {
  oracle::Gen g(43);
  for (int n = 0; n < 50; ++n) {
    const Sector b = g.coin() ? Sector::alpha0 : Sector::alphaPi;
    const auto sc = TrackingScenario::canonical(b, g.uniform(0, 5), g.uniform(3, 8), g.coin());
    const Window w = Window::symmetric(sc.params.tau, sc.params.window_ct, 401);
    ReducedState r0;
    if (g.coin()) r0 = polar_to_reduced(g.uniform(0.01, 0.99), g.uniform(-kPi, kPi));
    ReducedDrive rd{sc.pulse, design_detuning(sc), sc.params.lambda_s_tilde};
    AmplitudeDrive ad;
    ad.omega = sc.pulse;
    ad.delta = rd.delta_tilde;
    ad.kerr = derive_kerr_combinations(0.0, 0.0, 2.0 * sc.params.lambda_s_tilde);
    const Trajectory tr = integrate_reduced(r0, rd, w);
    const Trajectory ta = integrate_amplitudes(reduced_to_amplitude(r0), ad, w);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      ASSERT_NEAR(tr.states[k].P, ta.states[k].P, 1e-6) << "scenario " << n << " s=" << tr.times[k];
    }
  }
}

TEST(Representations, LambdaAOnlyShiftsTheDetuning) {
  oracle::Gen g(44);
  for (int n = 0; n < 20; ++n) {
    const double ls = g.uniform(-3, 3);
    const double l11 = g.uniform(-3, 3), l12 = g.uniform(-3, 3);
    const KerrParams k1 = derive_kerr_combinations(l11, l12, 2.0 * (ls - 2 * l11 + 2 * l12));
    const double m11 = g.uniform(-3, 3), m12 = g.uniform(-3, 3);
    const KerrParams k2 = derive_kerr_combinations(m11, m12, 2.0 * (ls - 2 * m11 + 2 * m12));
    ASSERT_NEAR(k1.lambda_s, k2.lambda_s, 1e-12);
    const double tau = g.uniform(2, 6);
    const Profile base = [tau](double s) { return 0.8 * std::tanh(s / tau); };
    AmplitudeDrive d1, d2;
    d1.omega = d2.omega = sech_pulse(tau);
    d1.delta = [&, base](double s) { return base(s) + k1.lambda_a; };
    d2.delta = [&, base](double s) { return base(s) + k2.lambda_a; };
    d1.kerr = k1;
    d2.kerr = k2;
    const auto a0 = oracle::state_at(g.uniform(0, 1), g.uniform(-kPi, kPi));
    const Window w{-8 * tau, 8 * tau, 201};
    // The two runs are gauge copies; each carries its own integration error,
    // so the comparison needs tolerances well below the 1e-8 target.
    IntegratorConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    const Trajectory t1 = integrate_amplitudes({a0[0], a0[1]}, d1, w, tight);
    const Trajectory t2 = integrate_amplitudes({a0[0], a0[1]}, d2, w, tight);
    for (std::size_t k = 0; k < t1.size(); ++k) {
      EXPECT_NEAR(std::norm(t1.amplitudes[k].a1), std::norm(t2.amplitudes[k].a1), 1e-8);
      EXPECT_NEAR(std::norm(t1.amplitudes[k].a2), std::norm(t2.amplitudes[k].a2), 1e-8);
    }
  }
}

TEST(Invariants, DriftsOnTrackedRuns) {
  for (Sector b : {Sector::alpha0, Sector::alphaPi}) {
    for (double ls : {0.0, 0.5, 2.0, 5.0}) {
      const auto sc = TrackingScenario::canonical(b, ls, 5.0);
      const TrackedRun amp = simulate_tracked(sc, Representation::amplitude);
      const TrackedRun red = simulate_tracked(sc, Representation::reduced);
      EXPECT_LE(amp.trajectory.max_abs_j_drift(), 1e-8);
      EXPECT_LE(amp.trajectory.max_abs_surface_drift(), 1e-8);
      EXPECT_LE(red.trajectory.max_abs_surface_drift(), 1e-8);
      EXPECT_TRUE(red.trajectory.j_drift.empty());
    }
  }
}

TEST(Invariants, AreaBoundHoldsFromThePole) {
  oracle::Gen g(45);
  for (int n = 0; n < 20; ++n) {
    const Sector b = g.coin() ? Sector::alpha0 : Sector::alphaPi;
    const auto sc = TrackingScenario::canonical(b, g.uniform(0, 5), g.uniform(2, 8), g.coin());
    const TrackedRun run = simulate_tracked(sc, Representation::reduced, {}, 801);
    const auto bound = area_bound(run.trajectory, sc.pulse);
    for (std::size_t k = 0; k < bound.size(); ++k) {
      EXPECT_LE(run.trajectory.states[k].P, bound[k] + 1e-9);
    }
  }
}

TEST(TanhIdentity, TrivialTrajectory) {
  AmplitudeDrive d;
  d.omega = constant(0.0);
  d.delta = constant(0.0);
  const Trajectory t = integrate_amplitudes({}, d, {0.0, 10.0, 11});
  EXPECT_EQ(verify_tanh_identity(t, constant(0.0)), 0.0);
}

TEST(TanhIdentity, TrackedRunsAtTauSix) {
  for (Sector b : {Sector::alpha0, Sector::alphaPi}) {
    for (double ls : {0.0, 1.0, 5.0}) {
      const auto sc = TrackingScenario::canonical(b, ls, 6.0);
      // Dense grid: the alpha0, ls = 5 orbit passes close to P = 0 after it
      // loses the tracked point, and 2001 samples under-resolve that swing.
      const TrackedRun run = simulate_tracked(sc, Representation::amplitude, {}, 8001);
      EXPECT_LE(verify_tanh_identity(run.trajectory, sc.pulse), 1e-3);
      EXPECT_LT(run.final_population(), 1.0);
    }
  }
}

TEST(TanhIdentity, RequiresAStartAtThePole) {
  ReducedDrive d{constant(1.0), constant(0.0), 0.0};
  const Trajectory t = integrate_reduced(polar_to_reduced(0.3, 0.0), d, {0.0, 1.0, 11});
  EXPECT_THROW(verify_tanh_identity(t, constant(1.0)), DomainError);
}

TEST(Trajectory, AlphaIsNanOnlyInTheGuardBand) {
  const auto sc = TrackingScenario::canonical(Sector::alphaPi, 1.0, 5.0);
  const TrackedRun run = simulate_tracked(sc, Representation::reduced);
  const Trajectory& t = run.trajectory;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double P = t.states[k].P;
    const bool guarded = P < kPoleGuard || P > 1.0 - kPoleGuard;
    EXPECT_EQ(std::isnan(t.alpha[k]), guarded) << "P=" << P;
    if (k > 0) { EXPECT_GT(t.times[k], t.times[k - 1]); }
  }
}

TEST(Integrator, ConfigValidation) {
  IntegratorConfig c;
  c.rel_tol = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_THROW((Window{1.0, 0.0, 10}.validate()), DomainError);
  EXPECT_THROW((Window{0.0, 1.0, 1}.validate()), DomainError);
}

TEST(Integrator, StepBudgetExhaustionCarriesTheTime) {
  IntegratorConfig c;
  c.max_steps_per_sample = 3;
  ReducedDrive d{constant(50.0), constant(40.0), 0.0};
  try {
    integrate_reduced(polar_to_reduced(0.4, 1.0), d, {0.0, 100.0, 2}, c);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_GE(e.failing_time(), 0.0);
    EXPECT_LT(e.failing_time(), 100.0);
  }
}

TEST(Integrator, Dopri5AlsoMeetsTheInvariants) {
  IntegratorConfig c;
  c.method = IntegratorConfig::Method::dopri5;
  const auto sc = TrackingScenario::canonical(Sector::alphaPi, 2.0, 5.0);
  const TrackedRun a = simulate_tracked(sc, Representation::amplitude, c);
  const TrackedRun b = simulate_tracked(sc, Representation::amplitude);
  EXPECT_LE(a.trajectory.max_abs_j_drift(), 1e-8);
  EXPECT_NEAR(a.final_population(), b.final_population(), 1e-7);
}
