#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kerrtrack/errors.hpp"
#include "kerrtrack/model.hpp"
#include "kerrtrack/portrait.hpp"
#include "kerrtrack/tracking.hpp"
#include "oracles.hpp"

using namespace kerrtrack;

namespace {

constexpr double kPi = std::numbers::pi;

// The target as written in the sin^2 form.
double target_sin2(double s, double tau) {
  const double arg = std::atan(std::sinh(s / tau)) / 2.0 + kPi / 4.0;
  return std::sin(arg) * std::sin(arg);
}

}  // namespace

TEST(Pulse, Examples) {
  const auto pulse = sech_pulse(4.0);
  EXPECT_DOUBLE_EQ(pulse(0.0), 1.0);
  EXPECT_NEAR(pulse(4.0 * std::acosh(2.0)), 0.5, 1e-15);
  EXPECT_NEAR(pulse(-4.0 * std::acosh(2.0)), 0.5, 1e-15);
}

TEST(Pulse, AreaOverTruncatedWindow) {
  const double tau = 5.0, wct = 10.0;
  const auto pulse = sech_pulse(tau);
  const int n = 200000;
  const double a = -wct * tau, b = wct * tau, h = (b - a) / n;
  double sum = 0.5 * (pulse(a) + pulse(b));
  for (int i = 1; i < n; ++i) sum += pulse(a + i * h);
  sum *= h;
  // Exact truncated area 2 tau gd(wct), gd the Gudermannian.
  const double exact = 2.0 * tau * 2.0 * std::atan(std::tanh(wct / 2.0));
  EXPECT_NEAR(sum, exact, 1e-8);
  EXPECT_LT(std::abs(sum - kPi * tau) / (kPi * tau), 1e-4);
}

TEST(Target, MatchesSinSquaredForm) {
  for (double tau : {1.0, 5.0, 6.0}) {
    const auto target = canonical_target(tau);
    for (double s = -10 * tau; s <= 10 * tau; s += 0.37) {
      EXPECT_NEAR(target(s), target_sin2(s, tau), 1e-14);
    }
  }
}

TEST(Target, Examples) {
  const auto target = canonical_target(5.0);
  EXPECT_DOUBLE_EQ(target(0.0), 0.5);
  EXPECT_NEAR(target(-1e4), 0.0, 1e-300);
  EXPECT_EQ(target(1e4), 1.0);
}

TEST(Target, DerivativeAgainstFiniteDifferences) {
  const double tau = 5.5;
  const auto target = canonical_target(tau);
  oracle::Gen g(31);
  for (int n = 0; n < 100; ++n) {
    const double s = g.uniform(-10 * tau, 10 * tau);
    const double arg = std::atan(std::sinh(s / tau)) / 2.0 + kPi / 4.0;
    const double chain = 1.0 / (2.0 * tau) / std::cosh(s / tau) * std::sin(2.0 * arg);
    const double h = 1e-4;
    const double fd = (target(s + h) - target(s - h)) / (2.0 * h);
    EXPECT_NEAR(chain, fd, 1e-8);
    EXPECT_NEAR(canonical_target_rate(s, tau), chain, 1e-14);
  }
}

TEST(Design, AlphaPiAtOneThird) {
  TrackingScenario sc = TrackingScenario::canonical(Sector::alphaPi, 2.7, 5.0);
  sc.target = [](double) { return 1.0 / 3.0; };
  for (double s : {-3.0, 0.0, 4.0}) EXPECT_NEAR(tracking_detuning_at(sc, s), -2.7 / 3.0, 1e-15);
}

TEST(Design, AlphaPiAtPeak) {
  const auto sc = TrackingScenario::canonical(Sector::alphaPi, 5.0, 6.0);
  const double d = tracking_detuning_at(sc, 0.0);
  EXPECT_NEAR(d, -2.5 - 1.0 / (2.0 * std::sqrt(2.0)) * 1.0, 1e-14);
  EXPECT_NEAR(d, -2.85355, 1e-5);
  EXPECT_NEAR(angle_rate(0.5, kPi, 1.0, d, 5.0), 0.0, 1e-14);
}

TEST(Design, TargetIsStationaryAlongTheWindow) {
  oracle::Gen g(32);
  for (int n = 0; n < 30; ++n) {
    const Sector b = g.coin() ? Sector::alpha0 : Sector::alphaPi;
    const double ls = g.uniform(0, 6);
    const auto sc = TrackingScenario::canonical(b, ls, g.uniform(2, 9));
    for (double s = sc.window_begin(); s <= sc.window_end(); s += sc.params.tau / 7.0) {
      const double P = sc.target(s);
      if (P < kPoleGuard || P > 1.0 - kPoleGuard) continue;
      const PortraitParams p = scenario_params_at(sc, s);
      const double sigma = sector_sign(b);
      const double x = std::sqrt(P);
      EXPECT_NEAR(oracle::sector_cubic(x, sigma, p.omega_tilde, p.delta_tilde, ls), 0.0, 1e-10);
      EXPECT_NEAR(angle_rate(P, b == Sector::alpha0 ? 0.0 : kPi, p.omega_tilde, p.delta_tilde, ls),
                  0.0, 1e-12 * std::max(1.0, std::abs(p.delta_tilde)));
    }
  }
}

TEST(Design, KerrFreeBranchesAreMirrorImages) {
  for (double tau : {3.0, 5.0}) {
    const auto zero = TrackingScenario::canonical(Sector::alpha0, 0.0, tau);
    const auto pi = TrackingScenario::canonical(Sector::alphaPi, 0.0, tau);
    for (double s = zero.window_begin(); s <= zero.window_end(); s += 0.1) {
      EXPECT_EQ(tracking_detuning_at(zero, s), -tracking_detuning_at(pi, s));
    }
  }
}

TEST(Design, LeftEdgeLimit) {
  for (Sector b : {Sector::alpha0, Sector::alphaPi}) {
    for (double tau : {2.0, 5.0, 6.0}) {
      const auto sc = TrackingScenario::canonical(b, 3.0, tau);
      const double d = tracking_detuning_at(sc, -10.0 * tau);
      // The Kerr term is ~1e-9 there; sign follows the branch.
      EXPECT_NEAR(d, -sector_sign(b), 1e-3);
      double sup = 0.0;
      for (double s = sc.window_begin(); s <= sc.window_end(); s += 0.01) {
        sup = std::max(sup, std::abs(tracking_detuning_at(sc, s)));
      }
      EXPECT_TRUE(std::isfinite(sup));
    }
  }
}

TEST(Design, CompensationToggleDropsOnlyTheKerrTerm) {
  const auto on = TrackingScenario::canonical(Sector::alphaPi, 1.5, 5.0, true);
  const auto off = TrackingScenario::canonical(Sector::alphaPi, 1.5, 5.0, false);
  for (double s = -20; s <= 20; s += 0.5) {
    EXPECT_NEAR(tracking_detuning_at(on, s) - tracking_detuning_at(off, s), -1.5 * on.target(s),
                1e-13);
  }
}

TEST(Design, SingularTargetsAreRejected) {
  TrackingScenario sc = TrackingScenario::canonical(Sector::alpha0, 1.0, 5.0);
  sc.target = [](double) { return 0.0; };
  sc.edge_ratio_limit.reset();
  EXPECT_THROW(tracking_detuning_at(sc, 0.0), DomainError);
  sc.target = [](double) { return 1.0; };
  EXPECT_THROW(tracking_detuning_at(sc, 0.0), DomainError);
  sc.target = [](double) { return 1e-12; };
  EXPECT_THROW(tracking_detuning_at(sc, 0.0), DomainError);
}

TEST(Design, ProfileCopiesTheScenario) {
  const auto sc = TrackingScenario::canonical(Sector::alpha0, 0.7, 4.0);
  const Profile f = design_detuning(sc);
  for (double s : {-30.0, -1.0, 0.0, 2.5, 39.0}) EXPECT_EQ(f(s), tracking_detuning_at(sc, s));
}
