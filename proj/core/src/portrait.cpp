#include "kerrtrack/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kerrtrack/errors.hpp"

namespace kerrtrack {

namespace {

constexpr double kBoundarySnap = 1e-9;

double sector_energy(double P, double alpha, const PortraitParams& p) {
  return reduced_hamiltonian(P, alpha, p.omega_tilde, p.delta_tilde, p.lambda_s_tilde);
}

// cos(alpha) on the level set `energy`; NaN where the coupling term vanishes.
double level_cosine(double P, double energy, const PortraitParams& p) {
  const double den = 0.5 * p.omega_tilde * (1.0 - P) * std::sqrt(P);
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (energy - 0.5 * p.delta_tilde * P - 0.25 * p.lambda_s_tilde * P * P) / den;
}

}  // namespace

PortraitParams scenario_params_at(const TrackingScenario& scenario, double s) {
  return {scenario.pulse(s), tracking_detuning_at(scenario, s),
          scenario.params.lambda_s_tilde};
}

std::string_view to_string(FixedPointKind kind) {
  switch (kind) {
    case FixedPointKind::alpha0: return "alpha0";
    case FixedPointKind::alphaPi: return "alphaPi";
    case FixedPointKind::pole_p1: return "pole_P1";
    case FixedPointKind::pole_p0: return "pole_P0";
  }
  return "?";
}

std::string_view to_string(Stability stability) {
  switch (stability) {
    case Stability::elliptic: return "elliptic";
    case Stability::hyperbolic: return "hyperbolic";
    case Stability::degenerate: return "degenerate";
  }
  return "?";
}

double FixedPoint::alpha() const {
  return kind == FixedPointKind::alphaPi ? std::numbers::pi : 0.0;
}

Cubic fixed_point_cubic(Sector sector, const PortraitParams& p) {
  const double sigma = sector_sign(sector);
  return {sigma * 0.5 * p.omega_tilde, p.delta_tilde, -sigma * 1.5 * p.omega_tilde,
          p.lambda_s_tilde};
}

double linearization_determinant(double P, Sector sector, const PortraitParams& p) {
  const double sigma = sector_sign(sector);
  // J = [[0, dPdot/dalpha], [dalphadot/dP, 0]] at sin(alpha) = 0.
  const double a = p.omega_tilde * (1.0 - P) * std::sqrt(P) * sigma;
  const double b =
      p.lambda_s_tilde - sigma * p.omega_tilde * (1.0 + 3.0 * P) / (4.0 * P * std::sqrt(P));
  return -a * b;
}

double pole_stability_margin(const PortraitParams& p) {
  const double mu = p.delta_tilde + p.lambda_s_tilde;
  return mu * mu - p.omega_tilde * p.omega_tilde;
}

Stability classify_stability(const FixedPoint& fp, const PortraitParams& p) {
  double value = 0.0;
  switch (fp.kind) {
    case FixedPointKind::pole_p0:
      return Stability::elliptic;
    case FixedPointKind::pole_p1:
      value = pole_stability_margin(p);
      break;
    case FixedPointKind::alpha0:
    case FixedPointKind::alphaPi:
      if (fp.clustered) return Stability::degenerate;
      value = linearization_determinant(
          fp.P, fp.kind == FixedPointKind::alpha0 ? Sector::alpha0 : Sector::alphaPi, p);
      break;
  }
  if (std::abs(value) <= kDegenerateDeterminant) return Stability::degenerate;
  return value > 0.0 ? Stability::elliptic : Stability::hyperbolic;
}

double linear_rate(const FixedPoint& fp, const PortraitParams& p) {
  switch (fp.kind) {
    case FixedPointKind::pole_p0:
      return 0.0;
    case FixedPointKind::pole_p1:
      return 0.5 * std::sqrt(std::abs(pole_stability_margin(p)));
    default:
      return std::sqrt(std::abs(linearization_determinant(
          fp.P, fp.kind == FixedPointKind::alpha0 ? Sector::alpha0 : Sector::alphaPi, p)));
  }
}

std::vector<FixedPoint> fixed_points_at(const PortraitParams& p) {
  if (!(p.omega_tilde >= 0.0)) throw DomainError("omega_tilde must be non-negative");
  std::vector<FixedPoint> out;
  for (Sector sector : {Sector::alpha0, Sector::alphaPi}) {
    const Cubic cubic = fixed_point_cubic(sector, p);
    if (cubic[0] == 0.0 && cubic[1] == 0.0 && cubic[2] == 0.0 && cubic[3] == 0.0) {
      continue;  // every P is stationary; nothing isolated to report
    }
    for (const RealRoot& r : real_cubic_roots(cubic)) {
      double x = r.x;
      if (x < -kBoundarySnap || x > 1.0 + kBoundarySnap) continue;
      x = std::clamp(x, 0.0, 1.0);
      // Roots at the poles are represented by the pole points.
      if (x <= kBoundarySnap || x >= 1.0 - kBoundarySnap) continue;
      FixedPoint fp;
      fp.P = x * x;
      fp.kind = kind_of(sector);
      fp.clustered = r.clustered;
      fp.energy = sector_energy(fp.P, fp.alpha(), p);
      fp.stability = classify_stability(fp, p);
      out.push_back(fp);
    }
  }
  FixedPoint top;
  top.P = 1.0;
  top.kind = FixedPointKind::pole_p1;
  top.energy = sector_energy(1.0, 0.0, p);
  top.stability = classify_stability(top, p);
  out.push_back(top);
  if (p.omega_tilde == 0.0) {
    FixedPoint bottom;
    bottom.P = 0.0;
    bottom.kind = FixedPointKind::pole_p0;
    bottom.energy = 0.0;
    bottom.stability = Stability::elliptic;
    out.push_back(bottom);
  }
  return out;
}

Separatrix trace_separatrix(const FixedPoint& fp, const PortraitParams& p,
                            std::size_t n_samples) {
  if (classify_stability(fp, p) != Stability::hyperbolic) {
    throw DomainError("separatrices belong to hyperbolic fixed points only");
  }
  if (n_samples < 3) throw DomainError("separatrix needs at least three samples");
  const double h = fp.energy;
  Separatrix sep;
  sep.owner = fp;

  // Admissible (P, |alpha|) samples; |alpha| = acos(c).
  std::vector<SeparatrixPoint> half;
  auto cos_at = [&](double P) { return level_cosine(P, h, p); };
  auto admissible = [](double c) { return std::isfinite(c) && std::abs(c) <= 1.0 + 1e-12; };
  auto push = [&](double P, double c) {
    half.push_back({P, std::acos(std::clamp(c, -1.0, 1.0))});
  };

  // Turning point between an admissible and an inadmissible sample.
  auto boundary = [&](double lo, double hi) {
    const bool lo_ok = admissible(cos_at(lo));
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (admissible(cos_at(mid)) == lo_ok) lo = mid; else hi = mid;
    }
    const double P = lo_ok ? lo : hi;
    push(P, cos_at(P));
  };

  // Recursive midpoint insertion where alpha moves fast.
  auto refine = [&](auto&& self, double P0, double a0, double P1, double a1,
                    int depth) -> void {
    if (depth == 0 || std::abs(a1 - a0) < 0.05) return;
    const double Pm = 0.5 * (P0 + P1);
    const double c = cos_at(Pm);
    if (!admissible(c)) return;
    const double am = std::acos(std::clamp(c, -1.0, 1.0));
    self(self, P0, a0, Pm, am, depth - 1);
    half.push_back({Pm, am});
    self(self, Pm, am, P1, a1, depth - 1);
  };

  const double step = 1.0 / static_cast<double>(n_samples - 1);
  double prevP = 0.0;
  double prevC = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i + 1 < n_samples; ++i) {
    const double P = step * static_cast<double>(i);
    const double c = cos_at(P);
    const bool ok = admissible(c);
    if (i > 1) {
      const bool prev_ok = admissible(prevC);
      if (ok != prev_ok) {
        boundary(prevP, P);
      } else if (ok) {
        refine(refine, prevP, std::acos(std::clamp(prevC, -1.0, 1.0)), P,
               std::acos(std::clamp(c, -1.0, 1.0)), 8);
      }
    }
    if (ok) push(P, c);
    prevP = P;
    prevC = c;
  }

  const bool owner_interior = fp.interior();
  if (half.empty()) {
    return sep;  // level set reduces to the owner
  }
  if (owner_interior) {
    half.push_back({fp.P, fp.alpha()});
  } else if (fp.kind == FixedPointKind::pole_p1) {
    half.push_back({1.0, 0.0});
  }
  std::sort(half.begin(), half.end(), [](const SeparatrixPoint& a, const SeparatrixPoint& b) {
    return a.P < b.P;
  });
  sep.points.reserve(2 * half.size());
  for (const auto& q : half) sep.points.push_back(q);
  for (const auto& q : half) {
    if (q.alpha != 0.0 && q.alpha != std::numbers::pi) {
      sep.points.push_back({q.P, -q.alpha});
    }
  }
  return sep;
}

PortraitSnapshot portrait_at(const PortraitParams& params, std::size_t separatrix_samples) {
  PortraitSnapshot snap;
  snap.params = params;
  snap.fixed_points = fixed_points_at(params);
  for (const auto& fp : snap.fixed_points) {
    if (fp.stability == Stability::hyperbolic) {
      snap.separatrices.push_back(trace_separatrix(fp, params, separatrix_samples));
    }
  }
  return snap;
}

PortraitSnapshot portrait_at(const TrackingScenario& scenario, double s,
                             std::size_t separatrix_samples) {
  PortraitSnapshot snap = portrait_at(scenario_params_at(scenario, s), separatrix_samples);
  snap.s = s;
  return snap;
}

FixedPoint tracked_fixed_point(const TrackingScenario& scenario, double s) {
  const PortraitParams p = scenario_params_at(scenario, s);
  FixedPoint fp;
  fp.P = scenario.target(s);
  fp.kind = kind_of(scenario.branch);
  fp.energy = sector_energy(fp.P, fp.alpha(), p);
  fp.stability = classify_stability(fp, p);
  return fp;
}

}  // namespace kerrtrack
