#include "kerrtrack/cubic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "kerrtrack/errors.hpp"

namespace kerrtrack {

namespace {

constexpr double kDegreeDrop = 1e-14;
constexpr double kRealImag = 1e-9;
constexpr double kClusterImag = 1e-7;
constexpr double kClusterGap = 1e-7;

double polish(const Cubic& c, double x) {
  for (int it = 0; it < 4; ++it) {
    const double f = evaluate(c, x);
    const double d = evaluate_derivative(c, x);
    if (d == 0.0) break;
    const double next = x - f / d;
    if (!std::isfinite(next) || std::abs(evaluate(c, next)) >= std::abs(f)) break;
    x = next;
  }
  return x;
}

void solve_quadratic(double c0, double c1, double c2, std::vector<RealRoot>& out) {
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  const double scale = std::max({c1 * c1, std::abs(4.0 * c2 * c0), 1e-300});
  if (disc < -1e-14 * scale) {
    return;
  }
  if (std::abs(disc) <= 1e-14 * scale) {
    out.push_back({-c1 / (2.0 * c2), true});
    return;
  }
  const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  out.push_back({q / c2, false});
  out.push_back({c0 / q, false});
}

}  // namespace

double evaluate(const Cubic& c, double x) {
  return ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
}

double evaluate_derivative(const Cubic& c, double x) {
  return (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1];
}

std::vector<RealRoot> real_cubic_roots(const Cubic& c) {
  const double scale =
      std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
  if (scale == 0.0 || !std::isfinite(scale)) {
    throw DomainError("polynomial is identically zero or not finite");
  }
  std::vector<RealRoot> roots;
  if (std::abs(c[3]) > kDegreeDrop * scale) {
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(0, 2) = -c[0] / c[3];
    companion(1, 2) = -c[1] / c[3];
    companion(2, 2) = -c[2] / c[3];
    const Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
    const auto ev = solver.eigenvalues();
    bool paired = false;
    for (int i = 0; i < 3; ++i) {
      const double re = ev[i].real();
      const double im = ev[i].imag();
      const double mag = std::max(1.0, std::abs(re));
      if (std::abs(im) <= kRealImag * mag) {
        roots.push_back({polish(c, re), false});
      } else if (std::abs(im) <= kClusterImag * mag && !paired) {
        roots.push_back({re, true});
        paired = true;
      }
    }
  } else if (std::abs(c[2]) > kDegreeDrop * scale) {
    solve_quadratic(c[0], c[1], c[2], roots);
    for (auto& r : roots) {
      if (!r.clustered) r.x = polish(c, r.x);
    }
  } else if (std::abs(c[1]) > kDegreeDrop * scale) {
    roots.push_back({-c[0] / c[1], false});
  }
  std::sort(roots.begin(), roots.end(),
            [](const RealRoot& a, const RealRoot& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (roots[i].x - roots[i - 1].x <= kClusterGap * std::max(1.0, std::abs(roots[i].x))) {
      roots[i].clustered = true;
      roots[i - 1].clustered = true;
    }
  }
  return roots;
}

}  // namespace kerrtrack
