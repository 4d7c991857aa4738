#pragma once

#include <array>
#include <vector>

namespace kerrtrack {

/// Coefficients c0 + c1 x + c2 x^2 + c3 x^3.
using Cubic = std::array<double, 4>;

struct RealRoot {
  double x = 0.0;
  /// Part of an ill-conditioned cluster (near-double root); the value is the
  /// cluster centre and must not be trusted to more than ~1e-7.
  bool clustered = false;
};

/// Real roots in ascending order, from the eigenvalues of the companion
/// matrix followed by Newton polishing. The degree drops when leading
/// coefficients vanish relative to the others. A complex pair with
/// |imag| < 1e-7 is reported once as a clustered real root.
std::vector<RealRoot> real_cubic_roots(const Cubic& c);

double evaluate(const Cubic& c, double x);
double evaluate_derivative(const Cubic& c, double x);

}  // namespace kerrtrack
