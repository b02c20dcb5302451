#pragma once

#include <vector>

namespace phasecov {

/// Cumulative integral of uniformly sampled values, F[k] = integral from 0 to
/// k*h. Composite Simpson for even indices; odd indices integrate the local
/// quadratic over its first half, keeping fourth-order accuracy throughout.
/// Requires an odd sample count >= 3.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h);

/// Derivative of uniformly sampled values: fourth-order central stencil in the
/// interior, second-order one-sided at the end points, second-order central at
/// the points next to them. Requires >= 5 samples.
std::vector<double> derivative(const std::vector<double>& f, double h);

/// First interior index at which derivative() reaches fourth order.
inline constexpr int kDerivativeInteriorMargin = 2;

}  // namespace phasecov
