#pragma once

// Small numerical kernels shared by the geometry and solver modules.

#include <cstddef>
#include <span>
#include <vector>

namespace curvemates::numerics {

/// Finite-difference weights (Fornberg) for derivatives 0..max_order at `z`
/// from arbitrary distinct nodes. Result is indexed [order][node].
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes,
                                            int max_order);

/// Derivative of the given order (1..3) of sampled values at every node.
/// Interior nodes use central stencils (3 nodes for orders 1 and 2, 5 for
/// order 3), boundary nodes use one-sided stencils of order+2 nodes, so the
/// truncation error is O(h^2) throughout.
std::vector<double> differentiate(std::span<const double> s, std::span<const double> values,
                                  int order);

/// Same as differentiate() but with 5-node O(h^4) first/second derivatives.
/// Used only for self-checks that must stay independent of the O(h^2) path.
std::vector<double> differentiate_high_order(std::span<const double> s,
                                             std::span<const double> values, int order);

/// Cumulative integral from s[0] to every node on a uniform grid: composite
/// Simpson on pairs of intervals, with the single-interval quadratic rule for
/// the odd leftover. Returns a vector with out[0] == 0.
std::vector<double> cumulative_simpson(double h, std::span<const double> f);

/// Monotone piecewise-cubic (Fritsch–Carlson / PCHIP) interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

 private:
  std::size_t interval(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

/// Cubic Hermite interpolant through values and slopes on a sorted grid.
class CubicHermite {
 public:
  CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

  double operator()(double x) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> dy_;
};

}  // namespace curvemates::numerics
