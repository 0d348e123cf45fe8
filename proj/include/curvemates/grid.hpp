#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace curvemates {

/// Uniform parameter grid [s_min, s_max] with n nodes (n >= 2).
class UniformGrid {
 public:
  UniformGrid(double s_min, double s_max, std::size_t n);

  double s_min() const noexcept { return s_min_; }
  double s_max() const noexcept { return s_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return (s_max_ - s_min_) / static_cast<double>(n_ - 1); }

  /// Node i; the last node is exactly s_max.
  double at(std::size_t i) const noexcept;
  std::vector<double> values() const;

  /// Checks that `s` matches this grid node-by-node within `tol`.
  bool matches(std::span<const double> s, double tol) const;

 private:
  double s_min_;
  double s_max_;
  std::size_t n_;
};

/// Returns the uniform grid described by `s` or throws `alignment` when the
/// spacing varies by more than `rel_tol` of the mean step.
UniformGrid require_uniform(std::span<const double> s, double rel_tol = 1e-9);

}  // namespace curvemates
