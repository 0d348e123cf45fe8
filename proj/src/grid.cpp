#include "curvemates/grid.hpp"

#include <cmath>
#include <string>

#include "curvemates/error.hpp"

namespace curvemates {

UniformGrid::UniformGrid(double s_min, double s_max, std::size_t n)
    : s_min_(s_min), s_max_(s_max), n_(n) {
  if (n < 2) throw Error(ErrorKind::spec, "grid needs at least 2 nodes");
  if (!(s_min < s_max) || !std::isfinite(s_min) || !std::isfinite(s_max)) {
    throw Error(ErrorKind::spec, "grid requires finite s_min < s_max");
  }
}

double UniformGrid::at(std::size_t i) const noexcept {
  if (i + 1 == n_) return s_max_;
  return s_min_ + spacing() * static_cast<double>(i);
}

std::vector<double> UniformGrid::values() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = at(i);
  return out;
}

bool UniformGrid::matches(std::span<const double> s, double tol) const {
  if (s.size() != n_) return false;
  for (std::size_t i = 0; i < n_; ++i) {
    if (std::abs(s[i] - at(i)) > tol) return false;
  }
  return true;
}

UniformGrid require_uniform(std::span<const double> s, double rel_tol) {
  if (s.size() < 2) throw Error(ErrorKind::alignment, "grid needs at least 2 nodes");
  const double h = (s.back() - s.front()) / static_cast<double>(s.size() - 1);
  if (!(h > 0.0)) throw Error(ErrorKind::alignment, "grid must be increasing");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (std::abs((s[i] - s[i - 1]) - h) > rel_tol * h + 1e-12 * std::abs(s[i])) {
      throw Error(ErrorKind::alignment,
                  "grid is not uniform near s=" + std::to_string(s[i]), s[i]);
    }
  }
  return UniformGrid(s.front(), s.back(), s.size());
}

}  // namespace curvemates
