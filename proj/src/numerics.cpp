#include "curvemates/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvemates/error.hpp"

namespace curvemates::numerics {

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes,
                                            int max_order) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<double>> c(static_cast<std::size_t>(max_order) + 1,
                                     std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min(static_cast<int>(i), max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

namespace {

std::vector<double> differentiate_with(std::span<const double> s, std::span<const double> values,
                                       int order, std::size_t interior_width,
                                       std::size_t boundary_width) {
  const std::size_t n = s.size();
  if (values.size() != n) throw Error(ErrorKind::alignment, "values/grid size mismatch");
  if (n < std::max(interior_width, boundary_width)) {
    throw Error(ErrorKind::insufficient_data,
                "derivative of order " + std::to_string(order) + " needs at least " +
                    std::to_string(std::max(interior_width, boundary_width)) + " samples");
  }
  const std::size_t half = (interior_width - 1) / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t start = 0;
    std::size_t width = interior_width;
    if (i >= half && i + half < n) {
      start = i - half;
    } else {
      width = boundary_width;
      start = (i < half) ? 0 : n - width;
    }
    const auto w = fd_weights(s[i], s.subspan(start, width), order);
    double acc = 0.0;
    for (std::size_t k = 0; k < width; ++k) acc += w[order][k] * values[start + k];
    out[i] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> differentiate(std::span<const double> s, std::span<const double> values,
                                  int order) {
  if (order < 1 || order > 3) throw Error(ErrorKind::contract, "derivative order must be 1..3");
  const std::size_t interior = order == 3 ? 5 : 3;
  return differentiate_with(s, values, order, interior, static_cast<std::size_t>(order) + 2);
}

std::vector<double> differentiate_high_order(std::span<const double> s,
                                             std::span<const double> values, int order) {
  if (order < 1 || order > 2) throw Error(ErrorKind::contract, "high-order derivative must be 1..2");
  return differentiate_with(s, values, order, 5, static_cast<std::size_t>(order) + 4);
}

std::vector<double> cumulative_simpson(double h, std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (std::size_t k = 2; k < n; ++k) {
    if (k % 2 == 0) {
      out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    } else {
      out[k] = out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
    }
  }
  return out;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), d_(x_.size(), 0.0) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw Error(ErrorKind::contract, "monotone cubic needs >= 2 points");
  std::vector<double> h(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    if (!(h[i] > 0.0)) throw Error(ErrorKind::contract, "monotone cubic abscissae must increase");
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double m0, double m1) {
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (d * m0 <= 0.0) {
      d = 0.0;
    } else if (m0 * m1 <= 0.0 && std::abs(d) > std::abs(3.0 * m0)) {
      d = 3.0 * m0;
    }
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::interval(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
  return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double dh00 = 6 * t * t - 6 * t;
  const double dh10 = 3 * t * t - 4 * t + 1;
  const double dh01 = -6 * t * t + 6 * t;
  const double dh11 = 3 * t * t - 2 * t;
  return (dh00 * y_[i] + dh01 * y_[i + 1]) / h + dh10 * d_[i] + dh11 * d_[i + 1];
}

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
  if (x_.size() < 2 || y_.size() != x_.size() || dy_.size() != x_.size()) {
    throw Error(ErrorKind::contract, "hermite interpolant needs aligned arrays of >= 2 points");
  }
}

double CubicHermite::operator()(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
  const std::size_t i = std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, x_.size() - 2);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * y_[i] + h10 * h * dy_[i] + h01 * y_[i + 1] + h11 * h * dy_[i + 1];
}

}  // namespace curvemates::numerics
