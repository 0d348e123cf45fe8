#include "curvemates/curve.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curvemates/error.hpp"
#include "curvemates/numerics.hpp"

namespace curvemates {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite(double v) { return std::isfinite(v); }

std::array<int, 4> kSampledStencil = {2, 3, 5, 7};

// Derivatives 0..order (order <= 4) of the analytic kinds.
std::vector<Vec3> analytic_derivatives(const CurveSpec::Shape& shape, double t, int order) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(order) + 1);
  const double half_pi = std::numbers::pi / 2.0;
  for (int k = 0; k <= order; ++k) {
    const double phase = t + k * half_pi;
    Vec3 d = std::visit(
        [&](const auto& c) -> Vec3 {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Circle>) {
            return {c.r * std::cos(phase), c.r * std::sin(phase), 0.0};
          } else if constexpr (std::is_same_v<T, Helix>) {
            const double z = k == 0 ? c.b * t : (k == 1 ? c.b : 0.0);
            return {c.a * std::cos(phase), c.a * std::sin(phase), z};
          } else if constexpr (std::is_same_v<T, EllipticHelix>) {
            const double z = k == 0 ? c.c * t : (k == 1 ? c.c : 0.0);
            return {c.a * std::cos(phase), c.b * std::sin(phase), z};
          } else if constexpr (std::is_same_v<T, Line>) {
            if (k == 0) return c.origin + t * c.direction;
            return k == 1 ? c.direction : Vec3::Zero();
          } else if constexpr (std::is_same_v<T, SemicubicalCusp>) {
            switch (k) {
              case 0: return {t * t, t * t * t, 0.0};
              case 1: return {2.0 * t, 3.0 * t * t, 0.0};
              case 2: return {2.0, 6.0 * t, 0.0};
              case 3: return {0.0, 6.0, 0.0};
              default: return Vec3::Zero();
            }
          } else {
            return Vec3::Zero();
          }
        },
        shape);
    out.push_back(d);
  }
  return out;
}

std::vector<Vec3> sampled_derivatives(const Samples& samples, double t, int order,
                                      std::size_t width) {
  const std::size_t n = samples.s.size();
  if (n < width) {
    throw Error(ErrorKind::insufficient_data,
                "order-" + std::to_string(order) + " stencil needs " + std::to_string(width) +
                    " samples, curve has " + std::to_string(n));
  }
  const auto it = std::lower_bound(samples.s.begin(), samples.s.end(), t);
  auto centre = static_cast<std::ptrdiff_t>(std::distance(samples.s.begin(), it));
  if (centre > 0 && (centre == static_cast<std::ptrdiff_t>(n) ||
                     std::abs(samples.s[centre - 1] - t) < std::abs(samples.s[centre] - t))) {
    --centre;
  }
  std::ptrdiff_t start = centre - static_cast<std::ptrdiff_t>(width / 2);
  start = std::clamp<std::ptrdiff_t>(start, 0, static_cast<std::ptrdiff_t>(n - width));
  const std::span<const double> nodes(samples.s.data() + start, width);
  const auto w = numerics::fd_weights(t, nodes, order);
  std::vector<Vec3> out(static_cast<std::size_t>(order) + 1, Vec3::Zero());
  for (int k = 0; k <= order; ++k) {
    for (std::size_t j = 0; j < width; ++j) {
      out[k] += w[k][j] * samples.points[static_cast<std::size_t>(start) + j];
    }
  }
  return out;
}

// Frame from derivative vectors; kappa'/tau' left to the caller.
FrenetFrame frame_from_derivatives(const Vec3& position, const Vec3& d1, const Vec3& d2,
                                   const Vec3& d3, double t, const FrenetOptions& opts) {
  const double speed = d1.norm();
  if (!(speed > 0.0)) {
    throw Error(ErrorKind::regularity, "zero speed at t=" + std::to_string(t), t);
  }
  const Vec3 c = d1.cross(d2);
  const double cn = c.norm();
  const double kappa = cn / (speed * speed * speed);
  if (!(kappa >= opts.kappa_min)) {
    throw Error(ErrorKind::curvature_degenerate,
                "curvature " + std::to_string(kappa) + " below floor at t=" + std::to_string(t), t);
  }
  FrenetFrame f;
  f.s = t;
  f.position = position;
  f.T = d1 / speed;
  f.B = c / cn;
  f.N = f.B.cross(f.T);
  f.kappa = kappa;
  f.tau = c.dot(d3) / (cn * cn);
  return f;
}

// Exact arc-length derivatives of kappa and tau from up to the 4th derivative.
void analytic_curvature_rates(const std::vector<Vec3>& d, FrenetFrame& f) {
  const Vec3& v = d[1];
  const Vec3& a = d[2];
  const Vec3& j = d[3];
  const Vec3& q = d[4];
  const double sp = v.norm();
  const double sp_dot = v.dot(a) / sp;
  const Vec3 c = v.cross(a);
  const Vec3 c_dot = v.cross(j);
  const double cn = c.norm();
  const double cn_dot = c.dot(c_dot) / cn;
  const double dkappa_dt = cn_dot / (sp * sp * sp) - 3.0 * cn * sp_dot / (sp * sp * sp * sp);
  const double cj = c.dot(j);
  const double dtau_dt = (c_dot.dot(j) + c.dot(q)) / (cn * cn) - 2.0 * cj * cn_dot / (cn * cn * cn);
  f.kappa_prime = dkappa_dt / sp;
  f.tau_prime = dtau_dt / sp;
}

FrenetFrame analytic_frame(const CurveSpec& curve, double t, const FrenetOptions& opts) {
  const auto d = analytic_derivatives(curve.shape(), t, 4);
  FrenetFrame f = frame_from_derivatives(d[0], d[1], d[2], d[3], t, opts);
  analytic_curvature_rates(d, f);
  return f;
}

double golden_min(const auto& fn, double lo, double hi, double& arg) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = fn(x1);
  double f2 = fn(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = fn(x2);
    }
  }
  arg = f1 < f2 ? x1 : x2;
  return std::min(f1, f2);
}

std::vector<double> component(std::span<const Vec3> v, int axis) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i][axis];
  return out;
}

std::vector<Vec3> differentiate_vectors(std::span<const double> s, std::span<const Vec3> v,
                                        int order) {
  std::array<std::vector<double>, 3> comp;
  for (int a = 0; a < 3; ++a) comp[a] = numerics::differentiate(s, component(v, a), order);
  std::vector<Vec3> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = {comp[0][i], comp[1][i], comp[2][i]};
  return out;
}

void difference_second_rates(std::span<const double> s, std::vector<FrenetFrame>& frames) {
  if (frames.size() < 3) return;
  std::vector<double> kp(frames.size());
  std::vector<double> tp(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    kp[i] = frames[i].kappa_prime;
    tp[i] = frames[i].tau_prime;
  }
  const auto kpp = numerics::differentiate(s, kp, 1);
  const auto tpp = numerics::differentiate(s, tp, 1);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    frames[i].kappa_second = kpp[i];
    frames[i].tau_second = tpp[i];
  }
}

}  // namespace

CurveSpec CurveSpec::circle(double r) {
  if (!finite(r) || !(r > 0.0)) throw Error(ErrorKind::spec, "circle radius must be positive");
  return CurveSpec(Circle{r});
}

CurveSpec CurveSpec::helix(double a, double b) {
  if (!finite(a) || !finite(b) || !(a > 0.0)) {
    throw Error(ErrorKind::spec, "helix needs radius a > 0 and finite pitch b");
  }
  return CurveSpec(Helix{a, b});
}

CurveSpec CurveSpec::elliptic_helix(double a, double b, double c) {
  if (!finite(a) || !finite(b) || !finite(c) || !(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorKind::spec, "elliptic helix needs semi-axes a, b > 0 and finite pitch c");
  }
  return CurveSpec(EllipticHelix{a, b, c});
}

CurveSpec CurveSpec::line(const Vec3& origin, const Vec3& direction) {
  if (!origin.allFinite() || !direction.allFinite() || direction.norm() == 0.0) {
    throw Error(ErrorKind::spec, "line needs a finite nonzero direction");
  }
  return CurveSpec(Line{origin, direction});
}

CurveSpec CurveSpec::cusp() { return CurveSpec(SemicubicalCusp{}); }

CurveSpec CurveSpec::samples(std::vector<double> s, std::vector<Vec3> points) {
  if (s.size() != points.size()) throw Error(ErrorKind::spec, "sample arrays differ in length");
  if (s.size() < 2) throw Error(ErrorKind::insufficient_data, "sampled curve needs >= 2 points");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!finite(s[i]) || !points[i].allFinite()) {
      throw Error(ErrorKind::spec, "non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(s[i] > s[i - 1])) {
      throw Error(ErrorKind::spec, "sample parameter must be strictly increasing", s[i]);
    }
  }
  return CurveSpec(Samples{std::move(s), std::move(points)});
}

std::string CurveSpec::kind() const {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Circle>) return "circle";
        if constexpr (std::is_same_v<T, Helix>) return "helix";
        if constexpr (std::is_same_v<T, EllipticHelix>) return "elliptic-helix";
        if constexpr (std::is_same_v<T, Line>) return "line";
        if constexpr (std::is_same_v<T, SemicubicalCusp>) return "cusp";
        return "samples";
      },
      shape_);
}

std::pair<double, double> CurveSpec::domain() const {
  if (const auto* smp = std::get_if<Samples>(&shape_)) return {smp->s.front(), smp->s.back()};
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

std::vector<Vec3> evaluate(const CurveSpec& curve, double t, int order) {
  if (order < 0 || order > 3) throw Error(ErrorKind::contract, "evaluate order must be 0..3");
  const auto [lo, hi] = curve.domain();
  if (!finite(t) || t < lo || t > hi) {
    throw Error(ErrorKind::domain, "parameter " + std::to_string(t) + " outside curve domain", t);
  }
  if (const auto* smp = std::get_if<Samples>(&curve.shape())) {
    return sampled_derivatives(*smp, t, order, static_cast<std::size_t>(kSampledStencil[order]));
  }
  return analytic_derivatives(curve.shape(), t, order);
}

double frame_orthonormality_error(const FrenetFrame& f) {
  double err = 0.0;
  err = std::max(err, std::abs(f.T.norm() - 1.0));
  err = std::max(err, std::abs(f.N.norm() - 1.0));
  err = std::max(err, std::abs(f.B.norm() - 1.0));
  err = std::max(err, std::abs(f.T.dot(f.N)));
  err = std::max(err, std::abs(f.T.dot(f.B)));
  err = std::max(err, std::abs(f.N.dot(f.B)));
  err = std::max(err, (f.T.cross(f.N) - f.B).cwiseAbs().maxCoeff());
  return err;
}

FrenetFrame frenet_apparatus(const CurveSpec& curve, double t, const FrenetOptions& opts) {
  const auto [lo, hi] = curve.domain();
  if (!finite(t) || t < lo || t > hi) {
    throw Error(ErrorKind::domain, "parameter " + std::to_string(t) + " outside curve domain", t);
  }
  if (const auto* smp = std::get_if<Samples>(&curve.shape())) {
    const auto d = evaluate(curve, t, 3);
    FrenetFrame f = frame_from_derivatives(d[0], d[1], d[2], d[3], t, opts);
    // Rates come from differencing the node-wise kappa/tau arrays.
    FrenetOptions loose = opts;
    loose.kappa_min = 0.0;
    const auto nodes = numeric_frames(smp->s, smp->points, loose);
    const auto it = std::upper_bound(smp->s.begin(), smp->s.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(smp->s.begin(), it));
    i = std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, smp->s.size() - 2);
    const double w = (t - smp->s[i]) / (smp->s[i + 1] - smp->s[i]);
    auto lerp = [&](auto field) {
      return (1.0 - w) * nodes[i].frame.*field + w * nodes[i + 1].frame.*field;
    };
    f.kappa_prime = lerp(&FrenetFrame::kappa_prime);
    f.tau_prime = lerp(&FrenetFrame::tau_prime);
    f.kappa_second = lerp(&FrenetFrame::kappa_second);
    f.tau_second = lerp(&FrenetFrame::tau_second);
    return f;
  }
  FrenetFrame f = analytic_frame(curve, t, opts);
  // Second arc-length rates by a central difference of the exact first rates.
  const double speed = analytic_derivatives(curve.shape(), t, 1)[1].norm();
  const double dt = 1e-4 / speed;
  FrenetOptions loose = opts;
  loose.kappa_min = 0.0;
  const FrenetFrame fp = analytic_frame(curve, t + dt, loose);
  const FrenetFrame fm = analytic_frame(curve, t - dt, loose);
  f.kappa_second = (fp.kappa_prime - fm.kappa_prime) / (2.0 * dt * speed);
  f.tau_second = (fp.tau_prime - fm.tau_prime) / (2.0 * dt * speed);
  return f;
}

FrenetFrame frenet_apparatus(const SampledCurve& curve, double s, const FrenetOptions& opts) {
  if (curve.size() == 0) throw Error(ErrorKind::insufficient_data, "empty sampled curve");
  if (!finite(s) || s < curve.s.front() || s > curve.s.back()) {
    throw Error(ErrorKind::domain, "arc length " + std::to_string(s) + " outside grid", s);
  }
  if (curve.has_frames()) {
    const auto it = std::lower_bound(curve.s.begin(), curve.s.end(), s);
    for (auto cand : {it, it == curve.s.begin() ? it : it - 1}) {
      if (cand == curve.s.end()) continue;
      if (std::abs(*cand - s) <= 1e-12 * std::max(1.0, std::abs(s))) {
        const auto& f = curve.frames[static_cast<std::size_t>(cand - curve.s.begin())];
        if (f.kappa < opts.kappa_min) {
          throw Error(ErrorKind::curvature_degenerate, "curvature below floor", s);
        }
        return f;
      }
    }
  }
  return frenet_apparatus(CurveSpec::samples(curve.s, curve.positions), s, opts);
}

SampledCurve sample_unit_speed(const CurveSpec& curve, const UniformGrid& grid, double tol,
                               const FrenetOptions& opts) {
  if (curve.is_sampled()) {
    throw Error(ErrorKind::contract, "sample_unit_speed expects an analytic curve");
  }
  SampledCurve out;
  out.s = grid.values();
  out.source_parameter = out.s;
  out.unit_speed = true;
  out.positions.reserve(grid.size());
  out.frames.reserve(grid.size());
  for (double t : out.s) {
    const auto d = analytic_derivatives(curve.shape(), t, 1);
    if (std::abs(d[1].norm() - 1.0) > tol) {
      throw Error(ErrorKind::regularity,
                  "curve is not unit speed (|alpha'|=" + std::to_string(d[1].norm()) +
                      "); use reparametrize_arclength",
                  t);
    }
    out.positions.push_back(d[0]);
    FrenetFrame f = analytic_frame(curve, t, opts);
    f.s = t;
    out.frames.push_back(f);
  }
  difference_second_rates(out.s, out.frames);
  return out;
}

SampledCurve reparametrize_arclength(const CurveSpec& curve, double t0, double t1, std::size_t n,
                                     double tol, const FrenetOptions& opts) {
  if (n < 7) throw Error(ErrorKind::insufficient_data, "reparametrization needs n >= 7");
  if (!(t0 < t1)) throw Error(ErrorKind::domain, "empty parameter interval");
  const auto [lo, hi] = curve.domain();
  if (t0 < lo || t1 > hi) throw Error(ErrorKind::domain, "interval outside curve domain");

  auto speed_at = [&](double t) { return evaluate(curve, t, 1)[1].norm(); };

  std::size_t m = std::max<std::size_t>(8 * (n - 1), 2000);
  if (m % 2 == 1) ++m;
  const double ht = (t1 - t0) / static_cast<double>(m);
  std::vector<double> tv(m + 1);
  std::vector<double> speed(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    tv[j] = j == m ? t1 : t0 + ht * static_cast<double>(j);
    speed[j] = speed_at(tv[j]);
  }
  for (std::size_t j = 0; j <= m; ++j) {
    if (speed[j] <= tol) {
      throw Error(ErrorKind::regularity, "near-zero speed at t=" + std::to_string(tv[j]), tv[j]);
    }
    const bool local_min = j > 0 && j < m && speed[j] <= speed[j - 1] && speed[j] <= speed[j + 1];
    if (local_min) {
      double arg = tv[j];
      const double vmin = golden_min(speed_at, tv[j - 1], tv[j + 1], arg);
      if (vmin <= tol) {
        throw Error(ErrorKind::regularity, "near-zero speed at t=" + std::to_string(arg), arg);
      }
    }
  }

  const auto cumulative = numerics::cumulative_simpson(ht, speed);
  const double length = cumulative.back();
  const numerics::MonotoneCubic inverse(cumulative, tv);

  // Gauss–Legendre (5 nodes) for the partial interval in the Newton polish.
  static constexpr std::array<double, 5> gl_x = {0.0, -0.5384693101056831, 0.5384693101056831,
                                                 -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> gl_w = {0.5688888888888889, 0.4786286704993665,
                                                 0.4786286704993665, 0.2369268850561891,
                                                 0.2369268850561891};
  auto arc_to = [&](double t) {
    auto j = static_cast<std::size_t>(std::floor((t - t0) / ht));
    j = std::min(j, m - 1);
    const double a = tv[j];
    const double half = 0.5 * (t - a);
    double acc = 0.0;
    for (std::size_t k = 0; k < 5; ++k) acc += gl_w[k] * speed_at(a + half * (1.0 + gl_x[k]));
    return cumulative[j] + half * acc;
  };

  const UniformGrid grid(0.0, length, n);
  SampledCurve out;
  out.s = grid.values();
  out.unit_speed = true;
  out.source_parameter.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      out.source_parameter[i] = t0;
      continue;
    }
    if (i + 1 == n) {
      out.source_parameter[i] = t1;
      continue;
    }
    double t = inverse(out.s[i]);
    for (int it = 0; it < 6; ++it) {
      const double f = arc_to(t) - out.s[i];
      t -= f / speed_at(t);
      t = std::clamp(t, t0, t1);
      if (std::abs(f) < 1e-15 * std::max(1.0, length)) break;
    }
    out.source_parameter[i] = t;
  }

  out.positions.resize(n);
  if (curve.is_sampled()) {
    for (std::size_t i = 0; i < n; ++i) out.positions[i] = evaluate(curve, out.source_parameter[i], 3)[0];
    return with_numeric_frames(std::move(out), opts);
  }
  out.frames.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    FrenetFrame f = analytic_frame(curve, out.source_parameter[i], opts);
    out.positions[i] = f.position;
    f.s = out.s[i];
    out.frames[i] = f;
  }
  difference_second_rates(out.s, out.frames);
  return out;
}

double unit_speed_residual(const CurveSpec& curve, const SampledCurve& sampled) {
  if (sampled.source_parameter.size() != sampled.size() || sampled.size() < 7) {
    throw Error(ErrorKind::contract, "unit_speed_residual needs source parameters (n >= 7)");
  }
  const auto dt_ds = numerics::differentiate_high_order(sampled.s, sampled.source_parameter, 1);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < sampled.size(); ++i) {
    const double speed = evaluate(curve, sampled.source_parameter[i], 1)[1].norm();
    worst = std::max(worst, std::abs(speed * dt_ds[i] - 1.0));
  }
  return worst;
}

std::vector<NumericFrame> numeric_frames(std::span<const double> s, std::span<const Vec3> positions,
                                         const FrenetOptions& opts) {
  if (s.size() != positions.size()) throw Error(ErrorKind::alignment, "grid/positions mismatch");
  if (s.size() < 7) {
    throw Error(ErrorKind::insufficient_data, "numeric frames need at least 7 samples");
  }
  const auto d1 = differentiate_vectors(s, positions, 1);
  const auto d2 = differentiate_vectors(s, positions, 2);
  const auto d3 = differentiate_vectors(s, positions, 3);
  const std::size_t n = s.size();
  std::vector<NumericFrame> out(n);
  std::vector<double> kappa(n);
  std::vector<double> tau(n);
  std::vector<double> speed(n);
  for (std::size_t i = 0; i < n; ++i) {
    NumericFrame& nf = out[i];
    nf.frame.s = s[i];
    nf.frame.position = positions[i];
    speed[i] = d1[i].norm();
    nf.speed = speed[i];
    const Vec3 c = d1[i].cross(d2[i]);
    const double cn = c.norm();
    if (!(speed[i] > 1e-300)) {
      nf.degenerate = true;
      nf.frame.T = nf.frame.N = nf.frame.B = Vec3::Constant(kNaN);
      kappa[i] = 0.0;
      tau[i] = 0.0;
      continue;
    }
    nf.frame.T = d1[i] / speed[i];
    kappa[i] = cn / (speed[i] * speed[i] * speed[i]);
    if (!(kappa[i] >= opts.kappa_min) || !(cn > 0.0)) {
      nf.degenerate = true;
      nf.frame.N = nf.frame.B = Vec3::Constant(kNaN);
      tau[i] = 0.0;
    } else {
      nf.frame.B = c / cn;
      nf.frame.N = nf.frame.B.cross(nf.frame.T);
      tau[i] = c.dot(d3[i]) / (cn * cn);
    }
    nf.frame.kappa = kappa[i];
    nf.frame.tau = tau[i];
  }
  auto kp = numerics::differentiate(s, kappa, 1);
  auto tp = numerics::differentiate(s, tau, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double inv = speed[i] > 0.0 ? 1.0 / speed[i] : 0.0;
    kp[i] *= inv;
    tp[i] *= inv;
  }
  auto kpp = numerics::differentiate(s, kp, 1);
  auto tpp = numerics::differentiate(s, tp, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double inv = speed[i] > 0.0 ? 1.0 / speed[i] : 0.0;
    out[i].frame.kappa_prime = kp[i];
    out[i].frame.tau_prime = tp[i];
    out[i].frame.kappa_second = kpp[i] * inv;
    out[i].frame.tau_second = tpp[i] * inv;
  }
  return out;
}

SampledCurve with_numeric_frames(SampledCurve curve, const FrenetOptions& opts) {
  const auto nf = numeric_frames(curve.s, curve.positions, opts);
  curve.frames.clear();
  curve.frames.reserve(nf.size());
  for (const auto& f : nf) {
    if (f.degenerate) {
      throw Error(ErrorKind::curvature_degenerate,
                  "curvature below floor at s=" + std::to_string(f.frame.s), f.frame.s);
    }
    curve.frames.push_back(f.frame);
  }
  return curve;
}

FrenetResiduals frenet_residuals(const SampledCurve& curve) {
  if (!curve.has_frames()) throw Error(ErrorKind::contract, "frenet_residuals needs frames");
  const std::size_t n = curve.size();
  std::vector<Vec3> T(n), N(n), B(n);
  for (std::size_t i = 0; i < n; ++i) {
    T[i] = curve.frames[i].T;
    N[i] = curve.frames[i].N;
    B[i] = curve.frames[i].B;
  }
  const auto dT = differentiate_vectors(curve.s, T, 1);
  const auto dN = differentiate_vectors(curve.s, N, 1);
  const auto dB = differentiate_vectors(curve.s, B, 1);
  FrenetResiduals r;
  r.tangent.resize(n);
  r.normal.resize(n);
  r.binormal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = curve.frames[i];
    r.tangent[i] = (dT[i] - f.kappa * N[i]).norm();
    r.normal[i] = (dN[i] + f.kappa * T[i] - f.tau * B[i]).norm();
    r.binormal[i] = (dB[i] + f.tau * N[i]).norm();
    r.max_tangent = std::max(r.max_tangent, r.tangent[i]);
    r.max_normal = std::max(r.max_normal, r.normal[i]);
    r.max_binormal = std::max(r.max_binormal, r.binormal[i]);
  }
  return r;
}

}  // namespace curvemates
