#include "curvemates/association.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "curvemates/error.hpp"

namespace curvemates {

namespace {

constexpr double kSingular = 1e-12;

double guard(double den, const char* what) {
  if (!(std::abs(den) >= kSingular)) {
    throw Error(ErrorKind::singular_configuration, std::string(what) + " vanishes");
  }
  return den;
}

Vec3 to_world(const FrenetFrame& f, const Vec3& c) { return c[0] * f.T + c[1] * f.N + c[2] * f.B; }

Triad to_world(const FrenetFrame& f, const Triad& t) {
  return {to_world(f, t.T), to_world(f, t.N), to_world(f, t.B)};
}

// Printed N-family frames use the shorthand D = (1 - lambda kappa)^2 + (lambda tau)^2.
double n_family_d(const FrenetFrame& f, double l) {
  const double u = 1.0 - l * f.kappa;
  return u * u + l * l * f.tau * f.tau;
}

}  // namespace

char to_char(OffsetVector v) { return v == OffsetVector::T ? 'T' : v == OffsetVector::N ? 'N' : 'B'; }
char to_char(Plane p) { return p == Plane::O ? 'O' : p == Plane::P ? 'P' : 'R'; }

AssociationSpec AssociationSpec::make(OffsetVector vector, Plane plane, double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q)) throw Error(ErrorKind::spec, "coefficients must be finite");
  if (p == 0.0 && q == 0.0) throw Error(ErrorKind::spec, "coefficient pair is zero");
  if (vector == OffsetVector::T && plane == Plane::O && q == 0.0) {
    throw Error(ErrorKind::spec, "T-O* needs b != 0");
  }
  if (vector == OffsetVector::T && plane == Plane::R && q == 0.0) {
    throw Error(ErrorKind::spec, "T-R* needs f != 0");
  }
  return AssociationSpec{vector, plane, p, q};
}

AssociationSpec AssociationSpec::parse(const std::string& code, double p, double q) {
  if (code.size() != 2) throw Error(ErrorKind::spec, "family code must be two letters, got '" + code + "'");
  const char v = static_cast<char>(std::toupper(static_cast<unsigned char>(code[0])));
  const char pl = static_cast<char>(std::toupper(static_cast<unsigned char>(code[1])));
  OffsetVector vec{};
  Plane plane{};
  switch (v) {
    case 'T': vec = OffsetVector::T; break;
    case 'N': vec = OffsetVector::N; break;
    case 'B': vec = OffsetVector::B; break;
    default: throw Error(ErrorKind::spec, "unknown offset vector in '" + code + "'");
  }
  switch (pl) {
    case 'O': plane = Plane::O; break;
    case 'P': plane = Plane::P; break;
    case 'R': plane = Plane::R; break;
    default: throw Error(ErrorKind::spec, "unknown plane in '" + code + "'");
  }
  return make(vec, plane, p, q);
}

std::string AssociationSpec::code() const { return {to_char(vector), to_char(plane)}; }

std::string AssociationSpec::name() const { return std::string{to_char(vector), '-', to_char(plane), '*'}; }

Vec3 plane_unit_vector(const Triad& m, const AssociationSpec& spec) {
  const double n = std::hypot(spec.p, spec.q);
  if (n == 0.0) throw Error(ErrorKind::spec, "coefficient pair is zero");
  switch (spec.plane) {
    case Plane::O: return (spec.p * m.T + spec.q * m.N) / n;
    case Plane::P: return (spec.p * m.N + spec.q * m.B) / n;
    case Plane::R: return (spec.p * m.T + spec.q * m.B) / n;
  }
  return Vec3::Zero();
}

Vec3 plane_unit_vector(const FrenetFrame& mate, const AssociationSpec& spec) {
  return plane_unit_vector(Triad{mate.T, mate.N, mate.B}, spec);
}

Vec3 plane_normal(const Triad& m, Plane plane) {
  switch (plane) {
    case Plane::O: return m.B;
    case Plane::P: return m.T;
    case Plane::R: return m.N;
  }
  return Vec3::Zero();
}

Vec3 offset_direction(const FrenetFrame& base, OffsetVector v) {
  switch (v) {
    case OffsetVector::T: return base.T;
    case OffsetVector::N: return base.N;
    case OffsetVector::B: return base.B;
  }
  return Vec3::Zero();
}

SampledCurve construct_mate(const SampledCurve& base, OffsetVector v, const LambdaSolution& lambda) {
  if (!base.has_frames()) throw Error(ErrorKind::contract, "base curve needs frames");
  if (lambda.size() != base.size()) {
    throw Error(ErrorKind::alignment, "lambda has " + std::to_string(lambda.size()) +
                                          " samples, base has " + std::to_string(base.size()));
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (std::abs(lambda.s[i] - base.s[i]) > 1e-9 * std::max(1.0, std::abs(base.s[i]))) {
      throw Error(ErrorKind::alignment, "lambda grid differs from base grid", base.s[i]);
    }
  }
  SampledCurve mate;
  mate.s = base.s;
  mate.positions.resize(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    mate.positions[i] = base.positions[i] + lambda.lambda[i] * offset_direction(base.frames[i], v);
  }
  return mate;
}

SampledCurve construct_mate(const SampledCurve& base, const AssociationSpec& spec,
                            const LambdaSolution& lambda, double planarity_tol) {
  if (spec.vector == OffsetVector::T && spec.plane == Plane::O && base.has_frames()) {
    for (const auto& f : base.frames) {
      if (std::abs(f.tau) >= planarity_tol) {
        throw Error(ErrorKind::planarity,
                    "T-O* requires a planar base curve; |tau| = " + std::to_string(std::abs(f.tau)) +
                        " at s=" + std::to_string(f.s),
                    f.s);
      }
    }
  }
  return construct_mate(base, spec.vector, lambda);
}

KLMCoefficients klm(const LambdaJet& j, const FrenetFrame& f) {
  const double u = 1.0 - j.l * f.kappa;
  const double hT = -j.l * f.kappa_prime - 2.0 * j.d1 * f.kappa;
  const double g = u * f.kappa - j.l * f.tau * f.tau + j.d2;
  const double hB = j.l * f.tau_prime + 2.0 * j.d1 * f.tau;
  return {j.d1 * hB - j.l * f.tau * g, j.l * f.tau * hT - u * hB, u * g - j.d1 * hT};
}

KLMCoefficients klm_printed(const LambdaJet& j, const FrenetFrame& f) {
  KLMCoefficients c = klm(j, f);
  const double u = 1.0 - j.l * f.kappa;
  const double hT = -j.l * f.kappa_prime - 2.0 * j.d1 * f.kappa;
  const double hB = j.l * f.tau_prime + 2.0 * j.d1 * f.tau;
  c.L = u * hB + j.l * f.tau * hT;
  return c;
}

XYZCoefficients xyz(const LambdaJet& j, const FrenetFrame& f) {
  const double lt = j.l * f.tau;
  const double X = -lt * (-j.l * f.tau * f.tau + j.d2) -
                   j.d1 * (-j.l * f.tau_prime - 2.0 * j.d1 * f.tau + f.kappa);
  const double Y = j.l * f.tau * f.tau - j.d2 + j.d1 * j.l * f.tau * f.kappa;
  const double Z = -j.l * f.tau_prime - 2.0 * j.d1 * f.tau + f.kappa + lt * lt * f.kappa;
  return {X, Y, Z};
}

MateJet mate_jet(OffsetVector v, const LambdaJet& j, const FrenetFrame& f) {
  const double k = f.kappa, t = f.tau, kp = f.kappa_prime, tp = f.tau_prime;
  const double kpp = f.kappa_second, tpp = f.tau_second;
  const double l = j.l, l1 = j.d1, l2 = j.d2, l3 = j.d3;
  switch (v) {
    case OffsetVector::T:
      return {Vec3(1.0 + l1, l * k, 0.0),
              Vec3(l2 - l * k * k, (1.0 + l1) * k + l1 * k + l * kp, l * k * t),
              Vec3(l3 - 3 * l1 * k * k - 3 * l * k * kp - k * k,
                   -l * k * k * k - l * k * t * t + 3 * l2 * k + 3 * l1 * kp + l * kpp + kp,
                   3 * l1 * k * t + l * k * tp + 2 * l * kp * t + k * t)};
    case OffsetVector::N:
      return {Vec3(1.0 - l * k, l1, l * t),
              Vec3(-l * kp - 2 * l1 * k, (1.0 - l * k) * k - l * t * t + l2, l * tp + 2 * l1 * t),
              Vec3(l * k * k * k + l * k * t * t - 3 * l1 * kp - l * kpp - 3 * l2 * k - k * k,
                   l3 - 3 * l1 * (k * k + t * t) - 3 * l * (k * kp + t * tp) + kp,
                   k * t - l * k * k * t - l * t * t * t + 3 * l1 * tp + l * tpp + 3 * l2 * t)};
    case OffsetVector::B:
      return {Vec3(1.0, -l * t, l1),
              Vec3(l * t * k, -l * tp - 2 * l1 * t + k, -l * t * t + l2),
              Vec3(l * t * kp + 2 * l * tp * k + 3 * l1 * t * k - k * k,
                   l * t * k * k + l * t * t * t - l * tpp - 3 * l2 * t - 3 * l1 * tp + kp,
                   l3 - 3 * l * t * tp - 3 * l1 * t * t + k * t)};
  }
  return {};
}

MateApparatus mate_apparatus(OffsetVector v, const LambdaJet& j, const FrenetFrame& f) {
  const MateJet m = mate_jet(v, j, f);
  const double sp = guard(m.d1.norm(), "|alpha*'|");
  const Vec3 W = m.d1.cross(m.d2);
  const double wn = guard(W.norm(), "|alpha*' x alpha*''|");
  MateApparatus out;
  const Vec3 T = m.d1 / sp;
  const Vec3 B = W / wn;
  out.frame = to_world(f, Triad{T, B.cross(T), B});
  out.kappa = wn / (sp * sp * sp);
  out.tau = W.dot(m.d3) / (wn * wn);
  return out;
}

Triad predicted_frame(const FrenetFrame& f, const AssociationSpec& spec, const LambdaJet& j) {
  if (spec.vector == OffsetVector::T) {
    const double n = std::hypot(spec.p, spec.q);
    const double x = spec.p / n, y = spec.q / n;
    switch (spec.plane) {
      case Plane::O: return {x * f.T + y * f.N, y * f.T - x * f.N, -f.B};
      // T = c N* + d B* holds with this sign of c.
      case Plane::P: return {f.N, x * f.T + y * f.B, y * f.T - x * f.B};
      case Plane::R: return {x * f.T + y * f.N, f.B, y * f.T - x * f.N};
    }
  }
  return mate_apparatus(spec.vector, j, f).frame;
}

Triad printed_frame(const FrenetFrame& f, const AssociationSpec& spec, const LambdaJet& j) {
  if (spec.vector == OffsetVector::T) {
    if (spec.plane == Plane::P) {
      const double n = std::hypot(spec.p, spec.q);
      const double x = spec.p / n, y = spec.q / n;
      return {f.N, -x * f.T + y * f.B, y * f.T + x * f.B};
    }
    return predicted_frame(f, spec, j);
  }
  const double k = f.kappa, t = f.tau, kp = f.kappa_prime, tp = f.tau_prime;
  const double l = j.l, l1 = j.d1;
  const double n = std::hypot(spec.p, spec.q);
  const double x = spec.p, y = spec.q;
  Triad c;  // base-frame components
  if (spec.vector == OffsetVector::N) {
    const KLMCoefficients w = klm_printed(j, f);
    const double sd = std::sqrt(n_family_d(f, l));
    const double u = 1.0 - l * k;
    switch (spec.plane) {
      case Plane::O: {
        const double Q = w.M * (l * k - 1.0) - w.K * l * t;
        c.T = Vec3(u * y / sd, x, l * t * y / sd) / n;
        c.N = y / n * Vec3(-w.M / Q, 1.0, w.K / Q);
        c.B = y * Vec3(w.K, 0.0, w.M) / (x * Q);
        break;
      }
      case Plane::P: {
        const double den = l * t * kp - k * tp * l + tp;
        const double g = l * t * t + k * k * l - k;
        c.T = Vec3(u, 0.0, l * t) / sd;
        c.N = Vec3(y * l * t / sd, x, -y * u / sd) / n;
        c.B = y / n * Vec3(-t * g / den, 1.0, (l * k - 1.0) * g / (l * (-l * t * kp + k * tp * l - tp)));
        break;
      }
      case Plane::R: {
        // The printed denominator carries (lambda kappa - 1) in its first term.
        const double hT = -l * kp - 2 * l1 * k;
        const double hB = l * tp + 2 * l1 * t;
        const double Lq = (l * k - 1.0) * hB + l * t * hT;
        c.T = Vec3(u * y / sd, x, l * t * y / sd) / n;
        c.N = x * y / n * Vec3(l * t / l1 - w.M / Lq, 0.0, w.K / Lq + (l * k - 1.0) / l1);
        c.B = y / n * Vec3(w.K / Lq, 1.0, w.M / Lq);
        break;
      }
    }
  } else {
    const XYZCoefficients w = xyz(j, f);
    const double se = std::sqrt(1.0 + l * l * t * t);
    switch (spec.plane) {
      case Plane::O: {
        const double Q = l * t * w.X + w.Y;
        c.T = Vec3(y / se, -l * t * y / se, x) / n;
        c.N = y / n * Vec3(-l1 * w.Y / (x * Q), l * w.X / Q, 1.0);
        c.B = -(y * l1 / (x * Q)) * Vec3(w.X, w.Y, 0.0);
        break;
      }
      case Plane::P: {
        const double G = -l * tp + k + l * l * t * t;
        c.T = Vec3(1.0, -l * t, 0.0) / se;
        c.N = Vec3(y * l * t / se, -y * (l * l * l * t * t * t - G) / (G * se), x) / n;
        c.B = Vec3(-x * l * t / se, -x / se, y) / n;
        break;
      }
      case Plane::R: {
        c.T = Vec3(y / se, -l * t * y / se, x) / n;
        c.N = x * y / n * Vec3((w.Y * l1 + w.Z * l * t) / (w.Z * l1), (-w.X * l + w.Z) / (w.Z * l1), 0.0);
        c.B = y / n * Vec3(w.X / w.Z, w.Y / w.Z, 1.0);
        break;
      }
    }
  }
  return to_world(f, c);
}

std::pair<double, double> predicted_curvatures(const AssociationSpec& spec, const FrenetFrame& f,
                                               const LambdaJet& j) {
  const double k = f.kappa, t = f.tau, kp = f.kappa_prime, tp = f.tau_prime;
  const double kpp = f.kappa_second, tpp = f.tau_second;
  const double l = j.l, l1 = j.d1, l2 = j.d2, l3 = j.d3;
  const double p = spec.p, q = spec.q;
  const double pq2 = p * p + q * q;
  switch (spec.vector) {
    case OffsetVector::T:
      switch (spec.plane) {
        case Plane::O:
          return {q / guard(l * std::sqrt(pq2), "lambda sqrt(a^2+b^2)"), 0.0};
        case Plane::P: {
          const double den = guard(l * k, "lambda kappa");
          return {std::sqrt(k * k + t * t) / den, (k * tp - kp * t) / (den * (k * k + t * t))};
        }
        case Plane::R: {
          const double e = p, ff = q;
          const double kap = t * ff * ff / guard(l * k * pq2, "lambda kappa (e^2+f^2)");
          const double num = ff * (k * k * t * e * e * e + k * k * t * e * ff * ff + t * t * t * e * ff * ff +
                                   k * tp * e * e * ff + k * tp * ff * ff * ff - kp * t * e * e * ff -
                                   kp * t * ff * ff * ff);
          const double den = l * k *
                             (t * t * e * e * ff * ff + t * t * ff * ff * ff * ff + k * k * e * e * e * e +
                              2 * k * k * e * e * ff * ff + k * k * ff * ff * ff * ff);
          return {kap, num / guard(den, "tau* denominator")};
        }
      }
      break;
    case OffsetVector::N: {
      switch (spec.plane) {
        case Plane::O: {
          const KLMCoefficients w = klm_printed(j, f);
          const double Q = w.M * (l * k - 1.0) - w.K * l * t;
          const double kap = std::pow(p, 4) * Q / guard(q * pq2 * std::pow(l1, 4), "b (a^2+b^2) lambda'^4");
          const double bracket =
              w.K * (l * k * k * k + l * k * t * t - 3 * l1 * kp - l * kpp - 3 * l2 * k - k * k) +
              w.M * (k * t - l * k * k * t - l * t * t * t + 3 * l1 * tp + l * tpp + 3 * l2 * t);
          return {kap, q * l1 / guard(p * Q, "a (M(lambda kappa-1) - K lambda tau)") * bracket};
        }
        case Plane::P: {
          const LambdaJet j0{l, 0.0, l2, l3};
          const KLMCoefficients w = klm_printed(j0, f);
          const double Q = w.M * (l * k - 1.0) - w.K * l * t;
          const double kap = w.L * p * p * p * std::sqrt(pq2) / guard(std::pow(q, 4) * Q * Q * Q, "d^4 (m(lambda kappa-1) - k lambda tau)^3");
          const double bracket = w.K * (k * k * k * l + k * t * t * l - l * kpp - k * k) +
                                 w.L * (-3 * l * t * tp - 3 * l * kp * k + kp) +
                                 w.M * (-k * k * t * l - t * t * t * l + l * tpp + k * t);
          return {kap, w.L * w.L * pq2 / guard(q * q, "d^2") * bracket};
        }
        case Plane::R: {
          const KLMCoefficients w = klm_printed(j, f);
          const double e = p, ff = q;
          const double kap = e * e * e * w.L / guard(ff * pq2 * l1 * l1 * l1, "f (e^2+f^2) lambda'^3");
          const double bracket =
              w.K * (l * k * k * k + l * k * t * t - l * kpp - k * k - 3 * l2 * k - 3 * l1 * kp) +
              w.L * (-3 * l * k * kp - 3 * l * t * tp - 3 * k * k * l1 - 3 * l1 * t * t + l3 + kp) +
              w.M * (-l * k * k * t - l * t * t * t + l * tpp + k * t + 3 * l2 * t + 3 * l1 * tp);
          return {kap, w.L * w.L * pq2 / guard(ff * ff, "f^2") * bracket};
        }
      }
      break;
    }
    case OffsetVector::B: {
      const XYZCoefficients w = xyz(j, f);
      switch (spec.plane) {
        case Plane::O: {
          const double Q = w.X * l * t + w.Y;
          const double kap = -std::pow(p, 4) * Q / guard(l1 * l1 * q * pq2 * std::sqrt(pq2), "lambda'^2 b (a^2+b^2)^(3/2)");
          const double bracket = w.X * (l * t * kp + 3 * l1 * t * k + 2 * l * tp * k - k * k) +
                                 w.Y * (l * t * t * t + l * t * k * k - l * tpp - 3 * l1 * tp - 3 * l2 * t + kp);
          return {kap, q * q * l1 * l1 / guard(p * p * Q * Q, "a^2 (X lambda tau + Y)^2") * bracket};
        }
        case Plane::P: {
          const double c = p, d = q;
          const double G = -l * tp + k + l * l * t * t;
          const double h = l * t * t * (1.0 + l * l * t * t);
          const double kap = -d * d * std::sqrt(pq2) * h * h * h / guard(c * c * c * G * G, "c^3 (-lambda tau' + kappa + lambda^2 tau^2)^2");
          const double num = d * d *
                             (l * l * t * t * t * (l * t * kp + 2 * tp * k * l - k * k) +
                              l * t * t * (l * t * k * k + l * t * t * t - tpp * l + kp) +
                              G * (-3 * tp * t * l + k * t));
          return {kap, num / guard(pq2 * G * G, "(c^2+d^2) (-lambda tau' + kappa + lambda^2 tau^2)^2")};
        }
        case Plane::R: {
          const double e = p, ff = q;
          const double kap = w.Z * e * e * e / guard(ff * pq2 * l1 * l1 * l1, "f (e^2+f^2) lambda'^3");
          const double bracket = w.X * (l * t * kp + 2 * l * tp * k + 3 * l1 * t * k - k * k) +
                                 w.Y * (l * t * k * k + l * t * t * t - l * tpp - 3 * l2 * t - 3 * l1 * tp + kp) +
                                 w.Z * (-3 * l * t * tp - 3 * l1 * t * t + k * t + l3);
          return {kap, ff * ff / guard(w.Z * w.Z * pq2, "Z^2 (e^2+f^2)") * bracket};
        }
      }
      break;
    }
  }
  return {0.0, 0.0};
}

std::string to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::involute: return "involute";
    case SpecialCase::bertrand_like: return "bertrand-like";
    case SpecialCase::mannheim_like: return "mannheim-like";
    case SpecialCase::generic: return "generic";
  }
  return "generic";
}

SpecialCase classify_special_case(const AssociationSpec& spec, const LambdaSolution& lambda) {
  auto is_constant = [&] {
    if (lambda.lambda.empty()) return false;
    const double l0 = lambda.lambda.front();
    return std::all_of(lambda.lambda.begin(), lambda.lambda.end(), [&](double v) {
      return std::abs(v - l0) <= 1e-12 * std::max(1.0, std::abs(l0));
    });
  };
  if (spec.vector == OffsetVector::T && spec.plane == Plane::P) return SpecialCase::involute;
  if (spec.vector == OffsetVector::N) {
    if (spec.plane == Plane::O && spec.p == 0.0) return SpecialCase::bertrand_like;
    if (spec.plane == Plane::P && is_constant()) return SpecialCase::bertrand_like;
  }
  if (spec.vector == OffsetVector::B && spec.plane == Plane::O && spec.p == 0.0) {
    return SpecialCase::mannheim_like;
  }
  return SpecialCase::generic;
}

}  // namespace curvemates
