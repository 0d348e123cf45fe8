#include "curvemates/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvemates/association.hpp"
#include "curvemates/error.hpp"
#include "curvemates/numerics.hpp"

namespace curvemates {

namespace {

FrenetFrame frame_of(const CurvatureProfile::Sample& k) {
  FrenetFrame f;
  f.kappa = k.kappa;
  f.tau = k.tau;
  f.kappa_prime = k.kappa_prime;
  f.tau_prime = k.tau_prime;
  f.kappa_second = k.kappa_second;
  f.tau_second = k.tau_second;
  return f;
}

LambdaSolution make_solution(const UniformGrid& grid, Provenance prov, std::string method) {
  LambdaSolution sol;
  sol.s = grid.values();
  sol.lambda.resize(grid.size());
  sol.lambda_prime.resize(grid.size());
  sol.lambda_double_prime.resize(grid.size());
  sol.provenance = prov;
  sol.method = std::move(method);
  return sol;
}

void require_tau(const CurvatureProfile::Sample& k, double floor, double s) {
  if (!(std::abs(k.tau) > floor)) {
    throw Error(ErrorKind::torsion_degenerate,
                "|tau| = " + std::to_string(std::abs(k.tau)) + " below floor at s=" + std::to_string(s), s);
  }
}

// d/ds of the Riccati right-hand side along a trajectory.
double riccati_second(const CurvatureProfile::Sample& k, double l, double l1) {
  const double P = 0.5 * k.tau * k.kappa;
  const double dP = 0.5 * (k.tau_prime * k.kappa + k.tau * k.kappa_prime);
  const double Q = -k.tau_prime / (2.0 * k.tau);
  const double dQ = -(k.tau_second * k.tau - k.tau_prime * k.tau_prime) / (2.0 * k.tau * k.tau);
  const double dR = (k.kappa_prime * k.tau - k.kappa * k.tau_prime) / (2.0 * k.tau * k.tau);
  return dP * l * l + dQ * l + dR + (2.0 * P * l + Q) * l1;
}

bool second_order(ConstraintFamily f) {
  return f == ConstraintFamily::normal_rectifying_third || f == ConstraintFamily::binormal_rectifying_third;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed-form";
    case Provenance::integrating_factor: return "integrating-factor";
    case Provenance::rk4: return "rk4";
    case Provenance::constant: return "constant";
  }
  return "closed-form";
}

Provenance provenance_from_string(const std::string& name) {
  for (auto p : {Provenance::closed_form, Provenance::integrating_factor, Provenance::rk4, Provenance::constant}) {
    if (to_string(p) == name) return p;
  }
  throw Error(ErrorKind::parse, "unknown provenance '" + name + "'");
}

std::vector<double> lambda_triple(const LambdaSolution& sol) {
  return numerics::differentiate(sol.s, sol.lambda_double_prime, 1);
}

double lambda_consistency(const LambdaSolution& sol) {
  const auto d = numerics::differentiate(sol.s, sol.lambda, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) worst = std::max(worst, std::abs(d[i] - sol.lambda_prime[i]));
  return worst;
}

CurvatureProfile CurvatureProfile::constant(double kappa, double tau) {
  Sample k;
  k.kappa = kappa;
  k.tau = tau;
  return CurvatureProfile([k](double) { return k; }, true);
}

CurvatureProfile CurvatureProfile::from_curve(const CurveSpec& curve) {
  if (curve.is_sampled()) throw Error(ErrorKind::contract, "from_curve expects an analytic curve");
  for (double t : {0.0, 0.37, 1.1, 2.9}) {
    const double sp = evaluate(curve, t, 1)[1].norm();
    if (std::abs(sp - 1.0) > 1e-9) {
      throw Error(ErrorKind::regularity, "curve is not unit speed; reparametrize it first", t);
    }
  }
  return CurvatureProfile(
      [curve](double s) {
        const FrenetFrame f = frenet_apparatus(curve, s);
        return Sample{f.kappa, f.tau, f.kappa_prime, f.tau_prime, f.kappa_second, f.tau_second};
      },
      false);
}

CurvatureProfile CurvatureProfile::from_frames(const SampledCurve& curve) {
  if (!curve.has_frames() || curve.size() < 2) throw Error(ErrorKind::contract, "profile needs framed samples");
  const std::size_t n = curve.size();
  std::vector<double> k(n), t(n), kp(n), tp(n), kpp(n), tpp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = curve.frames[i];
    k[i] = f.kappa;
    t[i] = f.tau;
    kp[i] = f.kappa_prime;
    tp[i] = f.tau_prime;
    kpp[i] = f.kappa_second;
    tpp[i] = f.tau_second;
  }
  const numerics::CubicHermite hk(curve.s, k, kp), ht(curve.s, t, tp);
  const numerics::CubicHermite hkp(curve.s, kp, kpp), htp(curve.s, tp, tpp);
  const std::vector<double> grid = curve.s;
  auto linear = [grid](const std::vector<double>& v, double s) {
    const auto it = std::upper_bound(grid.begin(), grid.end(), s);
    std::size_t i = static_cast<std::size_t>(std::distance(grid.begin(), it));
    i = std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, grid.size() - 2);
    const double w = (s - grid[i]) / (grid[i + 1] - grid[i]);
    return (1.0 - w) * v[i] + w * v[i + 1];
  };
  return CurvatureProfile(
      [=](double s) { return Sample{hk(s), ht(s), hkp(s), htp(s), linear(kpp, s), linear(tpp, s)}; }, false);
}

std::vector<double> integrating_factor(const UniformGrid& grid, std::span<const double> g,
                                       std::span<const double> r, double y0) {
  const std::size_t n = grid.size();
  if (g.size() != n || r.size() != n) throw Error(ErrorKind::alignment, "coefficient samples do not match grid");
  const double h = grid.spacing();
  const auto G = numerics::cumulative_simpson(h, g);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(G[i]) < 700.0)) {
      throw Error(ErrorKind::range,
                  "integrating factor exponent " + std::to_string(G[i]) + " overflows; split the domain",
                  grid.at(i));
    }
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = r[i] * std::exp(-G[i]);
  const auto F = numerics::cumulative_simpson(h, w);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(G[i]) * (y0 + F[i]);
  return y;
}

LambdaSolution solve_linear(const CurvatureProfile& kappa, double ratio, double c1, const UniformGrid& grid) {
  if (!std::isfinite(ratio)) throw Error(ErrorKind::spec, "ratio must be finite (b != 0, f != 0)");
  auto sol = make_solution(grid, Provenance::integrating_factor, "linear");
  const std::size_t n = grid.size();
  std::vector<CurvatureProfile::Sample> ks(n);
  std::vector<double> g(n), r(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) {
    ks[i] = kappa(sol.s[i]);
    g[i] = ratio * ks[i].kappa;
  }
  sol.lambda = integrating_factor(grid, g, r, c1);
  for (std::size_t i = 0; i < n; ++i) {
    sol.lambda_prime[i] = ratio * ks[i].kappa * sol.lambda[i] - 1.0;
    sol.lambda_double_prime[i] = ratio * (ks[i].kappa_prime * sol.lambda[i] + ks[i].kappa * sol.lambda_prime[i]);
  }
  sol.constants = {{"c1", c1}, {"ratio", ratio}};
  return sol;
}

double linear_c1_from_c0(double kappa0, double ratio, double c0, double s_min) {
  const double rk = ratio * kappa0;
  if (!(std::abs(rk) > 0.0)) throw Error(ErrorKind::spec, "ratio * kappa must be nonzero");
  return 1.0 / rk + c0 * std::exp(rk * s_min);
}

LambdaSolution lambda_involute(double c0, const UniformGrid& grid) {
  auto sol = make_solution(grid, Provenance::closed_form, "involute");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sol.lambda[i] = -sol.s[i] + c0;
    sol.lambda_prime[i] = -1.0;
    sol.lambda_double_prime[i] = 0.0;
  }
  sol.constants = {{"c0", c0}};
  return sol;
}

LambdaSolution lambda_helix_hyperbolic(double a, double b, double kappa, double tau, double c1, double c2,
                                       const UniformGrid& grid, HyperbolicVariant variant) {
  if (b == 0.0) throw Error(ErrorKind::spec, "b must be nonzero");
  const double k2 = kappa * kappa + tau * tau;
  if (!(k2 > 0.0)) throw Error(ErrorKind::spec, "kappa^2 + tau^2 must be positive");
  const double w = (a / b) * std::sqrt(k2);
  const double particular = kappa / k2;
  auto sol = make_solution(grid, Provenance::closed_form,
                           variant == HyperbolicVariant::printed ? "helix-hyperbolic" : "helix-trigonometric");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = w * sol.s[i];
    if (variant == HyperbolicVariant::printed) {
      sol.lambda[i] = c1 * std::sinh(x) + c2 * std::cosh(x) + particular;
      sol.lambda_prime[i] = w * (c1 * std::cosh(x) + c2 * std::sinh(x));
      sol.lambda_double_prime[i] = w * w * (sol.lambda[i] - particular);
    } else {
      sol.lambda[i] = c1 * std::sin(x) + c2 * std::cos(x) + particular;
      sol.lambda_prime[i] = w * (c1 * std::cos(x) - c2 * std::sin(x));
      sol.lambda_double_prime[i] = -w * w * (sol.lambda[i] - particular);
    }
  }
  sol.constants = {{"a", a}, {"b", b}, {"c1", c1}, {"c2", c2}};
  return sol;
}

double hyperbolic_residual(const LambdaSolution& sol, double a, double b, double kappa, double tau,
                           HyperbolicVariant variant) {
  const double sign = variant == HyperbolicVariant::printed ? 1.0 : -1.0;
  const double r2 = (a / b) * (a / b);
  const auto d2 = numerics::differentiate_high_order(sol.s, sol.lambda, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double l = sol.lambda[i];
    const double rhs = sign * r2 * ((l * kappa - 1.0) * kappa + l * tau * tau);
    worst = std::max(worst, std::abs(d2[i] - rhs));
  }
  return worst;
}

LambdaSolution lambda_half_curvature(double kappa, const UniformGrid& grid) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::spec, "curvature must be positive");
  auto sol = lambda_constant(1.0 / (2.0 * kappa), grid);
  sol.method = "half-curvature";
  return sol;
}

LambdaSolution lambda_binormal_exponential(double a, double b, double tau, double c1, double c2,
                                           const UniformGrid& grid) {
  if (b == 0.0) throw Error(ErrorKind::spec, "b must be nonzero");
  const double w = (a / b) * tau;
  auto sol = make_solution(grid, Provenance::closed_form, "binormal-exponential");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ep = c1 * std::exp(w * sol.s[i]);
    const double em = c2 * std::exp(-w * sol.s[i]);
    sol.lambda[i] = ep + em;
    sol.lambda_prime[i] = w * (ep - em);
    sol.lambda_double_prime[i] = w * w * (ep + em);
  }
  sol.constants = {{"a", a}, {"b", b}, {"c1", c1}, {"c2", c2}};
  return sol;
}

LambdaSolution lambda_constant(double c, const UniformGrid& grid) {
  auto sol = make_solution(grid, Provenance::constant, "constant");
  std::fill(sol.lambda.begin(), sol.lambda.end(), c);
  sol.constants = {{"c0", c}};
  return sol;
}

double riccati_rhs(const CurvatureProfile::Sample& k, double l) {
  return 0.5 * k.tau * k.kappa * l * l - k.tau_prime / (2.0 * k.tau) * l + k.kappa / (2.0 * k.tau);
}

LambdaSolution solve_riccati(const CurvatureProfile& profile, double lambda0, const UniformGrid& grid,
                             const RiccatiOptions& opts) {
  auto sol = make_solution(grid, Provenance::rk4, "riccati");
  auto f = [&](double s, const std::array<double, 1>& y) {
    const auto k = profile(s);
    require_tau(k, opts.tau_floor, s);
    return std::array<double, 1>{riccati_rhs(k, y[0])};
  };
  auto check = [&](double s, const std::array<double, 1>& y) {
    if (!std::isfinite(y[0]) || std::abs(y[0]) > opts.cap) {
      throw Error(ErrorKind::finite_escape, "lambda exceeds cap near s=" + std::to_string(s), s);
    }
  };
  const auto ys = rk4<1>(sol.s, {lambda0}, f, check);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = profile(sol.s[i]);
    sol.lambda[i] = ys[i][0];
    sol.lambda_prime[i] = riccati_rhs(k, sol.lambda[i]);
    sol.lambda_double_prime[i] = riccati_second(k, sol.lambda[i], sol.lambda_prime[i]);
  }
  sol.constants = {{"lambda0", lambda0}};
  return sol;
}

LambdaSolution riccati_linearize(const LambdaSolution& particular, const CurvatureProfile& profile, double mu0,
                                 const UniformGrid& grid, const RiccatiOptions& opts) {
  if (!grid.matches(particular.s, 1e-9 * std::max(1.0, grid.s_max()))) {
    throw Error(ErrorKind::alignment, "particular solution grid differs from grid");
  }
  if (!std::isfinite(mu0)) {
    throw Error(ErrorKind::spec, "1/mu = 0 reproduces the particular solution; degenerate input");
  }
  if (mu0 == 0.0) throw Error(ErrorKind::pole, "mu(s_min) = 0 places a pole at the start", grid.s_min());
  EquationSpec eq;
  eq.equation = DefiningEquation::riccati;
  if (substitution_residual(particular, profile, eq) > 1e-6) {
    throw Error(ErrorKind::contract, "particular solution does not satisfy the Riccati equation");
  }
  const std::size_t n = grid.size();
  std::vector<CurvatureProfile::Sample> ks(n);
  std::vector<double> g(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    ks[i] = profile(particular.s[i]);
    require_tau(ks[i], opts.tau_floor, particular.s[i]);
    const double P = 0.5 * ks[i].tau * ks[i].kappa;
    const double Q = -ks[i].tau_prime / (2.0 * ks[i].tau);
    g[i] = -(2.0 * P * particular.lambda[i] + Q);
    r[i] = -P;
  }
  const auto mu = integrating_factor(grid, g, r, mu0);
  auto sol = make_solution(grid, Provenance::integrating_factor, "riccati-linearized");
  for (std::size_t i = 0; i < n; ++i) {
    if (mu[i] == 0.0 || (i > 0 && std::signbit(mu[i]) != std::signbit(mu[i - 1]))) {
      throw Error(ErrorKind::pole, "mu crosses zero near s=" + std::to_string(sol.s[i]), sol.s[i]);
    }
    sol.lambda[i] = particular.lambda[i] + 1.0 / mu[i];
    if (std::abs(sol.lambda[i]) > opts.cap) {
      throw Error(ErrorKind::finite_escape, "lambda exceeds cap near s=" + std::to_string(sol.s[i]), sol.s[i]);
    }
    sol.lambda_prime[i] = riccati_rhs(ks[i], sol.lambda[i]);
    sol.lambda_double_prime[i] = riccati_second(ks[i], sol.lambda[i], sol.lambda_prime[i]);
  }
  sol.constants = {{"mu0", mu0}};
  return sol;
}

std::string to_string(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::normal_osculating_third: return "NO-third";
    case ConstraintFamily::normal_rectifying_third: return "NR-third";
    case ConstraintFamily::binormal_rectifying_third: return "BR-third";
    case ConstraintFamily::normal_first: return "N-first";
    case ConstraintFamily::binormal_first: return "B-first";
  }
  return "NO-third";
}

ConstraintFamily constraint_family_from_string(const std::string& name) {
  for (auto f : {ConstraintFamily::normal_osculating_third, ConstraintFamily::normal_rectifying_third,
                 ConstraintFamily::binormal_rectifying_third, ConstraintFamily::normal_first,
                 ConstraintFamily::binormal_first}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorKind::spec, "unknown constraint family '" + name + "'");
}

double constraint_value(ConstraintFamily family, const CurvatureProfile::Sample& k, double l, double d1,
                        double d2, const ConstraintOptions& opts) {
  const FrenetFrame f = frame_of(k);
  const LambdaJet j{l, d1, d2, 0.0};
  const bool printed = opts.variant == ConstraintVariant::printed;
  switch (family) {
    case ConstraintFamily::normal_osculating_third:
      return printed ? klm_printed(j, f).L : klm(j, f).L;
    case ConstraintFamily::normal_rectifying_third: {
      const auto w = klm(j, f);
      const double u = 1.0 - l * k.kappa;
      return (printed ? -u : u) * w.M - w.K * l * k.tau;
    }
    case ConstraintFamily::binormal_rectifying_third: {
      const auto w = xyz(j, f);
      return -w.X * l * k.tau - w.Y;
    }
    case ConstraintFamily::normal_first: {
      const double u = 1.0 - l * k.kappa;
      return d1 / std::sqrt(u * u + d1 * d1 + l * l * k.tau * k.tau) - opts.p / std::hypot(opts.p, opts.q);
    }
    case ConstraintFamily::binormal_first:
      return d1 / std::sqrt(1.0 + l * l * k.tau * k.tau + d1 * d1) - opts.p / std::hypot(opts.p, opts.q);
  }
  return 0.0;
}

LambdaSolution solve_constraint_second_order(ConstraintFamily family, const CurvatureProfile& profile,
                                             double lambda0, double lambda0_prime, const UniformGrid& grid,
                                             const ConstraintOptions& opts) {
  auto sol = make_solution(grid, Provenance::rk4, "constraint:" + to_string(family));
  auto escape = [&](double s, double l) {
    if (!std::isfinite(l) || std::abs(l) > opts.cap) {
      throw Error(ErrorKind::finite_escape, "lambda exceeds cap near s=" + std::to_string(s), s);
    }
  };
  if (second_order(family)) {
    // lambda'' = -C(0) / (C(1) - C(0)).
    auto accel = [&](double s, double l, double l1) {
      const auto k = profile(s);
      const double c0 = constraint_value(family, k, l, l1, 0.0, opts);
      const double c1 = constraint_value(family, k, l, l1, 1.0, opts) - c0;
      if (!(std::abs(c1) > opts.singular_tol)) {
        throw Error(ErrorKind::singular_ode,
                    "lambda'' coefficient vanishes near s=" + std::to_string(s), s);
      }
      return -c0 / c1;
    };
    auto f = [&](double s, const std::array<double, 2>& y) {
      return std::array<double, 2>{y[1], accel(s, y[0], y[1])};
    };
    auto check = [&](double s, const std::array<double, 2>& y) { escape(s, y[0]); };
    const auto ys = rk4<2>(sol.s, {lambda0, lambda0_prime}, f, check);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sol.lambda[i] = ys[i][0];
      sol.lambda_prime[i] = ys[i][1];
      sol.lambda_double_prime[i] = accel(sol.s[i], ys[i][0], ys[i][1]);
    }
    sol.constants = {{"lambda0", lambda0}, {"lambda0_prime", lambda0_prime}};
    return sol;
  }

  auto slope = [&](double s, double l) {
    const auto k = profile(s);
    if (family == ConstraintFamily::normal_first || family == ConstraintFamily::binormal_first) {
      if (opts.q == 0.0) throw Error(ErrorKind::spec, "first relation needs a nonzero second coefficient");
      const double r = opts.p / std::abs(opts.q);
      if (family == ConstraintFamily::normal_first) {
        const double u = 1.0 - l * k.kappa;
        return r * std::sqrt(u * u + l * l * k.tau * k.tau);
      }
      return r * std::sqrt(1.0 + l * l * k.tau * k.tau);
    }
    // L is affine in lambda' and free of lambda''.
    const double c0 = constraint_value(family, k, l, 0.0, 0.0, opts);
    const double c1 = constraint_value(family, k, l, 1.0, 0.0, opts) - c0;
    if (!(std::abs(c1) > opts.singular_tol)) {
      throw Error(ErrorKind::singular_ode, "lambda' coefficient vanishes near s=" + std::to_string(s), s);
    }
    return -c0 / c1;
  };
  auto f = [&](double s, const std::array<double, 1>& y) { return std::array<double, 1>{slope(s, y[0])}; };
  auto check = [&](double s, const std::array<double, 1>& y) { escape(s, y[0]); };
  const auto ys = rk4<1>(sol.s, {lambda0}, f, check);
  const double delta = 1e-5 * std::max(1.0, grid.s_max() - grid.s_min());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = sol.s[i];
    const double l = ys[i][0];
    const double l1 = slope(s, l);
    sol.lambda[i] = l;
    sol.lambda_prime[i] = l1;
    sol.lambda_double_prime[i] =
        (slope(s + delta, l + delta * l1) - slope(s - delta, l - delta * l1)) / (2.0 * delta);
  }
  sol.constants = {{"lambda0", lambda0}};
  return sol;
}

double substitution_residual(const LambdaSolution& sol, const CurvatureProfile& profile, const EquationSpec& eq) {
  const auto d1 = numerics::differentiate_high_order(sol.s, sol.lambda, 1);
  const auto d2 = numerics::differentiate_high_order(sol.s, sol.lambda, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const auto k = profile(sol.s[i]);
    const double l = sol.lambda[i];
    double r = 0.0;
    switch (eq.equation) {
      case DefiningEquation::linear: r = 1.0 + d1[i] - eq.ratio * k.kappa * l; break;
      case DefiningEquation::involute: r = 1.0 + d1[i]; break;
      case DefiningEquation::constant: r = d1[i]; break;
      case DefiningEquation::riccati:
        r = -l * k.tau_prime - 2.0 * d1[i] * k.tau + k.kappa + l * l * k.tau * k.tau * k.kappa;
        break;
      case DefiningEquation::helix_hyperbolic: {
        const double r2 = (eq.a / eq.b) * (eq.a / eq.b);
        r = d2[i] - r2 * ((l * k.kappa - 1.0) * k.kappa + l * k.tau * k.tau);
        break;
      }
      case DefiningEquation::binormal_exponential: {
        const double r2 = (eq.a / eq.b) * (eq.a / eq.b);
        r = d2[i] - r2 * k.tau * k.tau * l;
        break;
      }
      case DefiningEquation::constraint:
        r = constraint_value(eq.family, k, l, d1[i], d2[i], eq.constraint);
        break;
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace curvemates
