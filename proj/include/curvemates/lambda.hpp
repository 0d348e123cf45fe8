#pragma once

// Offset functions lambda(s): closed forms, integrating-factor quadrature and
// RK4 integration of the Riccati and constraint ODEs.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "curvemates/curve.hpp"
#include "curvemates/grid.hpp"

namespace curvemates {

enum class Provenance { closed_form, integrating_factor, rk4, constant };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& name);

struct LambdaSolution {
  std::vector<double> s;
  std::vector<double> lambda;
  std::vector<double> lambda_prime;
  std::vector<double> lambda_double_prime;
  Provenance provenance = Provenance::closed_form;
  std::map<std::string, double> constants;
  /// Free-form tag naming the equation the solution satisfies.
  std::string method;

  std::size_t size() const noexcept { return s.size(); }
};

/// lambda''' by O(h^2) differencing of the lambda'' samples.
std::vector<double> lambda_triple(const LambdaSolution& sol);

/// Largest |lambda'_stored - D lambda| with D the O(h^2) difference operator.
double lambda_consistency(const LambdaSolution& sol);

/// Curvature, torsion and their arc-length derivatives as functions of s.
class CurvatureProfile {
 public:
  struct Sample {
    double kappa = 0.0;
    double tau = 0.0;
    double kappa_prime = 0.0;
    double tau_prime = 0.0;
    double kappa_second = 0.0;
    double tau_second = 0.0;
  };

  static CurvatureProfile constant(double kappa, double tau);
  /// Exact values from a curve that is unit speed in its own parameter.
  static CurvatureProfile from_curve(const CurveSpec& curve);
  /// Cubic Hermite interpolation of framed samples (values with their slopes).
  static CurvatureProfile from_frames(const SampledCurve& curve);

  Sample operator()(double s) const { return fn_(s); }
  bool is_constant() const noexcept { return constant_; }

 private:
  CurvatureProfile(std::function<Sample(double)> fn, bool constant)
      : fn_(std::move(fn)), constant_(constant) {}
  std::function<Sample(double)> fn_;
  bool constant_ = false;
};

/// Classical RK4 over the nodes of `s`; `f(s, y)` returns dy/ds. `check`
/// may throw to stop integration (blow-up guards).
template <std::size_t N, class F, class Check>
std::vector<std::array<double, N>> rk4(std::span<const double> s, std::array<double, N> y0, F&& f,
                                       Check&& check) {
  std::vector<std::array<double, N>> out(s.size());
  out[0] = y0;
  check(s[0], y0);
  auto axpy = [](const std::array<double, N>& y, double h, const std::array<double, N>& k) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h * k[i];
    return r;
  };
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double h = s[i + 1] - s[i];
    const auto& y = out[i];
    const auto k1 = f(s[i], y);
    const auto k2 = f(s[i] + 0.5 * h, axpy(y, 0.5 * h, k1));
    const auto k3 = f(s[i] + 0.5 * h, axpy(y, 0.5 * h, k2));
    const auto k4 = f(s[i + 1], axpy(y, h, k3));
    std::array<double, N> next{};
    for (std::size_t j = 0; j < N; ++j) next[j] = y[j] + h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    check(s[i + 1], next);
    out[i + 1] = next;
  }
  return out;
}

/// y' = g y + r on a uniform grid: y = e^G (y0 + int r e^-G), G = int g.
/// Throws range when the exponent exceeds the double range.
std::vector<double> integrating_factor(const UniformGrid& grid, std::span<const double> g,
                                       std::span<const double> r, double y0);

/// 1 + lambda' = ratio * kappa * lambda with lambda(s_min) = c1.
LambdaSolution solve_linear(const CurvatureProfile& kappa, double ratio, double c1,
                            const UniformGrid& grid);

/// Value of lambda(s_min) that reproduces lambda = 1/(ratio kappa) + c0 e^{ratio kappa s}
/// when kappa is constant; kappa is taken at s_min otherwise.
double linear_c1_from_c0(double kappa0, double ratio, double c0, double s_min);

/// lambda = -s + c0.
LambdaSolution lambda_involute(double c0, const UniformGrid& grid);

enum class HyperbolicVariant { printed, flipped };

/// lambda = C1 sinh(w s) + C2 cosh(w s) + kappa/(kappa^2+tau^2), w = (a/b) sqrt(kappa^2+tau^2).
/// The flipped variant is the trigonometric solution of the opposite-sign ODE.
LambdaSolution lambda_helix_hyperbolic(double a, double b, double kappa, double tau, double c1,
                                       double c2, const UniformGrid& grid,
                                       HyperbolicVariant variant = HyperbolicVariant::printed);

/// Residual of lambda'' = sign (a/b)^2 ((lambda kappa - 1) kappa + lambda tau^2).
double hyperbolic_residual(const LambdaSolution& sol, double a, double b, double kappa, double tau,
                           HyperbolicVariant variant);

/// lambda = 1/(2 kappa).
LambdaSolution lambda_half_curvature(double kappa, const UniformGrid& grid);

/// lambda = c1 e^{(a/b) tau s} + c2 e^{-(a/b) tau s}.
LambdaSolution lambda_binormal_exponential(double a, double b, double tau, double c1, double c2,
                                           const UniformGrid& grid);

/// lambda = c on every node.
LambdaSolution lambda_constant(double c, const UniformGrid& grid);

struct RiccatiOptions {
  double cap = 1e6;
  double tau_floor = 1e-8;
};

/// Right-hand side of lambda' = (tau kappa / 2) lambda^2 - (tau'/(2 tau)) lambda + kappa/(2 tau).
double riccati_rhs(const CurvatureProfile::Sample& k, double lambda);

LambdaSolution solve_riccati(const CurvatureProfile& profile, double lambda0,
                             const UniformGrid& grid, const RiccatiOptions& opts = {});

/// General solution lambda = lambda1 + 1/mu through a particular solution,
/// with mu(s_min) = mu0. Throws pole when mu crosses zero.
LambdaSolution riccati_linearize(const LambdaSolution& particular, const CurvatureProfile& profile,
                                 double mu0, const UniformGrid& grid,
                                 const RiccatiOptions& opts = {});

enum class ConstraintFamily {
  normal_osculating_third,   // L = 0
  normal_rectifying_third,   // M(1 - lambda kappa) - K lambda tau = 0
  binormal_rectifying_third, // -X lambda tau - Y = 0
  normal_first,              // lambda' / |alpha*'| = p / sqrt(p^2+q^2), N family
  binormal_first,            // lambda' / |alpha*'| = p / sqrt(p^2+q^2), B family
};

std::string to_string(ConstraintFamily family);
ConstraintFamily constraint_family_from_string(const std::string& name);

enum class ConstraintVariant { derived, printed };

struct ConstraintOptions {
  ConstraintVariant variant = ConstraintVariant::derived;
  double p = 0.0;  // coefficient pair, used by the *_first families
  double q = 1.0;
  double singular_tol = 1e-10;
  double cap = 1e6;
};

/// Integrates the chosen constraint by RK4. Second-order families isolate
/// lambda'' (the constraint is affine in it); first-order families ignore
/// lambda0_prime.
LambdaSolution solve_constraint_second_order(ConstraintFamily family,
                                             const CurvatureProfile& profile, double lambda0,
                                             double lambda0_prime, const UniformGrid& grid,
                                             const ConstraintOptions& opts = {});

/// Value of the constraint expression at one point (zero on solutions).
double constraint_value(ConstraintFamily family, const CurvatureProfile::Sample& k, double lambda,
                        double d1, double d2, const ConstraintOptions& opts = {});

/// Defining equations that a stored solution can be substituted into.
enum class DefiningEquation {
  linear,             // 1 + lambda' - ratio kappa lambda
  involute,           // 1 + lambda'
  constant,           // lambda'
  riccati,            // Z
  helix_hyperbolic,   // lambda'' - (a/b)^2((lambda kappa - 1)kappa + lambda tau^2)
  binormal_exponential,  // lambda'' - (a/b)^2 tau^2 lambda
  constraint,         // constraint_value
};

struct EquationSpec {
  DefiningEquation equation = DefiningEquation::linear;
  double ratio = 1.0;  // linear: a/b or e/f
  double a = 0.0;      // hyperbolic / exponential pair
  double b = 1.0;
  ConstraintFamily family = ConstraintFamily::normal_osculating_third;
  ConstraintOptions constraint{};
};

/// Max over the grid of |equation| with lambda', lambda'' recomputed from the
/// lambda samples by O(h^4) differences (independent of the stored columns).
double substitution_residual(const LambdaSolution& sol, const CurvatureProfile& profile,
                             const EquationSpec& eq);

}  // namespace curvemates
