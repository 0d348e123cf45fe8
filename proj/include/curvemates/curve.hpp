#pragma once

// Parametric space curves, arc-length reparametrization and the Frenet
// apparatus (T, N, B, curvature, torsion and their arc-length derivatives).

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "curvemates/grid.hpp"

namespace curvemates {

using Vec3 = Eigen::Vector3d;

/// r (cos t, sin t, 0); unit speed when r == 1.
struct Circle {
  double r = 1.0;
};

/// (a cos t, a sin t, b t); unit speed when a^2 + b^2 == 1.
struct Helix {
  double a = 1.0;
  double b = 0.0;
};

/// (a cos t, b sin t, c t); curvature and torsion vary along the curve.
struct EllipticHelix {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;
};

/// origin + t * direction; curvature is identically zero.
struct Line {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();
};

/// (t^2, t^3, 0); singular (zero speed) at t = 0.
struct SemicubicalCusp {};

/// Ordered samples (s_i, x_i) with strictly increasing s.
struct Samples {
  std::vector<double> s;
  std::vector<Vec3> points;
};

/// Declarative description of a base curve.
class CurveSpec {
 public:
  using Shape = std::variant<Circle, Helix, EllipticHelix, Line, SemicubicalCusp, Samples>;

  static CurveSpec circle(double r);
  static CurveSpec helix(double a, double b);
  static CurveSpec elliptic_helix(double a, double b, double c);
  static CurveSpec line(const Vec3& origin, const Vec3& direction);
  static CurveSpec cusp();
  static CurveSpec samples(std::vector<double> s, std::vector<Vec3> points);

  const Shape& shape() const noexcept { return shape_; }
  bool is_sampled() const noexcept { return std::holds_alternative<Samples>(shape_); }
  std::string kind() const;

  /// Parameter interval where the curve is defined (unbounded for analytic kinds).
  std::pair<double, double> domain() const;

 private:
  explicit CurveSpec(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

/// Position and derivatives up to `order` (<= 3) with respect to the curve's
/// own parameter. Analytic kinds are exact; sampled curves use local
/// finite-difference stencils (2/3/5/7 nodes for orders 0/1/2/3).
std::vector<Vec3> evaluate(const CurveSpec& curve, double t, int order);

struct FrenetFrame {
  double s = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 T = Vec3::UnitX();
  Vec3 N = Vec3::UnitY();
  Vec3 B = Vec3::UnitZ();
  double kappa = 0.0;
  double tau = 0.0;
  // Arc-length derivatives.
  double kappa_prime = 0.0;
  double tau_prime = 0.0;
  double kappa_second = 0.0;
  double tau_second = 0.0;
};

struct FrenetOptions {
  double kappa_min = 1e-8;
};

/// Frenet apparatus at parameter t of a curve. N is B x T.
/// Throws curvature_degenerate when kappa < kappa_min.
FrenetFrame frenet_apparatus(const CurveSpec& curve, double t, const FrenetOptions& opts = {});

/// Largest deviation of a frame from orthonormality/right-handedness.
double frame_orthonormality_error(const FrenetFrame& frame);

struct SampledCurve {
  std::vector<double> s;
  std::vector<Vec3> positions;
  std::vector<FrenetFrame> frames;  // empty, or aligned with s
  bool unit_speed = false;
  /// Parameter of the source curve at each node, when known.
  std::vector<double> source_parameter;

  std::size_t size() const noexcept { return s.size(); }
  bool has_frames() const noexcept { return !frames.empty() && frames.size() == s.size(); }
};

FrenetFrame frenet_apparatus(const SampledCurve& curve, double s, const FrenetOptions& opts = {});

/// Samples an analytic curve that is already unit speed in its own parameter
/// on `grid`, with exact frames. Throws regularity if the curve is not unit
/// speed within `tol`.
SampledCurve sample_unit_speed(const CurveSpec& curve, const UniformGrid& grid,
                               double tol = 1e-9, const FrenetOptions& opts = {});

/// Reparametrizes the curve over [t0, t1] by arc length: cumulative Simpson
/// quadrature of the speed, monotone cubic inversion, then Newton polish.
/// The result has n uniform arc-length nodes starting at 0 and carries frames.
SampledCurve reparametrize_arclength(const CurveSpec& curve, double t0, double t1, std::size_t n,
                                     double tol = 1e-6, const FrenetOptions& opts = {});

/// Largest | |d alpha / ds| - 1 | over interior nodes of a reparametrized curve.
double unit_speed_residual(const CurveSpec& curve, const SampledCurve& sampled);

/// Per-node numeric Frenet data from positions alone; never throws for
/// degenerate nodes, it flags them instead.
struct NumericFrame {
  FrenetFrame frame;
  double speed = 0.0;
  bool degenerate = false;
};

std::vector<NumericFrame> numeric_frames(std::span<const double> s, std::span<const Vec3> positions,
                                         const FrenetOptions& opts = {});

/// Numeric frames for every node; throws curvature_degenerate at the first
/// degenerate node.
SampledCurve with_numeric_frames(SampledCurve curve, const FrenetOptions& opts = {});

struct FrenetResiduals {
  std::vector<double> tangent;   // |T' - kappa N|
  std::vector<double> normal;    // |N' + kappa T - tau B|
  std::vector<double> binormal;  // |B' + tau N|
  double max_tangent = 0.0;
  double max_normal = 0.0;
  double max_binormal = 0.0;
};

/// Residuals of the Frenet–Serret equations with T', N', B' by O(h^2)
/// differences along the grid.
FrenetResiduals frenet_residuals(const SampledCurve& curve);

}  // namespace curvemates
