#pragma once

// The nine associated-curve families alpha* = alpha + lambda V, V in {T, N, B},
// with V constrained into the osculating (O), normal (P) or rectifying (R)
// plane of the mate.

#include <optional>
#include <string>
#include <utility>

#include "curvemates/curve.hpp"
#include "curvemates/lambda.hpp"

namespace curvemates {

enum class OffsetVector { T, N, B };
enum class Plane { O, P, R };

char to_char(OffsetVector v);
char to_char(Plane p);

/// Family plus the plane coefficient pair (a,b), (c,d) or (e,f), stored as given.
struct AssociationSpec {
  OffsetVector vector = OffsetVector::T;
  Plane plane = Plane::O;
  double p = 1.0;
  double q = 1.0;

  /// Validates the pair (not both zero; b != 0 for TO; f != 0 for TR).
  static AssociationSpec make(OffsetVector vector, Plane plane, double p, double q);
  /// From a two-letter code such as "TO" or "bp".
  static AssociationSpec parse(const std::string& code, double p, double q);

  std::string code() const;
  /// Printable name of the family, e.g. "T-O*".
  std::string name() const;
};

struct Triad {
  Vec3 T = Vec3::UnitX();
  Vec3 N = Vec3::UnitY();
  Vec3 B = Vec3::UnitZ();
};

/// lambda and its derivatives at one point.
struct LambdaJet {
  double l = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Unit vector of the spec's plane in the mate frame.
Vec3 plane_unit_vector(const Triad& mate, const AssociationSpec& spec);
Vec3 plane_unit_vector(const FrenetFrame& mate, const AssociationSpec& spec);

/// Normal of the plane: B* for O, T* for P, N* for R.
Vec3 plane_normal(const Triad& mate, Plane plane);

Vec3 offset_direction(const FrenetFrame& base, OffsetVector v);

/// alpha*_i = alpha_i + lambda_i V_i. Frames of the result are left empty.
SampledCurve construct_mate(const SampledCurve& base, OffsetVector v, const LambdaSolution& lambda);

/// Same, plus the family prerequisites: T-O* needs max|tau| < planarity_tol.
SampledCurve construct_mate(const SampledCurve& base, const AssociationSpec& spec,
                            const LambdaSolution& lambda, double planarity_tol = 1e-6);

struct KLMCoefficients {
  double K = 0.0;
  double L = 0.0;
  double M = 0.0;
};

struct XYZCoefficients {
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
};

/// Components of alpha*' x alpha*'' in the base frame for V = N.
KLMCoefficients klm(const LambdaJet& lambda, const FrenetFrame& frame);
/// As printed, whose L differs from the cross product by the sign of one term.
KLMCoefficients klm_printed(const LambdaJet& lambda, const FrenetFrame& frame);
/// Components of alpha*' x alpha*'' in the base frame for V = B.
XYZCoefficients xyz(const LambdaJet& lambda, const FrenetFrame& frame);

/// alpha*', alpha*'' and alpha*''' of the mate in base-frame components.
struct MateJet {
  Vec3 d1;
  Vec3 d2;
  Vec3 d3;
};
MateJet mate_jet(OffsetVector v, const LambdaJet& lambda, const FrenetFrame& frame);

/// Frenet frame and curvatures of the mate from the jet, mapped to world
/// coordinates. Throws singular_configuration where alpha*' x alpha*'' vanishes.
struct MateApparatus {
  Triad frame;
  double kappa = 0.0;
  double tau = 0.0;
};
MateApparatus mate_apparatus(OffsetVector v, const LambdaJet& lambda, const FrenetFrame& frame);

/// Closed-form frame of the family. T-family: the theorem frames with their
/// signs (T-P* with c entering so that T = cN* + dB*). N and B families:
/// T* = A/|A|, B* = W/|W|, N* = B* x T*.
Triad predicted_frame(const FrenetFrame& base, const AssociationSpec& spec, const LambdaJet& lambda);

/// The nine theorem frames exactly as printed (not normalized).
Triad printed_frame(const FrenetFrame& base, const AssociationSpec& spec, const LambdaJet& lambda);

/// Printed curvature and torsion formulas of each family.
std::pair<double, double> predicted_curvatures(const AssociationSpec& spec, const FrenetFrame& base,
                                               const LambdaJet& lambda);

enum class SpecialCase { involute, bertrand_like, mannheim_like, generic };
std::string to_string(SpecialCase c);

SpecialCase classify_special_case(const AssociationSpec& spec, const LambdaSolution& lambda);

}  // namespace curvemates
