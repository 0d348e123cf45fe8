#pragma once

// Numeric verification of a constructed mate: its Frenet apparatus is
// recomputed from positions alone and checked against the family's
// defining orthogonality, the predicted frames and curvature formulas, and
// the distance identity.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvemates/association.hpp"
#include "curvemates/curve.hpp"
#include "curvemates/lambda.hpp"

namespace curvemates {

/// Version of the gating table below; written into every report.
inline constexpr int kGatingTableVersion = 1;

/// Gating table. Gated: plane residual, distance, T-family frames and
/// curvatures, T* of N-P* and B-P*. Audit-only: the N- and B-family
/// curvature formulas.
struct Tolerances {
  double residual = 1e-5;        // |<V, n*>|, n* the mate's plane normal
  double distance = 1e-12;       // | |alpha* - alpha| - |lambda| |
  double frame_angle = 1e-4;     // radians
  double curvature = 1e-3;       // relative, see curvature_floor
  double curvature_floor = 1.0;  // deltas are |f - n| / max(|n|, floor)
  double audit = 1e-2;           // audit-only formula deltas above this flag the report
  double kappa_min = 1e-8;       // mate curvature floor
  double speed_min = 0.25;       // mate speed floor |alpha*'| (base is unit speed)
  double pad = 3;                // nodes added around bands and at the ends

  /// Recognized keys: the member names above.
  void set(const std::string& key, double value);
  std::map<std::string, double> as_map() const;
};

enum class Verdict { pass, formula_audit_flag, fail };
std::string to_string(Verdict v);

struct Measurement {
  double value = 0.0;
  bool gated = false;
  double tolerance = 0.0;
  std::size_t nodes = 0;  // nodes the maximum was taken over

  bool exceeds() const { return !(value <= tolerance); }
};

struct FrameAngles {
  double T = 0.0;
  double N = 0.0;
  double B = 0.0;
};

/// A vector of a predicted frame that matched the numeric one only after
/// negation on [s0, s1].
struct SignFlip {
  char vector = 'T';
  double s0 = 0.0;
  double s1 = 0.0;
};

struct VerificationReport {
  AssociationSpec family;
  std::map<std::string, Measurement> residuals;
  std::optional<FrameAngles> frame_errors;
  std::vector<SignFlip> sign_flips;
  std::map<std::string, Measurement> curvature_deltas;
  std::optional<Measurement> distance;
  std::vector<std::pair<double, double>> excluded_bands;
  std::size_t gated_nodes = 0;
  /// Printed formula name -> nodes where it divides by zero.
  std::map<std::string, std::size_t> undefined_nodes;
  Tolerances tolerances;
  Verdict verdict = Verdict::fail;
  std::vector<std::string> failures;
  std::vector<std::string> flags;
};

/// Angle between each pair of vectors, signs as given (a sign mismatch
/// shows as pi). Throws contract when either triad is not orthonormal.
FrameAngles compare_frames(const Triad& predicted, const Triad& numeric);

/// Maximum over aligned nodes of | |alpha*_i - alpha_i| - |lambda_i| |.
double check_distance(const SampledCurve& base, const SampledCurve& mate, const LambdaSolution& lambda);

/// Defining orthogonality only: |<V, n*>| over interior, non-degenerate
/// nodes. Needs >= 7 mate samples aligned with the base.
VerificationReport check_association(const SampledCurve& base, const SampledCurve& mate,
                                     const AssociationSpec& spec, const Tolerances& tol = {});

/// check_association plus distance, frames and curvature formulas.
VerificationReport verify_association(const SampledCurve& base, const SampledCurve& mate,
                                      const AssociationSpec& spec, const LambdaSolution& lambda,
                                      const Tolerances& tol = {});

/// Curvature-formula deltas alone (subset of verify_association), written
/// into `report`. Audit-only families add a flag when a delta exceeds tol.audit.
void audit_curvature_formulas(const AssociationSpec& spec, const SampledCurve& base,
                              const LambdaSolution& lambda, const std::vector<NumericFrame>& mate,
                              const std::vector<bool>& gate, VerificationReport& report);

/// Nodes used for gating: interior, mate speed and curvature above their floors,
/// dilated by tol.pad.
std::vector<bool> gating_mask(const std::vector<NumericFrame>& mate, const Tolerances& tol);

/// Contiguous runs of excluded interior nodes as [s0, s1].
std::vector<std::pair<double, double>> excluded_bands(std::span<const double> s, const std::vector<bool>& gate,
                                                      std::size_t pad);

}  // namespace curvemates
