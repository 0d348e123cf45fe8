#include "curvemates/verify.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvemates/error.hpp"

namespace curvemates {

namespace {

double angle(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

bool orthonormal(const Triad& t, double tol) {
  return std::abs(t.T.norm() - 1) < tol && std::abs(t.N.norm() - 1) < tol && std::abs(t.B.norm() - 1) < tol &&
         std::abs(t.T.dot(t.N)) < tol && std::abs(t.T.dot(t.B)) < tol && std::abs(t.N.dot(t.B)) < tol;
}

Triad triad(const FrenetFrame& f) { return {f.T, f.N, f.B}; }

Triad normalized(const Triad& t) { return {t.T.normalized(), t.N.normalized(), t.B.normalized()}; }

void require_aligned(const SampledCurve& base, const SampledCurve& mate) {
  if (base.size() != mate.size()) throw Error(ErrorKind::alignment, "base and mate sample counts differ");
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (std::abs(base.s[i] - mate.s[i]) > 1e-9 * std::max(1.0, std::abs(base.s[i]))) {
      throw Error(ErrorKind::alignment, "base and mate grids differ", base.s[i]);
    }
  }
}

void require_lambda_aligned(const SampledCurve& base, const LambdaSolution& lambda) {
  if (lambda.size() != base.size()) throw Error(ErrorKind::alignment, "lambda and curve sample counts differ");
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (std::abs(base.s[i] - lambda.s[i]) > 1e-9 * std::max(1.0, std::abs(base.s[i]))) {
      throw Error(ErrorKind::alignment, "lambda grid differs from curve grid", base.s[i]);
    }
  }
}

// Running maximum that also counts contributing nodes.
struct MaxAcc {
  double value = 0.0;
  std::size_t nodes = 0;
  void add(double v) {
    value = std::max(value, v);
    ++nodes;
  }
  Measurement gated(double tol) const { return {value, true, tol, nodes}; }
  Measurement reported(double tol) const { return {value, false, tol, nodes}; }
};

double rel_delta(double formula, double numeric, double floor) {
  return std::abs(formula - numeric) / std::max(std::abs(numeric), floor);
}

std::vector<std::pair<std::size_t, std::size_t>> runs(const std::vector<bool>& gate) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < gate.size()) {
    if (!gate[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < gate.size() && gate[j + 1]) ++j;
    out.emplace_back(i, j);
    i = j + 1;
  }
  return out;
}

std::vector<LambdaJet> jets(const LambdaSolution& lambda) {
  const auto l3 = lambda_triple(lambda);
  std::vector<LambdaJet> out(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    out[i] = {lambda.lambda[i], lambda.lambda_prime[i], lambda.lambda_double_prime[i], l3[i]};
  }
  return out;
}

std::string bracket(char v, char w) { return std::string("<") + v + "," + w + "*>"; }

char normal_char(Plane p) {
  switch (p) {
    case Plane::O: return 'B';
    case Plane::P: return 'T';
    case Plane::R: return 'N';
  }
  return 'B';
}

void finish(VerificationReport& r) {
  const auto& tol = r.tolerances;
  r.failures.clear();
  auto check = [&](const std::string& name, const Measurement& m) {
    if (m.gated && m.exceeds()) r.failures.push_back(name);
  };
  for (const auto& [name, m] : r.residuals) check(name, m);
  for (const auto& [name, m] : r.curvature_deltas) check(name, m);
  if (r.distance) check("distance", *r.distance);
  if (r.gated_nodes == 0) r.failures.push_back("no gateable nodes");
  r.flags.clear();
  for (const auto& [name, m] : r.curvature_deltas) {
    if (!m.gated && name.starts_with("formula:") && m.nodes > 0 && m.value > tol.audit) r.flags.push_back(name);
  }
  if (!r.failures.empty()) {
    r.verdict = Verdict::fail;
  } else if (!r.flags.empty()) {
    r.verdict = Verdict::formula_audit_flag;
  } else {
    r.verdict = Verdict::pass;
  }
}

}  // namespace

void Tolerances::set(const std::string& key, double value) {
  if (!std::isfinite(value) || value < 0.0) throw Error(ErrorKind::usage, "tolerance " + key + " must be >= 0");
  if (key == "residual") residual = value;
  else if (key == "distance") distance = value;
  else if (key == "frame_angle") frame_angle = value;
  else if (key == "curvature") curvature = value;
  else if (key == "curvature_floor") curvature_floor = value;
  else if (key == "audit") audit = value;
  else if (key == "kappa_min") kappa_min = value;
  else if (key == "speed_min") speed_min = value;
  else if (key == "pad") pad = std::floor(value);
  else throw Error(ErrorKind::usage, "unknown tolerance '" + key + "'");
}

std::map<std::string, double> Tolerances::as_map() const {
  return {{"residual", residual},   {"distance", distance},   {"frame_angle", frame_angle},
          {"curvature", curvature}, {"curvature_floor", curvature_floor}, {"audit", audit},
          {"kappa_min", kappa_min}, {"speed_min", speed_min}, {"pad", pad}};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::formula_audit_flag: return "formula-audit-flag";
    case Verdict::fail: return "fail";
  }
  return "fail";
}

FrameAngles compare_frames(const Triad& predicted, const Triad& numeric) {
  if (!orthonormal(predicted, 1e-6) || !orthonormal(numeric, 1e-6)) {
    throw Error(ErrorKind::contract, "compare_frames needs orthonormal triads");
  }
  return {angle(predicted.T, numeric.T), angle(predicted.N, numeric.N), angle(predicted.B, numeric.B)};
}

double check_distance(const SampledCurve& base, const SampledCurve& mate, const LambdaSolution& lambda) {
  require_aligned(base, mate);
  require_lambda_aligned(base, lambda);
  double worst = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    worst = std::max(worst, std::abs((mate.positions[i] - base.positions[i]).norm() - std::abs(lambda.lambda[i])));
  }
  return worst;
}

std::vector<bool> gating_mask(const std::vector<NumericFrame>& mate, const Tolerances& tol) {
  const std::size_t n = mate.size();
  const auto pad = static_cast<std::size_t>(tol.pad);
  std::vector<bool> bad(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = mate[i];
    if (m.degenerate || !(m.speed >= tol.speed_min) || !(m.frame.kappa >= tol.kappa_min)) bad[i] = true;
  }
  std::vector<bool> gate(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < pad || i + pad >= n) gate[i] = false;
    if (!bad[i]) continue;
    const std::size_t lo = i >= pad ? i - pad : 0;
    const std::size_t hi = std::min(n - 1, i + pad);
    for (std::size_t j = lo; j <= hi; ++j) gate[j] = false;
  }
  return gate;
}

std::vector<std::pair<double, double>> excluded_bands(std::span<const double> s, const std::vector<bool>& gate,
                                                      std::size_t pad) {
  std::vector<std::pair<double, double>> out;
  const std::size_t n = s.size();
  if (n <= 2 * pad) return out;
  std::size_t i = pad;
  while (i + pad < n) {
    if (gate[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 + pad < n && !gate[j + 1]) ++j;
    out.emplace_back(s[i], s[j]);
    i = j + 1;
  }
  return out;
}

VerificationReport check_association(const SampledCurve& base, const SampledCurve& mate, const AssociationSpec& spec,
                                     const Tolerances& tol) {
  if (!base.has_frames()) throw Error(ErrorKind::contract, "base curve needs frames");
  require_aligned(base, mate);
  if (mate.size() < 7) throw Error(ErrorKind::insufficient_data, "verification needs at least 7 mate samples");
  FrenetOptions fo;
  fo.kappa_min = tol.kappa_min;
  const auto nf = numeric_frames(mate.s, mate.positions, fo);
  const auto gate = gating_mask(nf, tol);

  VerificationReport r;
  r.family = spec;
  r.tolerances = tol;
  r.excluded_bands = excluded_bands(mate.s, gate, static_cast<std::size_t>(tol.pad));
  MaxAcc plane, align;
  for (std::size_t i = 0; i < mate.size(); ++i) {
    if (!gate[i]) continue;
    ++r.gated_nodes;
    const Vec3 v = offset_direction(base.frames[i], spec.vector);
    const Triad m = triad(nf[i].frame);
    plane.add(std::abs(v.dot(plane_normal(m, spec.plane))));
    const Vec3 u = plane_unit_vector(m, spec);
    align.add(std::min((v - u).norm(), (v + u).norm()));
  }
  r.residuals[bracket(to_char(spec.vector), normal_char(spec.plane))] = plane.gated(tol.residual);
  r.residuals["coefficient-alignment"] = align.reported(tol.residual);
  finish(r);
  return r;
}

void audit_curvature_formulas(const AssociationSpec& spec, const SampledCurve& base, const LambdaSolution& lambda,
                              const std::vector<NumericFrame>& mate, const std::vector<bool>& gate,
                              VerificationReport& report) {
  const auto& tol = report.tolerances;
  const bool t_family = spec.vector == OffsetVector::T;
  const auto js = jets(lambda);
  MaxAcc fk, ft, dk, dt;
  std::size_t undefined = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!gate[i]) continue;
    const double kn = mate[i].frame.kappa, tn = mate[i].frame.tau;
    try {
      auto [kf, tf] = predicted_curvatures(spec, base.frames[i], js[i]);
      // Curvature is nonnegative; the T-family formulas carry the sign of lambda.
      if (t_family) kf = std::abs(kf);
      if (std::isfinite(kf) && std::isfinite(tf)) {
        fk.add(rel_delta(kf, kn, tol.curvature_floor));
        ft.add(rel_delta(tf, tn, tol.curvature_floor));
      } else {
        ++undefined;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::singular_configuration) throw;
      ++undefined;
    }
    try {
      const auto ap = mate_apparatus(spec.vector, js[i], base.frames[i]);
      dk.add(rel_delta(ap.kappa, kn, tol.curvature_floor));
      dt.add(rel_delta(ap.tau, tn, tol.curvature_floor));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::singular_configuration) throw;
    }
  }
  const double ftol = t_family ? tol.curvature : tol.audit;
  auto as = [&](const MaxAcc& a) { return t_family ? a.gated(ftol) : a.reported(ftol); };
  report.curvature_deltas["formula:kappa*"] = as(fk);
  report.curvature_deltas["formula:tau*"] = as(ft);
  report.curvature_deltas["derived:kappa*"] = dk.reported(tol.curvature);
  report.curvature_deltas["derived:tau*"] = dt.reported(tol.curvature);
  if (undefined > 0) report.undefined_nodes[spec.name() + " curvature formulas"] = undefined;
}

VerificationReport verify_association(const SampledCurve& base, const SampledCurve& mate, const AssociationSpec& spec,
                                      const LambdaSolution& lambda, const Tolerances& tol) {
  auto r = check_association(base, mate, spec, tol);
  require_lambda_aligned(base, lambda);
  FrenetOptions fo;
  fo.kappa_min = tol.kappa_min;
  const auto nf = numeric_frames(mate.s, mate.positions, fo);
  const auto gate = gating_mask(nf, tol);
  const auto js = jets(lambda);

  r.distance = Measurement{check_distance(base, mate, lambda), true, tol.distance, base.size()};

  // Coefficient residuals: the defining relation written in the base frame.
  MaxAcc coef;
  std::string coef_name;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!gate[i]) continue;
    const auto& f = base.frames[i];
    const auto jet = mate_jet(spec.vector, js[i], f);
    const double w = jet.d1.cross(jet.d2).norm();
    if (!(w > 0.0)) continue;
    if (spec.vector == OffsetVector::N && spec.plane == Plane::O) {
      coef_name = "L-coefficient";
      coef.add(std::abs(klm(js[i], f).L) / w);
    } else if (spec.vector == OffsetVector::B && spec.plane == Plane::O) {
      coef_name = "Z-coefficient";
      coef.add(std::abs(xyz(js[i], f).Z) / w);
    } else if (spec.vector == OffsetVector::N && spec.plane == Plane::R) {
      coef_name = "NR-relation";
      const auto c = klm(js[i], f);
      coef.add(std::abs(c.M * (1 - js[i].l * f.kappa) - c.K * js[i].l * f.tau) / (w * jet.d1.norm()));
    } else if (spec.vector == OffsetVector::B && spec.plane == Plane::R) {
      coef_name = "BR-relation";
      const auto c = xyz(js[i], f);
      coef.add(std::abs(-c.X * js[i].l * f.tau - c.Y) / (w * jet.d1.norm()));
    }
  }
  if (!coef_name.empty()) r.residuals[coef_name] = coef.reported(tol.residual);

  // Frames. T family: printed frames, gated, with one sign per vector and segment.
  if (spec.vector == OffsetVector::T) {
    FrameAngles worst;
    for (const auto& [a, b] : runs(gate)) {
      std::array<double, 3> dots{0, 0, 0};
      for (std::size_t i = a; i <= b; ++i) {
        const Triad p = predicted_frame(base.frames[i], spec, js[i]);
        const Triad m = triad(nf[i].frame);
        dots[0] += p.T.dot(m.T);
        dots[1] += p.N.dot(m.N);
        dots[2] += p.B.dot(m.B);
      }
      std::array<double, 3> sign{1, 1, 1};
      const char names[3] = {'T', 'N', 'B'};
      for (int k = 0; k < 3; ++k) {
        if (dots[k] < 0) {
          sign[k] = -1;
          r.sign_flips.push_back({names[k], base.s[a], base.s[b]});
        }
      }
      for (std::size_t i = a; i <= b; ++i) {
        Triad p = normalized(predicted_frame(base.frames[i], spec, js[i]));
        p.T *= sign[0];
        p.N *= sign[1];
        p.B *= sign[2];
        const auto fa = compare_frames(p, triad(nf[i].frame));
        worst.T = std::max(worst.T, fa.T);
        worst.N = std::max(worst.N, fa.N);
        worst.B = std::max(worst.B, fa.B);
      }
    }
    r.frame_errors = worst;
    r.residuals["frame-angle:T*"] = {worst.T, true, tol.frame_angle, r.gated_nodes};
    r.residuals["frame-angle:N*"] = {worst.N, true, tol.frame_angle, r.gated_nodes};
    r.residuals["frame-angle:B*"] = {worst.B, true, tol.frame_angle, r.gated_nodes};
  } else {
    // N and B families: derived T* gated for the normal plane; printed frames reported.
    MaxAcc t_derived;
    FrameAngles printed;
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (!gate[i]) continue;
      const Triad m = triad(nf[i].frame);
      const Triad p = predicted_frame(base.frames[i], spec, js[i]);
      t_derived.add(angle(p.T, m.T));
      const Triad q = printed_frame(base.frames[i], spec, js[i]);
      printed.T = std::max(printed.T, angle(q.T, m.T));
      printed.N = std::max(printed.N, angle(q.N, m.N));
      printed.B = std::max(printed.B, angle(q.B, m.B));
    }
    r.frame_errors = printed;
    const bool gated = spec.plane == Plane::P;
    r.residuals["frame-angle:T*"] = {t_derived.value, gated, tol.frame_angle, t_derived.nodes};
    r.residuals["printed-frame-angle:T*"] = {printed.T, false, tol.frame_angle, t_derived.nodes};
    r.residuals["printed-frame-angle:N*"] = {printed.N, false, tol.frame_angle, t_derived.nodes};
    r.residuals["printed-frame-angle:B*"] = {printed.B, false, tol.frame_angle, t_derived.nodes};
  }

  audit_curvature_formulas(spec, base, lambda, nf, gate, r);
  finish(r);
  return r;
}

}  // namespace curvemates
