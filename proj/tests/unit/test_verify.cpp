#include <cmath>
#include <numbers>

#include "curvemates/error.hpp"
#include "curvemates/verify.hpp"
#include "doctest.h"

using namespace curvemates;

namespace {

const double r2 = std::sqrt(2.0);
const double pi = std::numbers::pi;

bool throws_kind(auto&& fn, ErrorKind kind) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

struct Case {
  SampledCurve base;
  SampledCurve mate;
  LambdaSolution lambda;
  AssociationSpec spec;
};

Case circle_to(double c0, std::size_t n = 2001) {
  const auto grid = UniformGrid(0, 2, n);
  Case c{sample_unit_speed(CurveSpec::circle(1.0), grid), {},
         solve_linear(CurvatureProfile::constant(1, 0), 1.0, linear_c1_from_c0(1, 1, c0, 0), grid),
         AssociationSpec::parse("TO", 1, 1)};
  c.mate = construct_mate(c.base, c.spec, c.lambda);
  return c;
}

Case helix_involute(double c0, double s1, std::size_t n) {
  const auto grid = UniformGrid(0, s1, n);
  Case c{sample_unit_speed(CurveSpec::helix(1 / r2, 1 / r2), grid), {}, lambda_involute(c0, grid),
         AssociationSpec::parse("TP", -1 / r2, 1 / r2)};
  c.mate = construct_mate(c.base, c.spec, c.lambda);
  return c;
}

}  // namespace

TEST_CASE("compare_frames") {
  const Triad id;
  const auto z = compare_frames(id, id);
  CHECK(z.T == 0.0);
  CHECK(z.N == 0.0);
  CHECK(z.B == 0.0);
  const Triad flipped{id.T, -id.N, -id.B};
  const auto a = compare_frames(id, flipped);
  CHECK(a.T == 0.0);
  CHECK(a.N == doctest::Approx(pi));
  CHECK(a.B == doctest::Approx(pi));

  const double c = std::cos(0.3), s = std::sin(0.3);
  const Triad rot{Vec3(c, s, 0), Vec3(-s, c, 0), Vec3(0, 0, 1)};
  const auto ab = compare_frames(id, rot), ba = compare_frames(rot, id);
  CHECK(ab.T == doctest::Approx(0.3));
  CHECK(ab.T == ba.T);
  CHECK(ab.N == ba.N);
  CHECK(ab.B == ba.B);
  CHECK(throws_kind([&] { compare_frames(id, Triad{Vec3(2, 0, 0), id.N, id.B}); }, ErrorKind::contract));
}

TEST_CASE("circle T-O* mate passes with the binormal sign reported") {
  const auto c = circle_to(0.0);
  const auto r = check_association(c.base, c.mate, c.spec);
  CHECK(r.residuals.at("<T,B*>").value < 1e-6);
  CHECK(r.verdict == Verdict::pass);

  const auto full = verify_association(c.base, c.mate, c.spec, c.lambda);
  CHECK(full.verdict == Verdict::pass);
  CHECK(full.distance->value < 1e-12);
  // The printed B* = -B is opposite to the numeric binormal of this mate.
  bool b_flip = false;
  for (const auto& f : full.sign_flips) b_flip = b_flip || f.vector == 'B';
  CHECK(b_flip);
  const auto nf = numeric_frames(c.mate.s, c.mate.positions);
  const auto raw = compare_frames(predicted_frame(c.base.frames[500], c.spec, {1.0, 0, 0, 0}),
                                  Triad{nf[500].frame.T, nf[500].frame.N, nf[500].frame.B});
  CHECK(raw.B == doctest::Approx(pi));
  CHECK(raw.T < 1e-6);
  // tau* = 0 on the planar mate.
  double tmax = 0.0;
  for (std::size_t i = 3; i + 3 < nf.size(); ++i) tmax = std::max(tmax, std::abs(nf[i].frame.tau));
  CHECK(tmax < 1e-6);
}

TEST_CASE("helix involute: residual small away from the cusp, band reported") {
  const auto c = helix_involute(2.0, 4.0, 4001);
  const auto r = check_association(c.base, c.mate, c.spec);
  CHECK(r.residuals.at("<T,T*>").value < 1e-6);
  CHECK(r.verdict == Verdict::pass);
  REQUIRE(r.excluded_bands.size() == 1);
  CHECK(r.excluded_bands[0].first < 2.0);
  CHECK(r.excluded_bands[0].second > 2.0);
}

TEST_CASE("translated copy is not a T-P* mate") {
  const auto grid = UniformGrid(0, 2 * pi, 2001);
  const auto base = sample_unit_speed(CurveSpec::helix(1 / r2, 1 / r2), grid);
  auto mate = base;
  mate.frames.clear();
  for (auto& p : mate.positions) p += Vec3(1, 0, 0);
  const auto r = check_association(base, mate, AssociationSpec::parse("TP", -1, 1));
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.residuals.at("<T,T*>").value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("distance identity") {
  const auto c = helix_involute(1.0, 2 * pi, 2001);
  CHECK(check_distance(c.base, c.mate, c.lambda) < 1e-12);
  for (std::size_t i = 0; i < c.base.size(); i += 97) {
    CHECK(std::abs((c.mate.positions[i] - c.base.positions[i]).norm() - std::abs(1.0 - c.base.s[i])) < 1e-12);
  }
  const auto zero = lambda_constant(0.0, UniformGrid(0, 2 * pi, 2001));
  CHECK(check_distance(c.base, construct_mate(c.base, OffsetVector::N, zero), zero) == 0.0);
  const auto one = circle_to(0.0);
  for (std::size_t i = 0; i < one.base.size(); i += 111) {
    CHECK(std::abs((one.mate.positions[i] - one.base.positions[i]).norm() - 1.0) < 1e-10);
  }
  CHECK(throws_kind([&] { check_distance(one.base, c.mate, c.lambda); }, ErrorKind::alignment));
}

TEST_CASE("residuals are second order under refinement") {
  const auto hp = CurvatureProfile::constant(1 / r2, 1 / r2);
  auto residual = [&](std::size_t n) {
    const auto grid = UniformGrid(0, 2, n);
    const auto base = sample_unit_speed(CurveSpec::helix(1 / r2, 1 / r2), grid);
    const auto lambda = solve_riccati(hp, 0.5, grid);
    const auto spec = AssociationSpec::parse("BO", 1, 1);
    return check_association(base, construct_mate(base, spec, lambda), spec).residuals.at("<B,B*>").value;
  };
  CHECK(residual(501) / residual(1001) >= 3.0);
}

TEST_CASE("printed curvature formulas: gate for T-P*, audit for B-P*") {
  // lambda = 1 at s = 1: numeric kappa* of the involute there is sqrt 2.
  const auto c = helix_involute(2.0, 2.0, 2001);
  const auto nf = numeric_frames(c.mate.s, c.mate.positions);
  CHECK(nf[1000].frame.kappa == doctest::Approx(r2).epsilon(1e-3));
  CHECK(std::abs(nf[1000].frame.tau) < 1e-5);
  const auto r = verify_association(c.base, c.mate, c.spec, c.lambda);
  CHECK(r.curvature_deltas.at("formula:kappa*").gated);
  CHECK(r.curvature_deltas.at("formula:kappa*").value < 1e-3);

  const auto grid = UniformGrid(0, 2 * pi, 2001);
  const auto base = sample_unit_speed(CurveSpec::helix(1 / r2, 1 / r2), grid);
  const auto spec = AssociationSpec::parse("BP", -0.5, std::sqrt(3.0) / 2);
  const auto lambda = lambda_constant(1.0, grid);
  const auto bp = verify_association(base, construct_mate(base, spec, lambda), spec, lambda);
  CHECK(!bp.curvature_deltas.at("formula:kappa*").gated);
  CHECK(bp.curvature_deltas.at("formula:kappa*").value > 1e-2);
  CHECK(bp.curvature_deltas.at("derived:kappa*").value < 1e-4);
  CHECK(bp.verdict == Verdict::formula_audit_flag);
  Tolerances loose;
  loose.audit = 10.0;
  CHECK(verify_association(base, construct_mate(base, spec, lambda), spec, lambda, loose).verdict == Verdict::pass);
}

TEST_CASE("no gateable nodes is a failure") {
  // lambda = kappa/(kappa^2+tau^2) along N collapses the helix onto its axis.
  const auto grid = UniformGrid(0, 2 * pi, 401);
  const auto base = sample_unit_speed(CurveSpec::helix(1 / r2, 1 / r2), grid);
  const auto lambda = lambda_constant(1 / r2, grid);
  const auto spec = AssociationSpec::parse("NR", 1, 1);
  const auto r = check_association(base, construct_mate(base, spec, lambda), spec);
  CHECK(r.gated_nodes == 0);
  CHECK(r.verdict == Verdict::fail);
}

TEST_CASE("gating mask and bands") {
  std::vector<NumericFrame> nf(20);
  for (auto& f : nf) {
    f.speed = 1.0;
    f.frame.kappa = 1.0;
  }
  nf[10].speed = 0.01;
  Tolerances tol;
  const auto gate = gating_mask(nf, tol);
  CHECK(!gate[0]);
  CHECK(!gate[2]);
  CHECK(gate[3]);
  CHECK(gate[6]);
  CHECK(!gate[7]);
  CHECK(!gate[13]);
  CHECK(gate[14]);
  CHECK(!gate[17]);
  std::vector<double> s(20);
  for (std::size_t i = 0; i < 20; ++i) s[i] = 0.1 * static_cast<double>(i);
  const auto bands = excluded_bands(s, gate, 3);
  REQUIRE(bands.size() == 1);
  CHECK(bands[0].first == doctest::Approx(0.7));
  CHECK(bands[0].second == doctest::Approx(1.3));
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  t.set("residual", 1e-3);
  CHECK(t.residual == 1e-3);
  CHECK(t.as_map().at("residual") == 1e-3);
  CHECK(throws_kind([&] { t.set("bogus", 1.0); }, ErrorKind::usage));
  CHECK(throws_kind([&] { t.set("audit", -1.0); }, ErrorKind::usage));
}
