// Acceptance checks. One line per criterion; exit status is the number of
// failing criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "curvemates/association.hpp"
#include "curvemates/cli.hpp"
#include "curvemates/curve.hpp"
#include "curvemates/error.hpp"
#include "curvemates/io.hpp"
#include "curvemates/lambda.hpp"
#include "curvemates/numerics.hpp"
#include "curvemates/verify.hpp"

using namespace curvemates;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CURVEMATES_FIXTURE_DIR;
const double kR2 = std::numbers::sqrt2;
const double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double angle(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

// Unit-speed helix with kappa = tau = 1/sqrt(2).
SampledCurve helix_base(double s0, double s1, std::size_t n) {
  return sample_unit_speed(CurveSpec::helix(1 / kR2, 1 / kR2), UniformGrid(s0, s1, n));
}

std::vector<NumericFrame> mate_frames(const SampledCurve& mate) { return numeric_frames(mate.s, mate.positions); }

struct FixtureRun {
  SampledCurve base;
  LambdaSolution lambda;
};

FixtureRun load_fixture(const std::string& name) {
  const auto dir = kFixtures / name;
  return {io::parse_curve_csv(io::read_file(dir / "base.csv"), name + "/base.csv"),
          io::parse_lambda_csv(io::read_file(dir / "lambda.csv"), name + "/lambda.csv")};
}

EquationSpec equation_for(const LambdaSolution& sol) {
  EquationSpec eq;
  const std::string& m = sol.method;
  if (m == "linear") {
    eq.equation = DefiningEquation::linear;
    eq.ratio = sol.constants.at("ratio");
  } else if (m == "constant") {
    eq.equation = DefiningEquation::constant;
  } else if (m == "riccati") {
    eq.equation = DefiningEquation::riccati;
  } else if (m.rfind("constraint:", 0) == 0) {
    eq.equation = DefiningEquation::constraint;
    eq.family = constraint_family_from_string(m.substr(11));
  } else {
    throw Error(ErrorKind::spec, "no defining equation for method " + m);
  }
  return eq;
}

// -lambda tau' - 2 lambda' tau + kappa + lambda^2 tau^2 kappa with lambda'
// by O(h^4) differences of the samples.
double z_residual(const LambdaSolution& sol, const CurvatureProfile& profile) {
  const auto d1 = numerics::differentiate_high_order(sol.s, sol.lambda, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const auto k = profile(sol.s[i]);
    const double l = sol.lambda[i];
    worst = std::max(worst, std::abs(-l * k.tau_prime - 2 * d1[i] * k.tau + k.kappa + l * l * k.tau * k.tau * k.kappa));
  }
  return worst;
}

double as_double(const nlohmann::json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "curvemates");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

Outcome circle_tangent_osculating() {
  Outcome o;
  const auto base = sample_unit_speed(CurveSpec::circle(1.0), UniformGrid(0.0, 2.0, 2001));
  const auto grid = UniformGrid(0.0, 2.0, 2001);
  const auto spec = AssociationSpec::parse("TO", 1, 1);
  double worst = 0.0;
  std::string verdicts;
  for (double c0 : {-1.0, 0.0, 1.0}) {
    const double c1 = linear_c1_from_c0(1.0, 1.0, c0, 0.0);
    const auto sol = solve_linear(CurvatureProfile::from_curve(CurveSpec::circle(1.0)), 1.0, c1, grid);
    for (std::size_t i = 0; i < sol.size(); ++i) {
      worst = std::max(worst, std::abs(sol.lambda[i] - (1 + c0 * std::exp(sol.s[i]))));
    }
    const auto report = verify_association(base, construct_mate(base, spec, sol), spec, sol);
    verdicts += (verdicts.empty() ? "" : ",") + to_string(report.verdict);
    o.pass = o.pass && report.verdict == Verdict::pass && report.tolerances.residual == 1e-5;
  }
  o.pass = o.pass && worst < 1e-8;
  o.detail = "max|lambda-(1+c0 e^s)|=" + num(worst) + " verdicts=" + verdicts;
  return o;
}

Outcome helix_involute() {
  Outcome o;
  const double c0 = 1.0;
  const auto base = helix_base(0.0, 2 * kPi, 2001);
  const auto grid = require_uniform(base.s);
  const auto sol = lambda_involute(c0, grid);
  double exact = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) exact = std::max(exact, std::abs(sol.lambda[i] - (-sol.s[i] + c0)));
  const auto spec = AssociationSpec::parse("TP", -1 / kR2, 1 / kR2);
  const auto mate = construct_mate(base, spec, sol);
  const double dist = check_distance(base, mate, sol);
  const auto nf = mate_frames(mate);
  const auto gate = gating_mask(nf, Tolerances{});
  double plus = 0.0, minus = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < nf.size(); ++i) {
    if (!gate[i]) continue;
    ++used;
    if (sol.lambda[i] > 0) plus = std::max(plus, angle(nf[i].frame.T, base.frames[i].N));
    else minus = std::max(minus, angle(nf[i].frame.T, -base.frames[i].N));
  }
  const auto bands = excluded_bands(base.s, gate, 3);
  o.pass = exact == 0.0 && dist < 1e-12 && plus < 1e-4 && minus < 1e-4 && used > 0;
  o.detail = "max|lambda-(-s+c0)|=" + num(exact) + " distance=" + num(dist) + " angle(T*,N)=" + num(plus) +
             " (s<c0) angle(T*,-N)=" + num(minus) + " (s>c0)";
  for (const auto& [a, b] : bands) o.detail += " band=[" + num(a) + "," + num(b) + "]";
  return o;
}

Outcome helix_tangent_rectifying() {
  Outcome o;
  const auto base = helix_base(0.0, 2 * kPi, 2001);
  const auto grid = require_uniform(base.s);
  const auto spec = AssociationSpec::parse("TR", 1, 1);
  const double kappa = 1 / kR2;
  double lam_err = 0.0, inner = 0.0;
  for (double c0 : {-1.0, 1.0}) {
    const double c1 = linear_c1_from_c0(kappa, 1.0, c0, 0.0);
    const auto sol = solve_linear(CurvatureProfile::from_curve(CurveSpec::helix(1 / kR2, 1 / kR2)), 1.0, c1, grid);
    for (std::size_t i = 0; i < sol.size(); ++i) {
      lam_err = std::max(lam_err, std::abs(sol.lambda[i] - (kR2 + c0 * std::exp(sol.s[i] / kR2))));
    }
    const auto nf = mate_frames(construct_mate(base, spec, sol));
    for (std::size_t i = 1; i + 1 < nf.size(); ++i) {
      if (!nf[i].degenerate) inner = std::max(inner, std::abs(base.frames[i].T.dot(nf[i].frame.N)));
    }
  }
  o.pass = lam_err < 1e-8 && inner < 1e-5;
  o.detail = "max|lambda-(sqrt2+c0 e^(s/sqrt2))|=" + num(lam_err) + " max|<T,N*>|=" + num(inner);
  if (!o.pass) o.detail += " (N* = (-T+N+B)/sqrt3 here, so <T,N*> = 1/sqrt3)";
  return o;
}

Outcome tangent_normal_curvature() {
  Outcome o;
  // Numeric tau* needs third differences; roundoff grows like eps / h^3, so h = 2e-3.
  const auto base = helix_base(0.0, 1.5, 751);
  const auto sol = lambda_involute(2.0, require_uniform(base.s));  // lambda = 1 at s = 1, no cusp
  const auto mate = construct_mate(base, AssociationSpec::parse("TP", -1 / kR2, 1 / kR2), sol);
  const auto nf = mate_frames(mate);
  const std::size_t mid = 500;
  const double rel = std::abs(nf[mid].frame.kappa - kR2) / kR2;
  double tau = 0.0;
  for (std::size_t i = 3; i + 3 < nf.size(); ++i) tau = std::max(tau, std::abs(nf[i].frame.tau));
  o.pass = std::abs(sol.lambda[mid] - 1.0) < 1e-12 && rel < 1e-3 && tau < 1e-5;
  o.detail = "kappa*(lambda=1)=" + num(nf[mid].frame.kappa) + " rel=" + num(rel) + " max|tau*|=" + num(tau);
  return o;
}

// Constant offsets on the helix along N; both land on the axis.
Outcome normal_constant(const std::string& family, double lambda, const std::function<Vec3(const Triad&)>& pick,
                        const std::string& label) {
  Outcome o;
  const auto base = helix_base(0.0, 2 * kPi, 2001);
  const auto sol = lambda_constant(lambda, require_uniform(base.s));
  const auto mate = construct_mate(base, AssociationSpec::parse(family, 0, 1), sol);
  const auto nf = mate_frames(mate);
  double inner = 0.0, kmax = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 1; i + 1 < nf.size(); ++i) {
    kmax = std::max(kmax, nf[i].frame.kappa);
    if (nf[i].degenerate) continue;
    ++defined;
    const Triad t{nf[i].frame.T, nf[i].frame.N, nf[i].frame.B};
    inner = std::max(inner, std::abs(base.frames[i].N.dot(pick(t))));
  }
  o.pass = defined > 0 && inner < 1e-5;
  o.detail = label + " over " + std::to_string(defined) + " nodes with a frame";
  if (defined > 0) o.detail += " max=" + num(inner);
  if (defined == 0) o.detail += "; the mate is the helix axis (max kappa*=" + num(kmax) + "), its frame is undefined";
  return o;
}

Outcome normal_rectifying_constant() {
  const double kappa = 1 / kR2, tau = 1 / kR2;
  const double lambda = kappa / (kappa * kappa + tau * tau);
  // N component of alpha*'' for lambda' = lambda'' = 0; the mate's N* is along
  // it, so <N, N*> = 0 needs it to vanish.
  const double m = (1 - lambda * kappa) * kappa - lambda * tau * tau;
  const double c = constraint_value(ConstraintFamily::normal_rectifying_third,
                                    CurvatureProfile::constant(kappa, tau)(0.0), lambda, 0.0, 0.0);
  auto o = normal_constant("NR", lambda, [](const Triad& t) { return t.N; }, "|<N,N*>|");
  o.detail = "lambda=" + num(lambda) + " ansatz residual=" + num(m) + " constraint=" + num(c) + "; " + o.detail;
  o.pass = o.pass && std::abs(m) < 1e-15 && std::abs(c) < 1e-12;
  return o;
}

Outcome riccati_closed_form() {
  Outcome o;
  const auto profile = CurvatureProfile::constant(1 / kR2, 1 / kR2);
  auto exact = [](double s) { return kR2 * std::tan(s / (2 * kR2)); };
  auto error = [&](std::size_t n) {
    const auto sol = solve_riccati(profile, 0.0, UniformGrid(0.0, 2.0, n));
    double e = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) e = std::max(e, std::abs(sol.lambda[i] - exact(sol.s[i])));
    return e;
  };
  // The closed form against lambda' = 1/2 + lambda^2/4.
  double oracle = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double s = 0.01 * i, t = std::tan(s / (2 * kR2));
    oracle = std::max(oracle, std::abs((1 + t * t) / 2 - (0.5 + exact(s) * exact(s) / 4)));
  }
  const double fine = error(2001);
  const double ratio = error(41) / error(81);
  o.pass = oracle < 1e-14 && fine < 1e-6 && ratio >= 12 && ratio <= 20;
  o.detail = "oracle=" + num(oracle) + " max err(n=2001)=" + num(fine) + " err(n=41)/err(n=81)=" + num(ratio);
  return o;
}

Outcome substitution_residuals() {
  Outcome o;
  double worst = 0.0;
  for (const char* name : {"example-1", "bp-helix", "bo-riccati", "br-third", "no-elliptic"}) {
    const auto run = load_fixture(name);
    const double r = substitution_residual(run.lambda, CurvatureProfile::from_frames(run.base), equation_for(run.lambda));
    o.detail += std::string(name) + "=" + num(r) + " ";
    worst = std::max(worst, r);
  }
  const auto bo = load_fixture("bo-riccati");
  const double z_helix = z_residual(bo.lambda, CurvatureProfile::from_frames(bo.base));
  const auto ell = reparametrize_arclength(CurveSpec::elliptic_helix(2, 1, 0.5), 0.0, 2.0, 2001, 1e-6);
  const auto ell_profile = CurvatureProfile::from_frames(ell);
  const double z_ell = z_residual(solve_riccati(ell_profile, 0.2, require_uniform(ell.s)), ell_profile);
  o.pass = worst < 1e-6 && z_helix < 1e-6 && z_ell < 1e-6;
  o.detail += "Z(helix)=" + num(z_helix) + " Z(elliptic)=" + num(z_ell);
  return o;
}

Outcome frenet_properties() {
  Outcome o;
  // The elliptic helix over t in [0, 4] has arc length 6.27, close to 2 pi.
  auto sample = [](const CurveSpec& c, std::size_t n) {
    return c.kind() == "helix" ? sample_unit_speed(c, UniformGrid(0.0, 2 * kPi, n))
                               : reparametrize_arclength(c, 0.0, 4.0, n, 1e-6);
  };
  auto worst_fs = [](const FrenetResiduals& r) { return std::max({r.max_tangent, r.max_normal, r.max_binormal}); };
  double ortho = 0.0, fs = 0.0, order = 1e9;
  for (const auto& c : {CurveSpec::helix(0.6, 0.8), CurveSpec::elliptic_helix(2, 1, 0.5)}) {
    const auto fine = sample(c, 2001);
    const auto coarse = sample(c, 1001);
    for (const auto& f : fine.frames) ortho = std::max(ortho, frame_orthonormality_error(f));
    const auto nf = numeric_frames(fine.s, fine.positions);
    for (const auto& f : nf) ortho = std::max(ortho, frame_orthonormality_error(f.frame));
    const double r_fine = worst_fs(frenet_residuals(fine));
    fs = std::max(fs, r_fine);
    order = std::min(order, std::log2(worst_fs(frenet_residuals(coarse)) / r_fine));
  }
  o.pass = ortho < 1e-9 && fs < 1e-4 && order > 1.8;
  o.detail = "orthonormality=" + num(ortho) + " frenet residual(n=2001)=" + num(fs) + " observed order=" + num(order);
  return o;
}

Outcome tangent_osculating_planarity() {
  Outcome o;
  const auto base = helix_base(0.0, 1.0, 101);
  const auto sol = solve_linear(CurvatureProfile::constant(1 / kR2, 1 / kR2), 1.0, 1.0, require_uniform(base.s));
  try {
    construct_mate(base, AssociationSpec::parse("TO", 1, 1), sol);
    o.pass = false;
    o.detail = "no error raised";
  } catch (const Error& e) {
    o.pass = e.kind() == ErrorKind::planarity;
    o.detail = std::string("raised ") + e.what();
  }
  return o;
}

Outcome formula_audit() {
  Outcome o;
  for (const char* name : {"no-elliptic", "bo-riccati", "bp-helix", "br-third"}) {
    const auto out = fs::temp_directory_path() / "curvemates_acceptance" / name;
    const int code = cli({"verify", "--in", (kFixtures / name).string(), "--out", out.string()});
    const auto report = nlohmann::json::parse(io::read_file(out / "report.json"));
    const auto& d = report.at("curvature_deltas");
    bool has = true;
    for (const char* k : {"formula:kappa*", "formula:tau*", "derived:kappa*", "derived:tau*"}) has = has && d.contains(k);
    const bool gates_ok = report.at("failures").empty();
    const double dk = as_double(d.at("formula:kappa*"));
    const double dt = as_double(d.at("formula:tau*"));
    const bool diverges = !(dk <= 1e-2 && dt <= 1e-2);
    const int loose = cli({"verify", "--in", (kFixtures / name).string(), "--out", out.string(), "--tol", "audit=1e300"});
    o.pass = o.pass && has && gates_ok && code == (diverges ? exit_audit_flag : exit_pass) && loose == exit_pass;
    o.detail += std::string(name) + ": exit " + std::to_string(code) + " dkappa=" + num(dk) + " dtau=" + num(dt) + "; ";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"example 1, circle T-O*", circle_tangent_osculating},
      {"example 2, helix involute", helix_involute},
      {"example 3, helix T-R*", helix_tangent_rectifying},
      {"T-P* curvature on the helix", tangent_normal_curvature},
      {"N-O* constant offset on the helix",
       [] { return normal_constant("NO", 1 / kR2, [](const Triad& t) { return t.B; }, "|<N,B*>|"); }},
      {"N-R* constant offset on the helix", normal_rectifying_constant},
      {"Riccati closed form and RK4 order", riccati_closed_form},
      {"substitution residuals", substitution_residuals},
      {"Frenet properties", frenet_properties},
      {"T-O* planarity gate", tangent_osculating_planarity},
      {"formula audit", formula_audit},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("AC%zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", checks[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, checks.size());
  return failed;
}
