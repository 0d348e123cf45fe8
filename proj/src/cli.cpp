#include "curvemates/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curvemates/association.hpp"
#include "curvemates/curve.hpp"
#include "curvemates/error.hpp"
#include "curvemates/io.hpp"
#include "curvemates/lambda.hpp"
#include "curvemates/verify.hpp"

namespace curvemates {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* kDefaultGrid = "0:2pi:2001";

struct GridArg {
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

// "1.5", "pi", "2pi", "-0.5pi".
double parse_scalar(const std::string& text) {
  if (text.size() >= 2 && text.ends_with("pi")) {
    const std::string head = text.substr(0, text.size() - 2);
    const double k = head.empty() ? 1.0 : head == "-" ? -1.0 : io::parse_number(head, "grid");
    return k * std::numbers::pi;
  }
  return io::parse_number(text, "grid");
}

GridArg parse_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw Error(ErrorKind::usage, "--grid expects min:max:n, got '" + text + "'");
  GridArg g;
  g.min = parse_scalar(text.substr(0, a));
  g.max = parse_scalar(text.substr(a + 1, b - a - 1));
  const double n = io::parse_number(text.substr(b + 1), "grid");
  if (!(n >= 7) || n != std::floor(n)) throw Error(ErrorKind::usage, "--grid needs an integer n >= 7");
  if (!(g.min < g.max)) throw Error(ErrorKind::usage, "--grid needs min < max");
  g.n = static_cast<std::size_t>(n);
  return g;
}

std::pair<double, double> parse_pair(const std::string& text) {
  const auto c = text.find(',');
  if (c == std::string::npos) throw Error(ErrorKind::usage, "--coeffs expects p,q");
  return {parse_scalar(text.substr(0, c)), parse_scalar(text.substr(c + 1))};
}

CurveSpec parse_curve_arg(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return io::curve_from_json(json::parse(text), fs::current_path());
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, std::string("--curve: ") + e.what());
    }
  }
  if (text == "circle" || text == "helix") return io::curve_from_json({{"kind", text}});
  const fs::path path(text);
  try {
    return io::curve_from_json(json::parse(io::read_file(path)), path.parent_path());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, text + ": " + e.what());
  }
}

bool is_unit_speed(const CurveSpec& curve) {
  if (curve.is_sampled()) return false;
  for (double t : {0.0, 0.41, 1.3, 2.7}) {
    if (std::abs(evaluate(curve, t, 1)[1].norm() - 1.0) > 1e-9) return false;
  }
  return true;
}

// Unit-speed analytic curves are sampled on the grid as given; other curves
// are reparametrized over the parameter interval and land on [0, L].
SampledCurve make_base(const CurveSpec& curve, const GridArg& g) {
  if (is_unit_speed(curve)) return sample_unit_speed(curve, UniformGrid(g.min, g.max, g.n));
  return reparametrize_arclength(curve, g.min, g.max, g.n, 1e-6);
}

CurvatureProfile make_profile(const CurveSpec& curve, const SampledCurve& base) {
  if (is_unit_speed(curve)) return CurvatureProfile::from_curve(curve);
  return CurvatureProfile::from_frames(base);
}

UniformGrid grid_of(const SampledCurve& base) { return require_uniform(base.s); }

struct SolveArgs {
  std::string family;
  std::string coeffs = "1,1";
  std::string method;
  std::optional<double> c0, c1, c2, lambda0, lambda0_prime;
};

void add_solve_options(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("--family", a.family, "TO|TP|TR|NO|NP|NR|BO|BP|BR")->required();
  cmd->add_option("--coeffs", a.coeffs, "plane coefficients p,q (a,b / c,d / e,f)");
  cmd->add_option("--method", a.method, "solver variant (see README)");
  cmd->add_option("--c0", a.c0, "integration constant c0");
  cmd->add_option("--c1", a.c1, "integration constant c1");
  cmd->add_option("--c2", a.c2, "integration constant c2");
  cmd->add_option("--lambda0", a.lambda0, "lambda at the grid start");
  cmd->add_option("--lambda0-prime", a.lambda0_prime, "lambda' at the grid start");
}

double need(const std::optional<double>& v, const char* flag, const std::string& method) {
  if (!v) throw Error(ErrorKind::usage, std::string(flag) + " is required for method " + method);
  return *v;
}

std::string default_method(const AssociationSpec& spec) {
  switch (spec.vector) {
    case OffsetVector::T: return spec.plane == Plane::P ? "involute" : "linear";
    case OffsetVector::N:
      return spec.plane == Plane::O ? "no-third" : spec.plane == Plane::P ? "constant" : "nr-third";
    case OffsetVector::B:
      return spec.plane == Plane::O ? "riccati" : spec.plane == Plane::P ? "constant" : "br-third";
  }
  return "linear";
}

LambdaSolution solve_for(const AssociationSpec& spec, const SolveArgs& a, const CurvatureProfile& profile,
                         const UniformGrid& grid) {
  const std::string m = a.method.empty() ? default_method(spec) : a.method;
  const double s0 = grid.s_min();
  const auto k0 = profile(s0);
  auto constant_helix = [&]() {
    if (!profile.is_constant()) {
      const auto k1 = profile(grid.s_max());
      if (std::abs(k1.kappa - k0.kappa) > 1e-9 || std::abs(k1.tau - k0.tau) > 1e-9 ||
          std::abs(k0.kappa_prime) > 1e-9 || std::abs(k0.tau_prime) > 1e-9) {
        throw Error(ErrorKind::spec, "method " + m + " needs constant curvature and torsion");
      }
    }
  };
  auto constraint = [&](ConstraintFamily f, ConstraintVariant v) {
    ConstraintOptions o;
    o.variant = v;
    o.p = spec.p;
    o.q = spec.q;
    return solve_constraint_second_order(f, profile, need(a.lambda0, "--lambda0", m), a.lambda0_prime.value_or(0.0),
                                         grid, o);
  };
  const bool t = spec.vector == OffsetVector::T, n = spec.vector == OffsetVector::N, b = spec.vector == OffsetVector::B;
  if (m == "linear" && t && spec.plane != Plane::P) {
    const double ratio = spec.p / spec.q;
    const double c1 = a.c1 ? *a.c1 : linear_c1_from_c0(k0.kappa, ratio, a.c0.value_or(0.0), s0);
    auto sol = solve_linear(profile, ratio, c1, grid);
    if (a.c0 && !a.c1) sol.constants["c0"] = *a.c0;
    return sol;
  }
  if (m == "involute" && t && spec.plane == Plane::P) return lambda_involute(a.c0.value_or(0.0), grid);
  if (m == "constant" && (spec.plane == Plane::P || (!t && spec.p == 0.0))) {
    return lambda_constant(need(a.lambda0 ? a.lambda0 : a.c0, "--lambda0", m), grid);
  }
  if (m == "half-curvature" && n && spec.plane == Plane::O) {
    constant_helix();
    return lambda_half_curvature(k0.kappa, grid);
  }
  if (m == "hyperbolic" && n && spec.plane == Plane::O) {
    constant_helix();
    return lambda_helix_hyperbolic(spec.p, spec.q, k0.kappa, k0.tau, a.c1.value_or(0.0), a.c2.value_or(0.0), grid);
  }
  if (m == "no-third" && n && spec.plane == Plane::O) return constraint(ConstraintFamily::normal_osculating_third, ConstraintVariant::derived);
  if (m == "no-third-printed" && n && spec.plane == Plane::O) return constraint(ConstraintFamily::normal_osculating_third, ConstraintVariant::printed);
  if (m == "nr-third" && n && spec.plane == Plane::R) return constraint(ConstraintFamily::normal_rectifying_third, ConstraintVariant::derived);
  if (m == "nr-third-printed" && n && spec.plane == Plane::R) return constraint(ConstraintFamily::normal_rectifying_third, ConstraintVariant::printed);
  if (m == "n-first" && n && spec.plane != Plane::P) return constraint(ConstraintFamily::normal_first, ConstraintVariant::derived);
  if (m == "riccati" && b && spec.plane == Plane::O) {
    return solve_riccati(profile, need(a.lambda0, "--lambda0", m), grid);
  }
  if (m == "exponential" && b && spec.plane == Plane::O) {
    constant_helix();
    return lambda_binormal_exponential(spec.p, spec.q, k0.tau, a.c1.value_or(0.0), a.c2.value_or(0.0), grid);
  }
  if (m == "br-third" && b && spec.plane == Plane::R) return constraint(ConstraintFamily::binormal_rectifying_third, ConstraintVariant::derived);
  if (m == "b-first" && b && spec.plane != Plane::P) return constraint(ConstraintFamily::binormal_first, ConstraintVariant::derived);
  throw Error(ErrorKind::usage, "method '" + m + "' does not apply to family " + spec.code());
}

// Mate samples with the closed-form frame and derived curvatures per node
// (NaN where the mate is singular). Verification reads only the positions.
SampledCurve mate_with_frames(const SampledCurve& base, const SampledCurve& mate, const AssociationSpec& spec,
                              const LambdaSolution& lambda) {
  SampledCurve out = mate;
  const auto l3 = lambda_triple(lambda);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.frames.resize(mate.size());
  for (std::size_t i = 0; i < mate.size(); ++i) {
    auto& f = out.frames[i];
    f.s = mate.s[i];
    f.position = mate.positions[i];
    const LambdaJet j{lambda.lambda[i], lambda.lambda_prime[i], lambda.lambda_double_prime[i], l3[i]};
    try {
      const Triad t = predicted_frame(base.frames[i], spec, j);
      const auto ap = mate_apparatus(spec.vector, j, base.frames[i]);
      f.T = t.T;
      f.N = t.N;
      f.B = t.B;
      f.kappa = ap.kappa;
      f.tau = ap.tau;
    } catch (const Error&) {
      f.T = f.N = f.B = Vec3::Constant(nan);
      f.kappa = f.tau = nan;
    }
  }
  return out;
}

std::string mate_csv(const SampledCurve& mate) {
  // Same layout as curve_csv without the rate columns.
  std::string text = io::curve_csv(mate);
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    std::string line = text.substr(pos, end - pos);
    std::size_t commas = 0, cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == ',' && ++commas == 15) {
        cut = i;
        break;
      }
    }
    out += line.substr(0, cut) + '\n';
    pos = end + 1;
  }
  return out;
}

Tolerances tolerances_from(const std::vector<std::string>& overrides) {
  Tolerances tol;
  for (const auto& [key, _] : tol.as_map()) {
    std::string env = "CURVEMATES_TOL_" + key;
    for (auto& c : env) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(env.c_str())) tol.set(key, io::parse_number(v, env));
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::usage, "--tol expects key=value, got '" + kv + "'");
    tol.set(kv.substr(0, eq), io::parse_number(kv.substr(eq + 1), "--tol " + kv.substr(0, eq)));
  }
  return tol;
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return exit_pass;
    case Verdict::formula_audit_flag: return exit_audit_flag;
    case Verdict::fail: return exit_fail;
  }
  return exit_fail;
}

void print_report(std::ostream& out, const VerificationReport& r) {
  out << r.family.name() << " verdict=" << to_string(r.verdict) << " gated_nodes=" << r.gated_nodes << '\n';
  for (const auto& name : r.failures) out << "  fail: " << name << '\n';
  for (const auto& name : r.flags) out << "  audit: " << name << '\n';
}

void write_plot_script(const fs::path& dir) {
  io::write_atomic(dir / "plot.py",
                   "# Plots base.csv and mate.csv from this directory.\n"
                   "import csv, pathlib\n"
                   "import matplotlib.pyplot as plt\n\n"
                   "here = pathlib.Path(__file__).parent\n\n"
                   "def load(name):\n"
                   "    with open(here / name) as f:\n"
                   "        rows = list(csv.DictReader(f))\n"
                   "    return [[float(r[k]) for r in rows] for k in ('x', 'y', 'z')]\n\n"
                   "ax = plt.figure().add_subplot(projection='3d')\n"
                   "for name in ('base.csv', 'mate.csv'):\n"
                   "    x, y, z = load(name)\n"
                   "    ax.plot(x, y, z, label=name[:-4])\n"
                   "ax.legend()\n"
                   "plt.show()\n");
}

struct Outputs {
  std::string out_dir;
  std::string format = "csv";
  bool plot = false;
};

// Writes `name` under --out, or to stdout without it.
void emit(const Outputs& o, std::ostream& out, const std::string& name, const std::string& content) {
  if (o.out_dir.empty()) {
    out << content;
    return;
  }
  fs::create_directories(o.out_dir);
  io::write_atomic(fs::path(o.out_dir) / name, content);
}

json frames_json(const SampledCurve& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& f = c.frames[i];
    const auto v = [](const Vec3& x) { return json::array({x.x(), x.y(), x.z()}); };
    rows.push_back({{"s", c.s[i]}, {"position", v(c.positions[i])}, {"T", v(f.T)}, {"N", v(f.N)}, {"B", v(f.B)},
                    {"kappa", f.kappa}, {"tau", f.tau}, {"kappa_prime", f.kappa_prime}, {"tau_prime", f.tau_prime}});
  }
  return rows;
}

json lambda_json(const LambdaSolution& sol) {
  return {{"provenance", to_string(sol.provenance)}, {"method", sol.method}, {"constants", sol.constants},
          {"s", sol.s}, {"lambda", sol.lambda}, {"lambda_prime", sol.lambda_prime},
          {"lambda_double_prime", sol.lambda_double_prime}};
}

struct Pipeline {
  CurveSpec curve;
  AssociationSpec spec;
  GridArg grid;
  SampledCurve base;
  LambdaSolution lambda;
  SampledCurve mate;
};

// base.csv, lambda.csv, mate.csv and run.json under `dir`.
void write_pipeline(const fs::path& dir, const Pipeline& p, const Tolerances& tol) {
  fs::create_directories(dir);
  io::write_atomic(dir / "base.csv", io::curve_csv(p.base));
  io::write_atomic(dir / "lambda.csv", io::lambda_csv(p.lambda));
  io::write_atomic(dir / "mate.csv", mate_csv(mate_with_frames(p.base, p.mate, p.spec, p.lambda)));
  json run = {{"curve", io::to_json(p.curve)},
              {"association", io::to_json(p.spec)},
              {"grid", {{"min", p.grid.min}, {"max", p.grid.max}, {"n", p.grid.n}}},
              {"lambda", {{"method", p.lambda.method}, {"provenance", to_string(p.lambda.provenance)},
                          {"constants", p.lambda.constants}}},
              {"files", {{"base", "base.csv"}, {"lambda", "lambda.csv"}, {"mate", "mate.csv"}}},
              {"tolerances", tol.as_map()}};
  io::write_atomic(dir / "run.json", run.dump(2) + "\n");
}

VerificationReport verify_dir(const fs::path& dir, const Tolerances& tol) {
  json run;
  try {
    run = json::parse(io::read_file(dir / "run.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, (dir / "run.json").string() + ": " + e.what());
  }
  std::string base_name = "base.csv", lambda_name = "lambda.csv", mate_name = "mate.csv";
  AssociationSpec spec;
  try {
    spec = io::association_from_json(run.at("association"));
    if (run.contains("files")) {
      base_name = run["files"].value("base", base_name);
      lambda_name = run["files"].value("lambda", lambda_name);
      mate_name = run["files"].value("mate", mate_name);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, (dir / "run.json").string() + ": " + e.what());
  }
  const auto base = io::parse_curve_csv(io::read_file(dir / base_name), base_name);
  if (!base.has_frames()) throw Error(ErrorKind::parse, base_name + ": frame columns required");
  auto mate = io::parse_curve_csv(io::read_file(dir / mate_name), mate_name);
  mate.frames.clear();
  if (fs::exists(dir / lambda_name)) {
    const auto lambda = io::parse_lambda_csv(io::read_file(dir / lambda_name), lambda_name);
    return verify_association(base, mate, spec, lambda, tol);
  }
  return check_association(base, mate, spec, tol);
}

Pipeline example_pipeline(int index, double c0, const GridArg& g) {
  const double r2 = std::sqrt(2.0);
  Pipeline p{CurveSpec::circle(1.0), AssociationSpec::parse("TO", 1, 1), g, {}, {}, {}};
  if (index == 2) p = {CurveSpec::helix(1 / r2, 1 / r2), AssociationSpec::parse("TP", -1 / r2, 1 / r2), g, {}, {}, {}};
  if (index == 3) p = {CurveSpec::helix(1 / r2, 1 / r2), AssociationSpec::parse("TR", 1, 1), g, {}, {}, {}};
  p.base = make_base(p.curve, g);
  const auto grid = grid_of(p.base);
  const auto profile = make_profile(p.curve, p.base);
  SolveArgs a;
  a.c0 = c0;
  p.lambda = solve_for(p.spec, a, profile, grid);
  p.mate = construct_mate(p.base, p.spec, p.lambda);
  return p;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Associated curves: frames, offset functions, mates and their verification", "curvemates"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string curve_text, grid_text = kDefaultGrid, in_dir;
  std::vector<std::string> tol_overrides;
  Outputs o;
  SolveArgs sa;
  std::string lambda_file;
  int example_index = 0;
  double example_c0 = 0.0;

  auto add_common = [&](CLI::App* c, bool curve) {
    if (curve) c->add_option("--curve", curve_text, "JSON object, JSON file, or circle|helix")->required();
    c->add_option("--grid", grid_text, "min:max:n (numbers or multiples of pi)");
    c->add_option("--out", o.out_dir, "output directory");
    c->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--tol", tol_overrides, "tolerance override key=value");
    c->add_flag("--plot", o.plot, "also write plot.py");
  };

  auto* frenet = app.add_subcommand("frenet", "Frenet apparatus of a curve on a grid");
  add_common(frenet, true);
  auto* solve = app.add_subcommand("solve-lambda", "offset function lambda(s) for a family");
  add_common(solve, true);
  add_solve_options(solve, sa);
  auto* assoc = app.add_subcommand("associate", "construct a mate: base.csv, lambda.csv, mate.csv, run.json");
  add_common(assoc, true);
  add_solve_options(assoc, sa);
  assoc->add_option("--lambda", lambda_file, "use this lambda CSV instead of solving");
  auto* verify = app.add_subcommand("verify", "verify a directory written by associate or example");
  verify->add_option("--in", in_dir, "input directory")->required();
  add_common(verify, false);
  auto* example = app.add_subcommand("example", "reproduce worked example 1, 2 or 3");
  example->add_option("index", example_index, "1|2|3")->required();
  example->add_option("--c0", example_c0, "integration constant c0");
  add_common(example, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "curvemates: " << e.what() << '\n';
    return exit_usage;
  }

  const Tolerances tol = tolerances_from(tol_overrides);
  const GridArg g = parse_grid(grid_text);

  if (frenet->parsed()) {
    const auto curve = parse_curve_arg(curve_text);
    const auto base = make_base(curve, g);
    emit(o, out, o.format == "json" ? "frenet.json" : "frenet.csv",
         o.format == "json" ? frames_json(base).dump(2) + "\n" : io::curve_csv(base));
    return exit_pass;
  }
  if (solve->parsed() || assoc->parsed()) {
    Pipeline p{parse_curve_arg(curve_text), {}, g, {}, {}, {}};
    const auto [pp, qq] = parse_pair(sa.coeffs);
    p.spec = AssociationSpec::parse(sa.family, pp, qq);
    p.base = make_base(p.curve, g);
    const auto grid = grid_of(p.base);
    if (!lambda_file.empty()) {
      p.lambda = io::parse_lambda_csv(io::read_file(lambda_file), lambda_file);
      if (!grid.matches(p.lambda.s, 1e-9 * std::max(1.0, std::abs(grid.s_max())))) {
        throw Error(ErrorKind::alignment, lambda_file + ": lambda grid does not match the curve grid");
      }
    } else {
      p.lambda = solve_for(p.spec, sa, make_profile(p.curve, p.base), grid);
    }
    if (solve->parsed()) {
      emit(o, out, o.format == "json" ? "lambda.json" : "lambda.csv",
           o.format == "json" ? lambda_json(p.lambda).dump(2) + "\n" : io::lambda_csv(p.lambda));
      return exit_pass;
    }
    if (o.out_dir.empty()) throw Error(ErrorKind::usage, "associate needs --out");
    p.mate = construct_mate(p.base, p.spec, p.lambda);
    write_pipeline(o.out_dir, p, tol);
    if (o.plot) write_plot_script(o.out_dir);
    out << "wrote " << o.out_dir << '\n';
    return exit_pass;
  }
  if (verify->parsed()) {
    const fs::path dir = o.out_dir.empty() ? fs::path(in_dir) : fs::path(o.out_dir);
    const auto report = verify_dir(in_dir, tol);
    fs::create_directories(dir);
    io::write_atomic(dir / "report.json", io::to_json(report).dump(2) + "\n");
    print_report(out, report);
    return verdict_code(report.verdict);
  }
  if (example->parsed()) {
    if (example_index < 1 || example_index > 3) throw Error(ErrorKind::usage, "example index must be 1, 2 or 3");
    if (o.out_dir.empty()) throw Error(ErrorKind::usage, "example needs --out");
    const auto p = example_pipeline(example_index, example_c0, g);
    write_pipeline(o.out_dir, p, tol);
    const auto report = verify_association(p.base, p.mate, p.spec, p.lambda, tol);
    io::write_atomic(fs::path(o.out_dir) / "report.json", io::to_json(report).dump(2) + "\n");
    if (o.plot) write_plot_script(o.out_dir);
    print_report(out, report);
    return verdict_code(report.verdict);
  }
  return exit_usage;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(argc, argv, out, err);
  } catch (const Error& e) {
    err << "curvemates: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::usage:
      case ErrorKind::parse:
      case ErrorKind::spec:
      case ErrorKind::domain:
        return exit_usage;
      default:
        return exit_data;
    }
  } catch (const std::exception& e) {
    err << "curvemates: " << e.what() << '\n';
    return exit_data;
  }
}

}  // namespace curvemates
