#include "curvemates/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "curvemates/error.hpp"
#include "curvemates/numerics.hpp"

namespace curvemates::io {

namespace {

using nlohmann::json;

const std::vector<std::string> kPositionCols = {"s", "x", "y", "z"};
const std::vector<std::string> kFrameCols = {"Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau"};
const std::vector<std::string> kRateCols = {"kappa_prime", "tau_prime", "kappa_second", "tau_second"};

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    std::string cell(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(std::move(cell));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
  std::vector<double> values(const std::string& name) const {
    const int c = column(name);
    std::vector<double> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i][static_cast<std::size_t>(c)];
    return v;
  }
};

Table parse_table(const std::string& text, const std::string& name) {
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(1));
      continue;
    }
    if (t.header.empty()) {
      t.header = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != t.header.size()) {
      throw Error(ErrorKind::parse, name + " line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(t.header.size()) + " fields, got " +
                                        std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      row[i] = parse_number(cells[i], name + " line " + std::to_string(lineno));
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(ErrorKind::parse, name + ": missing header");
  return t;
}

void require_columns(const Table& t, const std::vector<std::string>& cols, const std::string& name) {
  for (const auto& c : cols) {
    if (t.column(c) < 0) throw Error(ErrorKind::parse, name + ": missing column '" + c + "'");
  }
}

void require_increasing(const std::vector<double>& s, const std::string& name) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw Error(ErrorKind::parse, name + ": s must be strictly increasing");
  }
}

void append_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += '\n';
}

std::string join(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  return out;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(ErrorKind::parse, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

Vec3 get_vec(const json& j, const char* key, const Vec3& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3) throw Error(ErrorKind::parse, std::string("field '") + key + "' must be [x,y,z]");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

json measurement(const Measurement& m) {
  return {{"value", number(m.value)}, {"gated", m.gated}, {"tolerance", m.tolerance}, {"nodes", m.nodes}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, const std::string& context) {
  if (text == "nan" || text == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto res = std::from_chars(begin, text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::parse, context + ": not a number '" + std::string(text) + "'");
  }
  return v;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::usage, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorKind::usage, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string curve_csv(const SampledCurve& c) {
  std::vector<std::string> cols = kPositionCols;
  const bool frames = c.has_frames();
  if (frames) {
    cols.insert(cols.end(), kFrameCols.begin(), kFrameCols.end());
    cols.insert(cols.end(), kRateCols.begin(), kRateCols.end());
  }
  std::string out = join(cols) + '\n';
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3& p = c.positions[i];
    if (!frames) {
      append_row(out, {c.s[i], p.x(), p.y(), p.z()});
      continue;
    }
    const auto& f = c.frames[i];
    append_row(out, {c.s[i], p.x(), p.y(), p.z(), f.T.x(), f.T.y(), f.T.z(), f.N.x(), f.N.y(), f.N.z(), f.B.x(),
                     f.B.y(), f.B.z(), f.kappa, f.tau, f.kappa_prime, f.tau_prime, f.kappa_second, f.tau_second});
  }
  return out;
}

SampledCurve parse_curve_csv(const std::string& text, const std::string& name) {
  const Table t = parse_table(text, name);
  require_columns(t, kPositionCols, name);
  SampledCurve c;
  c.s = t.values("s");
  require_increasing(c.s, name);
  const auto x = t.values("x"), y = t.values("y"), z = t.values("z");
  for (std::size_t i = 0; i < c.s.size(); ++i) c.positions.emplace_back(x[i], y[i], z[i]);
  if (t.column("Tx") < 0) return c;
  require_columns(t, kFrameCols, name);
  std::vector<std::vector<double>> f;
  for (const auto& col : kFrameCols) f.push_back(t.values(col));
  c.frames.resize(c.s.size());
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    auto& fr = c.frames[i];
    fr.s = c.s[i];
    fr.position = c.positions[i];
    fr.T = Vec3(f[0][i], f[1][i], f[2][i]);
    fr.N = Vec3(f[3][i], f[4][i], f[5][i]);
    fr.B = Vec3(f[6][i], f[7][i], f[8][i]);
    fr.kappa = f[9][i];
    fr.tau = f[10][i];
  }
  if (t.column("kappa_prime") >= 0) {
    require_columns(t, kRateCols, name);
    const auto kp = t.values("kappa_prime"), tp = t.values("tau_prime");
    const auto kpp = t.values("kappa_second"), tpp = t.values("tau_second");
    for (std::size_t i = 0; i < c.s.size(); ++i) {
      c.frames[i].kappa_prime = kp[i];
      c.frames[i].tau_prime = tp[i];
      c.frames[i].kappa_second = kpp[i];
      c.frames[i].tau_second = tpp[i];
    }
  } else {
    if (c.s.size() < 3) throw Error(ErrorKind::insufficient_data, name + ": rates need at least 3 samples");
    const auto k = f[9], tau = f[10];
    const auto kp = numerics::differentiate(c.s, k, 1), tp = numerics::differentiate(c.s, tau, 1);
    const auto kpp = numerics::differentiate(c.s, kp, 1), tpp = numerics::differentiate(c.s, tp, 1);
    for (std::size_t i = 0; i < c.s.size(); ++i) {
      c.frames[i].kappa_prime = kp[i];
      c.frames[i].tau_prime = tp[i];
      c.frames[i].kappa_second = kpp[i];
      c.frames[i].tau_second = tpp[i];
    }
  }
  c.unit_speed = true;
  return c;
}

std::string lambda_csv(const LambdaSolution& sol) {
  std::string out = "# provenance=" + to_string(sol.provenance) + " method=" + sol.method;
  for (const auto& [k, v] : sol.constants) out += " " + k + "=" + format_number(v);
  out += "\ns,lambda,lambda_prime,lambda_double_prime\n";
  for (std::size_t i = 0; i < sol.size(); ++i) {
    append_row(out, {sol.s[i], sol.lambda[i], sol.lambda_prime[i], sol.lambda_double_prime[i]});
  }
  return out;
}

LambdaSolution parse_lambda_csv(const std::string& text, const std::string& name) {
  const Table t = parse_table(text, name);
  require_columns(t, {"s", "lambda", "lambda_prime", "lambda_double_prime"}, name);
  LambdaSolution sol;
  sol.s = t.values("s");
  require_increasing(sol.s, name);
  sol.lambda = t.values("lambda");
  sol.lambda_prime = t.values("lambda_prime");
  sol.lambda_double_prime = t.values("lambda_double_prime");
  bool have_provenance = false;
  for (const auto& line : t.comments) {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "provenance") {
        sol.provenance = provenance_from_string(value);
        have_provenance = true;
      } else if (key == "method") {
        sol.method = value;
      } else {
        sol.constants[key] = parse_number(value, name + " constant " + key);
      }
    }
  }
  if (!have_provenance) throw Error(ErrorKind::parse, name + ": missing '# provenance=' line");
  return sol;
}

json to_json(const CurveSpec& curve) {
  return std::visit(
      [](const auto& sh) -> json {
        using S = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<S, Circle>) {
          return {{"kind", "circle"}, {"r", sh.r}};
        } else if constexpr (std::is_same_v<S, Helix>) {
          return {{"kind", "helix"}, {"a", sh.a}, {"b", sh.b}};
        } else if constexpr (std::is_same_v<S, EllipticHelix>) {
          return {{"kind", "elliptic-helix"}, {"a", sh.a}, {"b", sh.b}, {"c", sh.c}};
        } else if constexpr (std::is_same_v<S, Line>) {
          return {{"kind", "line"},
                  {"origin", {sh.origin.x(), sh.origin.y(), sh.origin.z()}},
                  {"direction", {sh.direction.x(), sh.direction.y(), sh.direction.z()}}};
        } else if constexpr (std::is_same_v<S, SemicubicalCusp>) {
          return {{"kind", "cusp"}};
        } else {
          json pts = json::array();
          for (const auto& p : sh.points) pts.push_back({p.x(), p.y(), p.z()});
          return {{"kind", "samples"}, {"s", sh.s}, {"points", pts}};
        }
      },
      curve.shape());
}

CurveSpec curve_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw Error(ErrorKind::parse, "curve JSON needs a string field 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "circle") return CurveSpec::circle(get_number(j, "r", 1.0));
    if (kind == "helix") return CurveSpec::helix(get_number(j, "a", 1 / std::sqrt(2.0)), get_number(j, "b", 1 / std::sqrt(2.0)));
    if (kind == "elliptic-helix") {
      return CurveSpec::elliptic_helix(get_number(j, "a", 1.0), get_number(j, "b", 1.0), get_number(j, "c", 0.0));
    }
    if (kind == "line") return CurveSpec::line(get_vec(j, "origin", Vec3::Zero()), get_vec(j, "direction", Vec3::UnitX()));
    if (kind == "cusp") return CurveSpec::cusp();
    if (kind == "samples") {
      if (j.contains("path")) {
        const auto path = base_dir / j.at("path").get<std::string>();
        const Table t = parse_table(read_file(path), path.string());
        const std::string key = t.column("t") >= 0 ? "t" : "s";
        require_columns(t, {key, "x", "y", "z"}, path.string());
        const auto s = t.values(key), x = t.values("x"), y = t.values("y"), z = t.values("z");
        std::vector<Vec3> pts;
        for (std::size_t i = 0; i < s.size(); ++i) pts.emplace_back(x[i], y[i], z[i]);
        return CurveSpec::samples(s, pts);
      }
      std::vector<Vec3> pts;
      for (const auto& p : j.at("points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
      return CurveSpec::samples(j.at("s").get<std::vector<double>>(), pts);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("curve JSON: ") + e.what());
  }
  throw Error(ErrorKind::parse, "unknown curve kind '" + kind + "'");
}

json to_json(const AssociationSpec& spec) { return {{"family", spec.code()}, {"coeffs", {spec.p, spec.q}}}; }

AssociationSpec association_from_json(const json& j) {
  try {
    const auto c = j.at("coeffs").get<std::vector<double>>();
    if (c.size() != 2) throw Error(ErrorKind::parse, "coeffs must have two entries");
    return AssociationSpec::parse(j.at("family").get<std::string>(), c[0], c[1]);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("association JSON: ") + e.what());
  }
}

json to_json(const VerificationReport& r) {
  json out;
  out["family"] = r.family.name();
  out["spec"] = to_json(r.family);
  out["gating_table_version"] = kGatingTableVersion;
  json residuals = json::object(), details = json::object();
  for (const auto& [k, m] : r.residuals) {
    residuals[k] = number(m.value);
    details[k] = measurement(m);
  }
  out["residuals"] = residuals;
  if (r.frame_errors) {
    out["frame_errors"] = {{"T", r.frame_errors->T}, {"N", r.frame_errors->N}, {"B", r.frame_errors->B}};
  }
  json flips = json::array();
  for (const auto& f : r.sign_flips) flips.push_back({{"vector", std::string(1, f.vector)}, {"band", {f.s0, f.s1}}});
  out["sign_flips"] = flips;
  json deltas = json::object();
  for (const auto& [k, m] : r.curvature_deltas) {
    deltas[k] = number(m.value);
    details[k] = measurement(m);
  }
  out["curvature_deltas"] = deltas;
  if (r.distance) {
    out["distance_check"] = number(r.distance->value);
    details["distance"] = measurement(*r.distance);
  }
  out["measurements"] = details;
  json bands = json::array();
  for (const auto& [a, b] : r.excluded_bands) bands.push_back({a, b});
  out["excluded_bands"] = bands;
  out["gated_nodes"] = r.gated_nodes;
  out["undefined_nodes"] = r.undefined_nodes;
  out["tolerances"] = r.tolerances.as_map();
  out["failures"] = r.failures;
  out["flags"] = r.flags;
  out["verdict"] = to_string(r.verdict);
  return out;
}

}  // namespace curvemates::io
