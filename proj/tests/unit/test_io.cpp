#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>

#include "curvemates/error.hpp"
#include "curvemates/io.hpp"
#include "doctest.h"

using namespace curvemates;
namespace fs = std::filesystem;

namespace {

SampledCurve helix_samples(std::size_t n) {
  return sample_unit_speed(CurveSpec::helix(0.6, 0.8), UniformGrid(0.0, 2.0, n));
}

void require_parse_error(const std::function<void()>& f) {
  try {
    f();
    FAIL("no error thrown");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }
}

}  // namespace

TEST_CASE("numbers round-trip exactly") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 6.02214076e23, 5e-324, -2.718281828459045, 1e-300}) {
    CHECK(io::parse_number(io::format_number(v), "x") == v);
  }
  CHECK(io::format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(std::isnan(io::parse_number("nan", "x")));
  CHECK(std::isinf(io::parse_number(io::format_number(-std::numeric_limits<double>::infinity()), "x")));
  require_parse_error([] { io::parse_number("1.5abc", "x"); });
  require_parse_error([] { io::parse_number("", "x"); });
}

TEST_CASE("curve CSV with frames round-trips") {
  const auto c = helix_samples(41);
  const auto text = io::curve_csv(c);
  const auto back = io::parse_curve_csv(text);
  REQUIRE(back.size() == c.size());
  REQUIRE(back.has_frames());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back.s[i] == c.s[i]);
    CHECK(back.positions[i] == c.positions[i]);
    CHECK(back.frames[i].N == c.frames[i].N);
    CHECK(back.frames[i].tau_prime == c.frames[i].tau_prime);
    CHECK(back.frames[i].kappa_second == c.frames[i].kappa_second);
  }
  CHECK(io::curve_csv(back) == text);
}

TEST_CASE("curve CSV without frames round-trips") {
  auto c = helix_samples(9);
  c.frames.clear();
  const auto text = io::curve_csv(c);
  CHECK(text.substr(0, text.find('\n')) == "s,x,y,z");
  const auto back = io::parse_curve_csv(text);
  CHECK_FALSE(back.has_frames());
  CHECK(io::curve_csv(back) == text);
}

TEST_CASE("curve CSV rejects malformed input") {
  require_parse_error([] { io::parse_curve_csv("s,x,y\n0,1,2\n"); });
  require_parse_error([] { io::parse_curve_csv("s,x,y,z\n0,1,2,3\n0,1,2,4\n"); });
  require_parse_error([] { io::parse_curve_csv("s,x,y,z\n0,1,2\n"); });
  require_parse_error([] { io::parse_curve_csv("s,x,y,z\n0,1,two,3\n"); });
}

TEST_CASE("lambda CSV round-trips with its header") {
  const auto sol = lambda_involute(1.5, UniformGrid(0.0, 1.0, 11));
  const auto text = io::lambda_csv(sol);
  CHECK(text.rfind("# provenance=", 0) == 0);
  const auto back = io::parse_lambda_csv(text);
  CHECK(back.provenance == sol.provenance);
  CHECK(back.method == sol.method);
  CHECK(back.constants == sol.constants);
  CHECK(back.lambda == sol.lambda);
  CHECK(back.lambda_double_prime == sol.lambda_double_prime);
  CHECK(io::lambda_csv(back) == text);
  require_parse_error([&] { io::parse_lambda_csv(text.substr(text.find('\n') + 1)); });
}

TEST_CASE("curve and association JSON round-trip") {
  for (const auto& c : {CurveSpec::circle(2.0), CurveSpec::helix(0.6, 0.8), CurveSpec::elliptic_helix(2, 1, 0.5),
                        CurveSpec::line(Vec3(1, 2, 3), Vec3(0, 0, 1)), CurveSpec::cusp(),
                        CurveSpec::samples({0, 1, 2}, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 1, 0)})}) {
    const auto j = io::to_json(c);
    CHECK(io::to_json(io::curve_from_json(j)) == j);
  }
  const auto spec = AssociationSpec::parse("br", -0.5, 2.0);
  const auto back = io::association_from_json(io::to_json(spec));
  CHECK(back.code() == "BR");
  CHECK(back.p == -0.5);
  CHECK(back.q == 2.0);
  CHECK_THROWS_AS(io::curve_from_json({{"kind", "spiral"}}), Error);
}

TEST_CASE("sampled curve JSON may point at a CSV file") {
  const fs::path dir = fs::temp_directory_path() / "curvemates_io_test";
  fs::create_directories(dir);
  io::write_atomic(dir / "pts.csv", "t,x,y,z\n0,0,0,0\n1,1,0,0\n2,2,1,0\n");
  const auto c = io::curve_from_json({{"kind", "samples"}, {"path", "pts.csv"}}, dir);
  REQUIRE(c.is_sampled());
  CHECK(c.domain().second == 2.0);
  CHECK_FALSE(fs::exists(dir / "pts.csv.tmp"));
  CHECK(io::read_file(dir / "pts.csv").size() == 32);
  fs::remove_all(dir);
}
