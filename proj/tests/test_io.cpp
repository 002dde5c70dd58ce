#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include "elastica/io.hpp"

using namespace elastica;
namespace fs = std::filesystem;

namespace {

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

Curve tiny_curve() {
  Curve c;
  c.points.resize(2, 3);
  c.points << 0.0, 0.5, 1.0, 0.0, 0.0, 0.0;
  c.s = {0.0, 0.5, 1.0};
  c.param = c.s;
  return c;
}

template <class F>
ErrorKind kind_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

std::string message_of(const Json& j) {
  try {
    run_config_from_json(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("elastica_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ELASTICA_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-3.0) == "-3");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, i % 30 - 15);
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(parse_double(" +2.5 ") == 2.5);
  CHECK(kind_of([] { parse_double("1.5x"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_double(""); }) == ErrorKind::Parse);
}

TEST_CASE("curve CSV golden output and round trip") {
  std::ostringstream os;
  write_curve_csv(os, tiny_curve(), {{"g", {1.0, 0.25, 1.0}}});
  CHECK(os.str() == "s,x1,x2,g\n0,0,0,1\n0.5,0.5,0,0.25\n1,1,0,1\n");

  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  Curve c;
  c.points = Field::NullaryExpr(3, 50, [&] { return g(rng); });
  for (int i = 0; i < 50; ++i) c.s.push_back(i * 0.1);
  c.param = c.s;
  std::stringstream ss;
  write_curve_csv(ss, c);
  const Curve back = curve_from_csv(read_csv(ss));
  CHECK(back.points == c.points);
  CHECK(back.s == c.s);

  std::istringstream ragged("s,x1\n0,1\n0.5\n");
  CHECK(kind_of([&] { read_csv(ragged); }) == ErrorKind::Parse);
  std::istringstream nohead("q,x1\n0,1\n");
  CHECK(kind_of([&] { curve_from_csv(read_csv(nohead)); }) == ErrorKind::Parse);
}

TEST_CASE("JSON round trips") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Curve c;
  c.points = Field::NullaryExpr(2, 20, [&] { return g(rng); });
  for (int i = 0; i < 20; ++i) c.s.push_back(0.05 * i);
  c.param = c.s;
  const Curve back = curve_from_json(Json::parse(to_json(c).dump()));
  CHECK(back.points == c.points);
  CHECK(back.s == c.s);

  ElasticaCertificate cert;
  cert.lambda = vec2(0.3, -0.1 / 3.0);
  cert.k = 1.0 / 7.0;
  cert.frame = Frame::Rescaled;
  cert.grid = {0.0, 0.5, 1.0};
  cert.scalar = {1.0 / 3.0, 2.0, std::sqrt(2.0)};
  cert.eta = 0.1;
  const auto cb = certificate_from_json(Json::parse(to_json(cert).dump()));
  CHECK(cb.lambda == cert.lambda);
  CHECK(cb.k == cert.k);
  CHECK(cb.frame == cert.frame);
  CHECK(cb.grid == cert.grid);
  CHECK(cb.scalar == cert.scalar);
  CHECK(cb.eta == cert.eta);

  CHECK(kind_of([] { vector_from_json(Json::array({1, "x"}), "a1"); }) == ErrorKind::Parse);
}

TEST_CASE("SVG keeps full precision") {
  const Fixture hx = make_helix({1.0, 0.4, 3.0}, 64);
  std::stringstream svg;
  write_svg(svg, hx.curve);
  const auto lines = read_svg_polylines(svg);
  REQUIRE(lines.size() == 2);
  for (int i = 0; i < hx.curve.nodes(); ++i) {
    CHECK(lines[0][i].first == hx.curve.points(0, i));
    CHECK(lines[0][i].second == hx.curve.points(1, i));
    CHECK(lines[1][i].second == hx.curve.points(2, i));
  }
  std::stringstream flat;
  write_svg(flat, tiny_curve());
  CHECK(read_svg_polylines(flat).size() == 1);
}

TEST_CASE("configuration errors name the field") {
  const Json problem = {{"length", 2.0}, {"a1", {0, 0}}, {"a2", {1, 0}}, {"T1", {1, 0}}, {"T2", {1, 0}}};
  const RunConfig ok = run_config_from_json({{"command", "solve"}, {"problem", problem}, {"solver", {{"N", 64}}}});
  CHECK(ok.N == 64);
  REQUIRE(ok.problem.has_value());
  CHECK(ok.problem->length == 2.0);

  CHECK(message_of({{"solver", {{"N", "big"}}}}).find("solver.N") != std::string::npos);
  CHECK(message_of({{"solver", {{"N", 4}}}}).find("solver.N") != std::string::npos);
  CHECK(message_of({{"solver", {{"schedule", {1.0, 2.0}}}}}).find("solver.schedule") != std::string::npos);
  CHECK(message_of({{"seed", "x"}}).find("seed") != std::string::npos);
  CHECK(message_of({{"solver", {{"method", "bfgs"}}}}).find("solver.method") != std::string::npos);
  CHECK(run_config_from_json({{"solver", {{"method", "gradient"}}}}).solver.method == SolverMethod::Gradient);
  Json bad = problem;
  bad.erase("T2");
  CHECK(message_of({{"problem", bad}}).find("problem.T2") != std::string::npos);
  bad = problem;
  bad["alpha"] = {{"knots", {0.0}}, {"values", {-1.0}}};
  CHECK(message_of({{"problem", bad}}).find("problem.alpha") != std::string::npos);

  const fs::path dir = scratch("config");
  write_file(dir / "run.toml", "command = 'solve'\n");
  CHECK(kind_of([&] { load_run_config((dir / "run.toml").string()); }) == ErrorKind::Parse);
  write_file(dir / "broken.json", "{\"command\": ");
  CHECK(kind_of([&] { load_run_config((dir / "broken.json").string()); }) == ErrorKind::Parse);
}

TEST_CASE("CLI exit codes") {
  const fs::path dir = scratch("cli");
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("no-such-command") == 1);
  CHECK(run_cli("family nope --out " + (dir / "x").string()) == 1);

  write_file(dir / "far.json",
             R"({"command": "solve", "problem": {"length": 1.0, "a1": [0, 0], "a2": [3, 0], "T1": [1, 0], "T2": [1, 0]}})");
  CHECK(run_cli("solve --config " + (dir / "far.json").string() + " --out " + (dir / "far").string()) == 2);

  write_file(dir / "line.json", R"({"command": "solve", "solver": {"N": 64, "schedule": [2, 4]},
    "problem": {"length": 2.0, "a1": [0, 0], "a2": [2, 0], "T1": [1, 0], "T2": [1, 0]}})");
  CHECK(run_cli("solve --config " + (dir / "line.json").string() + " --out " + (dir / "line").string()) == 0);
  CHECK(fs::exists(dir / "line" / "solution.csv"));
  CHECK(fs::exists(dir / "line" / "report.json"));

  write_file(dir / "mismatch.json", R"({"command": "shoot"})");
  CHECK(run_cli("solve --config " + (dir / "mismatch.json").string() + " --out " + (dir / "m").string()) == 1);
}

TEST_CASE("CLI family output is byte-identical across runs and verifies") {
  const fs::path dir = scratch("family");
  const std::string a = (dir / "a").string();
  const std::string b = (dir / "b").string();
  REQUIRE(run_cli("family arc r=1 l=2 N=512 --svg --out " + a) == 0);
  REQUIRE(run_cli("family arc r=1 l=2 N=512 --svg --out " + b) == 0);
  for (const char* f : {"curve.csv", "curve.json", "curve.svg", "certificate.json"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  CHECK(run_cli("verify " + a + "/curve.csv " + a + "/certificate.json") == 0);
  CHECK(run_cli("classify " + a + "/curve.csv --out " + a) == 0);

  // the CSV carries the same doubles as the library
  std::ifstream in(dir / "a" / "curve.csv");
  const Curve c = curve_from_csv(read_csv(in));
  CHECK(c.points == make_circular_arc(1.0, 2.0, 512).curve.points);
}
