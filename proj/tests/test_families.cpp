#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "elastica/families.hpp"
#include "elastica/functionals.hpp"
#include "elastica/residuals.hpp"

using namespace elastica;

namespace {

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

Eigen::Vector2d rot(const Eigen::Vector2d& v, double a) {
  return {std::cos(a) * v[0] - std::sin(a) * v[1], std::sin(a) * v[0] + std::cos(a) * v[1]};
}

struct Pose {
  Eigen::Vector2d p;
  Eigen::Vector2d h;
};

// Drives a turn of angle theta (negative: backwards) with radius R; dir = +1 left, -1 right.
Pose turn(const Pose& s, int dir, double theta, double R) {
  const Eigen::Vector2d n(-s.h[1], s.h[0]);
  const Eigen::Vector2d c = s.p + dir * R * n;
  return {c + rot(-dir * R * n, dir * theta), rot(s.h, dir * theta)};
}

// Shortest length per word from a grid over the two outer angles; the middle
// piece is whatever closes the gap, accepted when the mismatch is within the grid error.
std::map<std::string, double> brute_force_dubins(const BoundaryData& b, double R, int steps) {
  const double dth = 2.0 * M_PI / steps;
  const Pose start{b.a1, b.T1};
  const Pose goal{b.a2, b.T2};
  std::map<std::string, double> best;
  const std::string words[] = {"LSL", "RSR", "LSR", "RSL", "RLR", "LRL"};
  for (const auto& w : words) {
    const int d1 = w[0] == 'L' ? 1 : -1;
    const int d3 = w[2] == 'L' ? 1 : -1;
    double shortest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < steps; ++i) {
      const Pose p1 = turn(start, d1, i * dth, R);
      for (int j = 0; j < steps; ++j) {
        const Pose p2 = turn(goal, d3, -j * dth, R);
        double len = 0.0;
        double mismatch = 0.0;
        if (w[1] == 'S') {
          const Eigen::Vector2d gap = p2.p - p1.p;
          const double along = gap.dot(p1.h);
          if (along < 0.0) continue;
          mismatch = (p1.h - p2.h).norm() * R + std::abs(p1.h[0] * gap[1] - p1.h[1] * gap[0]);
          len = R * (i + j) * dth + along;
        } else {
          const int d2 = -d1;
          // middle angle closing the heading gap, restricted to (pi, 2 pi)
          double a = std::atan2(p1.h[0] * p2.h[1] - p1.h[1] * p2.h[0], p1.h.dot(p2.h)) * d2;
          if (a < 0.0) a += 2.0 * M_PI;
          if (a <= M_PI) continue;
          const Pose mid = turn(p1, d2, a, R);
          mismatch = (mid.p - p2.p).norm();
          len = R * ((i + j) * dth + a);
        }
        if (mismatch <= 4.0 * dth * R) shortest = std::min(shortest, len);
      }
    }
    best[w] = shortest;
  }
  return best;
}

}  // namespace

TEST_CASE("circular arc fixtures") {
  const Fixture a = make_circular_arc(1.0, 2.0 * M_PI / 3.0, 2048);
  CHECK(a.minimiser_certified);
  CHECK(minimiser_certificate_check(a.certificate, a.tangents, WeightFunction::constant(1.0)).pass);

  const Fixture b = make_circular_arc(1.0, M_PI, 2048);
  const auto rb = original_residual(b.curve, b.certificate.scalar, b.certificate.lambda, WeightFunction::constant(1.0), 1.0);
  CHECK(rb.r1 <= 1e-6);
  CHECK(rb.r2 <= 1e-6);
  CHECK(*std::min_element(b.certificate.scalar.begin(), b.certificate.scalar.end()) >= -1e-10);
  CHECK_FALSE(b.minimiser_certified);
  CHECK_FALSE(scan_minimiser_certificates(b.tangents, b.curve.s, WeightFunction::constant(1.0), 1.0).pass);

  const Fixture c = make_circular_arc(2.0, M_PI / 2.0, 2048);
  CHECK(c.certificate.k == doctest::Approx(0.5));
  CHECK(eval_Kalpha(c.curve, WeightFunction::constant(1.0)) == doctest::Approx(0.5).epsilon(1e-4));
  const auto rc = original_residual(c.curve, c.certificate.scalar, c.certificate.lambda, WeightFunction::constant(1.0), 0.5);
  CHECK(rc.r1 <= 1e-6);
  CHECK(rc.r2 <= 1e-6);
  CHECK(c.curve.length() == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
}

TEST_CASE("semicircle triple") {
  const auto tr = make_semicircle_triple(3072);
  CHECK((tr.curve.points.col(0) - vec2(-1.0, 0.0)).norm() <= 1e-15);
  CHECK((tr.curve.points.col(3072) - vec2(1.0, 0.0)).norm() <= 1e-14);
  CHECK((tr.boundary.T1 - vec2(0.0, 1.0)).norm() <= 1e-15);
  CHECK((tr.boundary.T2 - vec2(0.0, -1.0)).norm() <= 1e-14);
  CHECK(tr.curve.length() == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(eval_Kalpha(tr.curve, WeightFunction::constant(1.0)) == doctest::Approx(3.0).epsilon(1e-3));
  CHECK_THROWS_AS(make_semicircle_triple(100), Error);
}

TEST_CASE("comparison length") {
  CHECK(comparison_length(1.0 / 3.0) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(comparison_length(1.0) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(comparison_length(0.5) == doctest::Approx(5.0 * M_PI / 6.0).epsilon(1e-14));
  const double h = 1e-3;
  for (int i = 1; i < 100; ++i) {
    const double r = 1.0 / 3.0 + (2.0 / 3.0) * i / 100.0;
    const double l = comparison_length(r);
    CHECK(l < M_PI);
    if (r - h > 1.0 / 3.0 && r + h < 1.0)
      CHECK(comparison_length(r - h) - 2.0 * l + comparison_length(r + h) > 0.0);
  }
  try {
    comparison_length(0.2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("comparison curves") {
  for (double r : {0.4, 0.5, 0.75, 0.9}) {
    const Curve c = make_comparison_curve(r, 4096);
    CHECK(c.length() == doctest::Approx(M_PI).epsilon(1e-6));
    CHECK(eval_Kalpha(c, WeightFunction::constant(1.0)) == doctest::Approx(1.0 / r).epsilon(1e-3));
    CHECK((c.points.col(0) - vec2(-1.0, 0.0)).norm() <= 1e-12);
    CHECK((c.points.col(4096) - vec2(1.0, 0.0)).norm() <= 1e-12);
    const auto b = boundary_of(comparison_path(r));
    CHECK((b.T1 - vec2(0.0, 1.0)).norm() <= 1e-12);
    CHECK((b.T2 - vec2(0.0, -1.0)).norm() <= 1e-12);
  }
  // near r = 1/3 the curve approaches the triple
  const Curve near = make_comparison_curve(1.0 / 3.0 + 1e-7, 3072);
  const auto tr = make_semicircle_triple(3072);
  CHECK((near.points - tr.curve.points).cwiseAbs().maxCoeff() <= 1e-2);
}

TEST_CASE("helix fixtures") {
  const Fixture a = make_helix({1.0, M_PI / 4.0, 6.0}, 1024);
  CHECK(a.certificate.k == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(std::abs(*a.certificate.eta) <= 1e-15);
  const Fixture b = make_helix({1.0, M_PI / 3.0, 6.0}, 1024);
  CHECK(b.certificate.k == doctest::Approx(0.5));
  CHECK(*b.certificate.eta == doctest::Approx(1.0 / std::sqrt(3.0)));
  for (int i = 0; i <= 1024; ++i) CHECK(Vector::Unit(3, 2).dot(b.tangents.col(i)) == doctest::Approx(std::sin(M_PI / 3.0)));
  CHECK_THROWS_AS(make_helix({1.0, M_PI / 2.0, 1.0}, 16), Error);
}

TEST_CASE("Dubins: known paths are recovered") {
  const auto lsl = PathBuilder(vec2(0.3, -0.2), vec2(0.0, 1.0)).arc(1.0, 0.7).line(2.0).arc(1.0, 1.1).build();
  const auto cands = make_dubins_candidates(boundary_of(lsl), 1.0);
  bool found = false;
  for (const auto& c : cands) {
    if (c.word == "LSL") {
      found = true;
      CHECK(c.length == doctest::Approx(lsl.length()).epsilon(1e-9));
    }
  }
  CHECK(found);

  const BoundaryData straight{vec2(0.0, 0.0), vec2(3.0, 0.0), vec2(1.0, 0.0), vec2(1.0, 0.0)};
  const auto s = make_dubins_candidates(straight, 1.0);
  const auto best = std::find_if(s.begin(), s.end(), [](const DubinsCandidate& c) { return c.shortest; });
  REQUIRE(best != s.end());
  CHECK(best->word == "S");
  CHECK(best->length == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_AS(make_dubins_candidates({Vector::Zero(3), Vector::Ones(3), Vector::Unit(3, 0), Vector::Unit(3, 0)}, 1.0),
                  Error);
}

TEST_CASE("Dubins candidates agree with a brute-force search") {
  std::vector<BoundaryData> cases;
  cases.push_back({vec2(0.0, 0.0), vec2(2.0, 0.0), vec2(0.0, 1.0), vec2(0.0, -1.0)});  // antipodal at 2R
  cases.push_back({vec2(0.0, 0.0), vec2(0.5, 0.3), vec2(1.0, 0.0), vec2(-1.0, 0.0)});
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int k = 0; k < 3; ++k) {
    const double a = ang(rng), b = ang(rng);
    cases.push_back({vec2(0.0, 0.0), vec2(u(rng), u(rng)), vec2(std::cos(a), std::sin(a)), vec2(std::cos(b), std::sin(b))});
  }
  const int steps = 720;
  const double grid_err = 0.1;
  for (const auto& b : cases) {
    const auto cands = make_dubins_candidates(b, 1.0);
    const auto brute = brute_force_dubins(b, 1.0, steps);
    double analytic_best = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) {
      analytic_best = std::min(analytic_best, c.length);
      const std::string w = c.word == "S" ? "LSL" : c.word;
      // every analytic word is also found by the grid, no shorter than the grid allows
      CHECK(brute.at(w) <= c.length + grid_err);
      CHECK((c.path.point_at(c.path.length()) - b.a2).norm() <= 1e-9);
    }
    double brute_best = std::numeric_limits<double>::infinity();
    for (const auto& [w, len] : brute) brute_best = std::min(brute_best, len);
    CHECK(std::abs(brute_best - analytic_best) <= grid_err);
    for (const auto& c : cands)
      if (c.shortest) CHECK(c.length == analytic_best);
  }
}

TEST_CASE("type-i blueprints") {
  TypeIBlueprint fig_a;
  fig_a.start = vec2(0.0, 0.0);
  fig_a.heading = vec2(0.0, 1.0);
  fig_a.radius = 1.0;
  fig_a.moves = {{true, 0.0, -M_PI}, {false, 1.0, 0.0}, {true, 0.0, -M_PI}};
  fig_a.line_point = vec2(0.0, 0.0);
  fig_a.line_dir = vec2(1.0, 0.0);
  fig_a.lambda = vec2(-1.0, 0.0);
  CHECK_THROWS_AS(build_type_i_path(fig_a), Error);  // segment would leave the line: heading is wrong

  // arc - line - arc on the x axis
  TypeIBlueprint aba;
  aba.start = vec2(-1.0, 1.0);
  aba.heading = vec2(0.0, -1.0);
  aba.radius = 1.0;
  aba.moves = {{true, 0.0, M_PI / 2.0}, {false, 2.0, 0.0}, {true, 0.0, -M_PI / 2.0}};
  aba.line_point = vec2(0.0, 0.0);
  aba.line_dir = vec2(1.0, 0.0);
  aba.lambda = vec2(-1.0, 0.0);
  const Curve c = make_type_i_concat(aba, 2048);
  CHECK(c.length() == doctest::Approx(M_PI + 2.0).epsilon(1e-14));
  aba.lambda = vec2(1.0, 0.0);
  CHECK_THROWS_AS(build_type_i_path(aba), Error);

  // alternating arcs touching the line
  TypeIBlueprint alt;
  alt.start = vec2(-1.0, 0.0);
  alt.heading = vec2(0.0, 1.0);
  alt.radius = 1.0 / 3.0;
  alt.moves = {{true, 0.0, -M_PI}, {true, 0.0, M_PI}, {true, 0.0, -M_PI}};
  alt.line_point = vec2(0.0, 0.0);
  alt.line_dir = vec2(1.0, 0.0);
  alt.lambda = vec2(1.0, 0.0);
  CHECK_NOTHROW(build_type_i_path(alt));
  alt.lambda = vec2(-1.0, 0.0);
  CHECK_THROWS_AS(build_type_i_path(alt), Error);

  // a full circle inserted on the line
  TypeIBlueprint loop;
  loop.start = vec2(0.0, 0.0);
  loop.heading = vec2(1.0, 0.0);
  loop.radius = 0.5;
  loop.moves = {{false, 1.0, 0.0}, {true, 0.0, 2.0 * M_PI}, {false, 1.0, 0.0}};
  loop.line_point = vec2(0.0, 0.0);
  loop.line_dir = vec2(1.0, 0.0);
  CHECK_NOTHROW(build_type_i_path(loop));

  // an arc touching the line in its interior is rejected
  TypeIBlueprint touch = aba;
  touch.lambda.reset();
  touch.moves = {{true, 0.0, M_PI}};
  CHECK_THROWS_AS(build_type_i_path(touch), Error);
  touch.moves = {{true, 0.0, M_PI}, {false, 1.0, 0.0}};
  CHECK_THROWS_AS(build_type_i_path(touch), Error);
}

TEST_CASE("paths validate continuity") {
  PiecewisePath p;
  p.pieces.push_back({Segment{vec2(0.0, 0.0), vec2(1.0, 0.0)}});
  p.pieces.push_back({Segment{vec2(1.0, 0.1), vec2(2.0, 0.1)}});
  try {
    p.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidBlueprint);
  }
}

TEST_CASE("rigid motions preserve lengths") {
  const Fixture h = make_helix({1.0, 0.6, 3.0}, 256);
  const Eigen::MatrixXd Q = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1.0, 2.0, 3.0).normalized()).toRotationMatrix();
  const Curve m = rigid_transform(h.curve, Q, Vector::Ones(3));
  for (int i = 0; i < 256; ++i)
    CHECK((m.points.col(i + 1) - m.points.col(i)).norm() ==
          doctest::Approx((h.curve.points.col(i + 1) - h.curve.points.col(i)).norm()).epsilon(1e-13));
}
