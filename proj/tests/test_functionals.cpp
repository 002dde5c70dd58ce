#include <doctest.h>

#include <cmath>
#include <random>

#include "elastica/families.hpp"
#include "elastica/functionals.hpp"

using namespace elastica;

namespace {

TangentField random_smooth_field(int n, int N, double L, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd coef(n, 4);
  for (int c = 0; c < n; ++c)
    for (int k = 0; k < 4; ++k) coef(c, k) = g(rng) / (k + 1);
  TangentField tau;
  tau.L = L;
  tau.values.resize(n, N + 1);
  for (int i = 0; i <= N; ++i) {
    const double t = L * i / N;
    Vector v(n);
    for (int c = 0; c < n; ++c) {
      v[c] = 0.0;
      for (int k = 0; k < 4; ++k) v[c] += coef(c, k) * std::cos(k * t + c);
    }
    tau.values.col(i) = v.normalized();
  }
  return tau;
}

TangentField arc_field(double k, double L, int N) {
  TangentField tau;
  tau.L = L;
  tau.values.resize(2, N + 1);
  for (int i = 0; i <= N; ++i) {
    const double t = L * i / N;
    tau.values.col(i) << std::cos(k * t), std::sin(k * t);
  }
  return tau;
}

std::vector<double> ones(int N) { return std::vector<double>(N + 1, 1.0); }

}  // namespace

TEST_CASE("weighted curvature of fixtures") {
  Curve line;
  line.points.resize(2, 65);
  for (int i = 0; i <= 64; ++i) {
    line.s.push_back(i / 64.0);
    line.points.col(i) << 0.6 * line.s.back(), 0.8 * line.s.back();
  }
  line.param = line.s;
  CHECK(eval_Kalpha(line, WeightFunction::constant(1.0)) <= 1e-10);

  for (double r : {0.5, 1.0, 2.0}) {
    const Fixture arc = make_circular_arc(r, 1.0, 2048);
    CHECK(eval_Kalpha(arc.curve, WeightFunction::constant(1.0)) == doctest::Approx(1.0 / r).epsilon(1e-4));
  }
  const Fixture helix = make_helix({1.0, M_PI / 4.0, 4.0}, 2048);
  CHECK(std::abs(eval_Kalpha(helix.curve, WeightFunction::constant(1.0)) - std::cos(M_PI / 4.0)) <= 1e-4);

  Curve tiny;
  tiny.points = Field::Zero(2, 2);
  tiny.s = {0.0, 1.0};
  tiny.param = tiny.s;
  CHECK_THROWS_AS(eval_Kalpha(tiny, WeightFunction::constant(1.0)), Error);
}

TEST_CASE("K_p examples") {
  const TangentField arc = arc_field(1.7, 1.0, 200);
  const double speed = 2.0 * std::sin(1.7 / 400.0) * 200.0;
  for (double p : {1.0, 2.0, 16.0, 4096.0}) CHECK(eval_Kp(arc, p) == doctest::Approx(speed).epsilon(1e-12));

  TangentField line{1.0, Field::Zero(3, 11)};
  line.values.row(2).setOnes();
  CHECK(eval_Kp(line, 2.0) == 0.0);
  CHECK(eval_Kp(line, 1024.0) == 0.0);
  CHECK(eval_Kinf(line) == 0.0);

  // two cells of length 1/2 with |tau'| = 1 and 3, i.e. chords 0.5 and 1.5
  TangentField two;
  two.L = 1.0;
  two.values.resize(2, 3);
  const double a1 = 2.0 * std::asin(0.25);
  const double a2 = a1 + 2.0 * std::asin(0.75);
  two.values.col(0) << 1.0, 0.0;
  two.values.col(1) << std::cos(a1), std::sin(a1);
  two.values.col(2) << std::cos(a2), std::sin(a2);
  CHECK(eval_Kp(two, 2.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(eval_Kinf(two) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("K_p stays finite for huge exponents") {
  std::mt19937_64 rng(3);
  const TangentField tau = random_smooth_field(3, 300, 2.0, rng);
  const double kinf = eval_Kinf(tau);
  const double big = eval_Kp(tau, std::ldexp(1.0, 20));
  CHECK(std::isfinite(big));
  CHECK(big <= kinf * (1.0 + 1e-12));
  CHECK(big >= kinf * (1.0 - 1e-4));
}

TEST_CASE("K_p is monotone in p and converges to K_inf") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const TangentField tau = random_smooth_field(2 + trial % 3, 500, 3.0, rng);
    double prev = 0.0;
    for (double p = 1.0; p <= 1024.0; p *= 2.0) {
      const double kp = eval_Kp(tau, p);
      CHECK(kp >= prev * (1.0 - 1e-13));
      CHECK(kp <= eval_Kinf(tau) * (1.0 + 1e-13));
      prev = kp;
    }
    // one cell attains the maximum, so K_p >= K_inf N^(-1/p)
    const double kinf = eval_Kinf(tau);
    CHECK(eval_Kp(tau, 1024.0) >= kinf * std::pow(500.0, -1.0 / 1024.0) * (1.0 - 1e-13));
  }
}

TEST_CASE("K_1024 is within 1e-3 of K_inf on nearly uniform-speed fields") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double k = 1.0 + trial * 0.3;
    const double amp = 1e-4 * u(rng);
    const int N = 400;
    TangentField tau;
    tau.L = 2.0;
    tau.values.resize(2, N + 1);
    for (int i = 0; i <= N; ++i) {
      const double t = 2.0 * i / N;
      const double ang = k * t + amp * std::sin(3.0 * t + trial);
      tau.values.col(i) << std::cos(ang), std::sin(ang);
    }
    CHECK(std::abs(eval_Kp(tau, 1024.0) - eval_Kinf(tau)) <= 1e-3);
  }
}

TEST_CASE("semicircle triple has K_inf 3") {
  const auto tr = make_semicircle_triple(3000);
  const auto rep = build_reparametrization(WeightFunction::constant(1.0), M_PI, 3000);
  const TangentField tau = tangent_from_curve(tr.curve, rep);
  CHECK(eval_Kinf(tau) == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(eval_Kalpha(tr.curve, WeightFunction::constant(1.0)) == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("curvature identity between the two frames") {
  const WeightFunction alpha({0.0, 0.8}, {1.0, 2.5}, Interpolation::PiecewiseLinear);
  const Fixture arc = make_circular_arc(1.3, 2.0, 4096);
  const auto rep = build_reparametrization(alpha, 2.0, 4096);
  const TangentField tau = tangent_from_curve(arc.curve, rep);
  CHECK(std::abs(eval_Kalpha(arc.curve, alpha) - eval_Kinf(tau)) <= 1e-3);
}

TEST_CASE("J_p^mu examples") {
  std::mt19937_64 rng(5);
  const TangentField tau = random_smooth_field(2, 64, 1.5, rng);
  const TangentField other = random_smooth_field(2, 64, 1.5, rng);
  const auto beta = ones(64);
  CHECK(eval_Jpmu(tau, {4.0, 0.0, other}, beta) == doctest::Approx(eval_Kp(tau, 4.0)).epsilon(1e-15));
  CHECK(eval_Jpmu(tau, {4.0, 3.0, tau}, beta) == doctest::Approx(eval_Kp(tau, 4.0)).epsilon(1e-15));

  // anchor differs only at node 3 by a unit step: penalty (mu/2L) dt |step|^2
  TangentField anchor = tau;
  anchor.values(0, 3) += 1.0;
  const double dt = 1.5 / 64;
  const double expect = eval_Kp(tau, 4.0) + 2.0 / (2.0 * 1.5) * dt;
  CHECK(eval_Jpmu(tau, {4.0, 2.0, anchor}, beta) == doctest::Approx(expect).epsilon(1e-14));
  // at an end node the trapezoid weight halves
  anchor = tau;
  anchor.values(1, 0) += 1.0;
  CHECK(eval_Jpmu(tau, {4.0, 2.0, anchor}, beta) ==
        doctest::Approx(eval_Kp(tau, 4.0) + 2.0 / (2.0 * 1.5) * 0.5 * dt).epsilon(1e-14));
}

TEST_CASE("gradient examples and finite differences") {
  TangentField line{1.0, Field::Zero(2, 33)};
  line.values.row(0).setOnes();
  CHECK(grad_Jpmu(line, {2.0, 0.0, line}, ones(32)).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(17);
  const TangentField tau = random_smooth_field(3, 24, 1.2, rng);
  const TangentField anchor = random_smooth_field(3, 24, 1.2, rng);
  std::vector<double> beta(25);
  for (int i = 0; i <= 24; ++i) beta[i] = 1.0 + 0.3 * std::sin(i);

  // penalty part vanishes at tau = tau0: compare with the mu = 0 gradient
  const Field g0 = grad_Jpmu(tau, {3.0, 0.0, tau}, beta);
  const Field g1 = grad_Jpmu(tau, {3.0, 5.0, tau}, beta);
  CHECK((g1 - g0).cwiseAbs().maxCoeff() <= 1e-15);

  for (double p : {2.0, 8.0}) {
    const PenaltyConfig cfg{p, 0.7, anchor};
    const Field g = grad_Jpmu(tau, cfg, beta);
    double worst = 0.0;
    for (int i = 0; i <= 24; ++i) {
      for (int c = 0; c < 3; ++c) {
        TangentField a = tau;
        TangentField b = tau;
        a.values(c, i) += 1e-6;
        b.values(c, i) -= 1e-6;
        const double fd = (eval_Jpmu(a, cfg, beta) - eval_Jpmu(b, cfg, beta)) / 2e-6;
        worst = std::max(worst, std::abs(fd - g(c, i)) / std::max(std::abs(fd), 1e-3 * g.cwiseAbs().maxCoeff()));
      }
    }
    CHECK(worst <= 1e-5);
  }
  CHECK_THROWS_AS(grad_Jpmu(tau, {1.5, 0.0, tau}, beta), Error);
}

TEST_CASE("grid mismatches are reported") {
  const TangentField tau = arc_field(1.0, 1.0, 16);
  CHECK_THROWS_AS(eval_Jpmu(tau, {2.0, 1.0, tau}, ones(8)), Error);
  CHECK_THROWS_AS(eval_Jpmu(tau, {2.0, 1.0, arc_field(1.0, 1.0, 8)}, ones(16)), Error);
}
