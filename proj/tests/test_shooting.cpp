#include <doctest.h>

#include <cmath>
#include <random>

#include "elastica/families.hpp"
#include "elastica/shooting.hpp"

using namespace elastica;

namespace {

Vector vec3(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

struct Cartesian {
  Vector tau;
  Vector tp;
  Vector tpp;
};

// tau, tau' and tau'' from spherical coordinates about e3 and their time derivatives.
Cartesian from_spherical(const SphericalState& s, double ddphi, double ddtheta) {
  const double sp = std::sin(s.varphi), cp = std::cos(s.varphi);
  const double st = std::sin(s.vartheta), ct = std::cos(s.vartheta);
  const Vector radial = vec3(cp, sp, 0.0);
  const Vector swirl = vec3(-sp, cp, 0.0);
  const Vector e3 = vec3(0.0, 0.0, 1.0);
  const Vector tau = st * radial + ct * e3;
  const Vector t_phi = st * swirl;
  const Vector t_theta = ct * radial - st * e3;
  const Vector t_phiphi = -st * radial;
  const Vector t_phitheta = ct * swirl;
  const Vector t_thetatheta = -tau;
  Cartesian c;
  c.tau = tau;
  c.tp = t_phi * s.dvarphi + t_theta * s.dvartheta;
  c.tpp = t_phi * ddphi + t_theta * ddtheta + t_phiphi * s.dvarphi * s.dvarphi +
          2.0 * t_phitheta * s.dvarphi * s.dvartheta + t_thetatheta * s.dvartheta * s.dvartheta;
  return c;
}

SphericalState axpy(const SphericalState& a, double h, const SphericalState& d) {
  return {a.varphi + h * d.varphi, a.dvarphi + h * d.dvarphi, a.vartheta + h * d.vartheta,
          a.dvartheta + h * d.dvartheta, a.f + h * d.f};
}

// Classical fixed-step RK4 on the spherical system.
SphericalState rk4(SphericalState s, double beta, double T, int steps) {
  const double h = T / steps;
  for (int i = 0; i < steps; ++i) {
    const auto k1 = spherical_rhs(s, beta);
    const auto k2 = spherical_rhs(axpy(s, h / 2, k1), beta);
    const auto k3 = spherical_rhs(axpy(s, h / 2, k2), beta);
    const auto k4 = spherical_rhs(axpy(s, h, k3), beta);
    s.varphi += h / 6 * (k1.varphi + 2 * k2.varphi + 2 * k3.varphi + k4.varphi);
    s.dvarphi += h / 6 * (k1.dvarphi + 2 * k2.dvarphi + 2 * k3.dvarphi + k4.dvarphi);
    s.vartheta += h / 6 * (k1.vartheta + 2 * k2.vartheta + 2 * k3.vartheta + k4.vartheta);
    s.dvartheta += h / 6 * (k1.dvartheta + 2 * k2.dvartheta + 2 * k3.dvartheta + k4.dvartheta);
    s.f += h / 6 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f);
  }
  return s;
}

ProblemSpec helix_problem(const HelixSpec& h, const Vector& shift = Vector::Zero(3)) {
  const Fixture fx = make_helix(h, 256);
  const int M = fx.curve.nodes();
  BoundaryData b{fx.curve.points.col(0), fx.curve.points.col(M - 1) + shift, fx.tangents.col(0),
                 fx.tangents.col(M - 1)};
  return problem_from(b, h.length);
}

}  // namespace

TEST_CASE("ivp_rhs: trivial states") {
  const Vector lam = vec3(0.0, 0.0, 1.0);
  IVPState still{0.0, vec3(1.0, 0.0, 0.0), Vector::Zero(3), 2.0};
  const auto d = ivp_rhs(still, 1.0, lam);
  CHECK(d.dtau.norm() == 0.0);
  CHECK(d.dtau_prime.norm() == 0.0);
  CHECK(d.df == 0.0);

  // lambda in span{tau, tau'}: a great circle
  IVPState flat{0.0, vec3(1.0, 0.0, 0.0), vec3(0.0, 2.0, 0.0), 1.0};
  const auto g = ivp_rhs(flat, 1.0, vec3(0.6, 0.8, 0.0));
  CHECK((g.dtau_prime - vec3(-4.0, 0.0, 0.0)).norm() <= 1e-15);
  CHECK(g.df == doctest::Approx(1.6));

  flat.f = 0.0;
  try {
    ivp_rhs(flat, 1.0, lam);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularState);
  }
}

TEST_CASE("spherical and Cartesian right-hand sides agree") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SphericalState s{3.0 * u(rng), u(rng), 1.5 + 1.2 * u(rng), u(rng), 2.0 + u(rng)};
    const double beta = 1.0 + 0.5 * u(rng);
    const auto d = spherical_rhs(s, beta);
    const Cartesian c = from_spherical(s, d.dvarphi, d.dvartheta);
    const auto r = ivp_rhs(IVPState{0.0, c.tau, c.tp, s.f}, beta, vec3(0.0, 0.0, 1.0));
    CHECK((r.dtau_prime - c.tpp).norm() <= 1e-12 * (1.0 + c.tpp.norm()));
    CHECK(r.df == doctest::Approx(d.f).epsilon(1e-12));
  }
  CHECK_THROWS_AS(spherical_rhs({0.0, 1.0, 0.0, 1.0, 1.0}, 1.0), Error);
}

TEST_CASE("integrator matches an independent RK4 on the spherical system") {
  const SphericalState s0{0.2, 0.9, 1.3, -0.2, 2.5};
  const double T = 2.0;
  const auto end = rk4(s0, 1.0, T, 20000);
  const auto dd = spherical_rhs(s0, 1.0);
  const Cartesian c0 = from_spherical(s0, dd.dvarphi, dd.dvartheta);
  const Trajectory tr = integrate_ivp({0.0, c0.tau, c0.tp, s0.f}, vec3(0.0, 0.0, 1.0), WeightFunction::constant(1.0), T);
  const auto de = spherical_rhs(end, 1.0);
  const Cartesian ce = from_spherical(end, de.dvarphi, de.dvartheta);
  CHECK((tr.tau.col(tr.tau.cols() - 1) - ce.tau).norm() <= 1e-8);
  CHECK((tr.tau_prime.col(tr.tau.cols() - 1) - ce.tp).norm() <= 1e-8);
  CHECK(tr.f.back() == doctest::Approx(end.f).epsilon(1e-8));
  CHECK(tr.t.back() == T);
}

TEST_CASE("speed and B are conserved") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 4; ++trial) {
    const Vector tau = vec3(g(rng), g(rng), g(rng)).normalized();
    Vector tp = vec3(g(rng), g(rng), g(rng));
    tp -= tau.dot(tp) * tau;
    const Vector lam = vec3(g(rng), g(rng), g(rng)).normalized();
    const WeightFunction alpha = trial % 2 ? WeightFunction({0.0, 2.0}, {1.0, 1.6}, Interpolation::PiecewiseConstant)
                                           : WeightFunction::constant(1.0);
    const Trajectory tr = integrate_ivp({0.0, tau, tp, 3.0}, lam, alpha, 6.0);
    CHECK(tr.speed_drift <= 1e-6);
    CHECK(tr.B_drift <= 1e-6);
    CHECK(tr.sphere_deviation <= 1e-9);
    CHECK(tr.min_f > 0.0);
    for (int i = 0; i < tr.tau.cols(); ++i)
      CHECK(std::abs(conserved_B(tr.tau.col(i), tr.tau_prime.col(i), tr.f[i], lam) -
                     conserved_B(tau, tp, 3.0, lam)) <= 1e-6);
  }
}

TEST_CASE("n = 4 trajectories stay in the initial span") {
  Vector tau(4), tp(4), lam(4);
  tau << 1.0, 0.0, 0.0, 0.0;
  tp << 0.0, 0.7, 0.0, 0.0;
  lam << 0.3, 0.2, 0.9, 0.0;
  const Trajectory tr = integrate_ivp({0.0, tau, tp, 2.0}, lam.normalized(), WeightFunction::constant(1.0), 5.0);
  CHECK(tr.tau.row(3).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(tr.tau_prime.row(3).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("output times and invalid inputs") {
  IntegratorOptions opts;
  opts.outputs = {0.5, 1.0, 1.5};
  const Trajectory tr = integrate_ivp({0.0, vec3(1.0, 0.0, 0.0), vec3(0.0, 1.0, 0.0), 2.0}, vec3(0.0, 0.0, 1.0),
                                      WeightFunction::constant(1.0), 2.0, opts);
  CHECK(tr.t == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});

  CHECK_THROWS_AS(integrate_ivp({0.0, vec3(1.0, 0.0, 0.0), vec3(0.0, 1.0, 0.0), 2.0}, vec3(0.0, 1.0, 0.0),
                                WeightFunction::constant(1.0), 1.0),
                  Error);
  CHECK_THROWS_AS(integrate_ivp({0.0, vec3(1.0, 0.0, 0.0), vec3(0.0, 1.0, 0.0), 2.0}, vec3(0.0, 0.0, 1.0),
                                WeightFunction::constant(1.0), -1.0),
                  Error);
}

TEST_CASE("shooting recovers a helix") {
  const HelixSpec h{1.0, M_PI / 3.0, 2.5};
  const ProblemSpec spec = helix_problem(h);
  const double k = std::cos(h.omega);
  const double f0 = std::cos(h.omega) * std::cos(h.omega) / std::sin(h.omega);
  ShootGuess guess{vec3(0.1, 0.05, 1.0).normalized(), 1.2 * f0, vec3(-0.9 * k, 0.0, 0.03)};
  ShootOptions opts;
  opts.starts = 4;
  const ShootResult res = shoot_boundary(spec, guess, opts);
  CHECK(res.converged);
  CHECK(res.defect <= 1e-6);
  CHECK((res.lambda - vec3(0.0, 0.0, 1.0)).norm() <= 1e-4);
  CHECK(res.f0 == doctest::Approx(f0).epsilon(1e-4));
  CHECK(res.k == doctest::Approx(k).epsilon(1e-4));
  CHECK(res.start_defects.size() == 4);
  CHECK(res.trajectory.t.size() == 1025);

  // a slightly displaced end point still has a nearby solution
  const ShootResult moved = shoot_boundary(helix_problem(h, vec3(1e-3, 0.0, 0.0)), guess, opts);
  CHECK(moved.converged);
  CHECK(std::abs(moved.k - k) <= 1e-2);
  CHECK(std::abs(moved.k - k) > 0.0);
}

TEST_CASE("shooting is deterministic and reports failures") {
  const HelixSpec h{1.0, M_PI / 4.0, 2.0};
  const ProblemSpec spec = helix_problem(h);
  ShootGuess guess{vec3(0.0, 0.0, 1.0), 1.0, vec3(-0.5, 0.0, 0.0)};
  ShootOptions opts;
  opts.starts = 3;
  opts.seed = 12;
  const ShootResult a = shoot_boundary(spec, guess, opts);
  opts.parallel = false;
  const ShootResult b = shoot_boundary(spec, guess, opts);
  CHECK(a.start_defects == b.start_defects);
  CHECK(a.lambda == b.lambda);

  opts.max_iterations = 0;
  opts.starts = 1;
  const ShootResult none = shoot_boundary(spec, guess, opts);
  CHECK_FALSE(none.converged);
  CHECK(none.report.find("no type-ii candidate") != std::string::npos);

  ProblemSpec planar = problem_from({Vector::Zero(2), Vector::Ones(2), Vector::Unit(2, 0), Vector::Unit(2, 1)}, 2.0);
  try {
    shoot_boundary(planar, guess, opts);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Dimension);
  }
  guess.f0 = -1.0;
  CHECK_THROWS_AS(shoot_boundary(spec, guess, opts), Error);
}
