#include "elastica/shooting.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace elastica {

namespace {

constexpr double kFFloor = 1e-12;
constexpr double kPolar = 1e-9;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

double gram3(const Vector& a, const Vector& b, const Vector& c) {
  Eigen::Matrix3d G;
  const Vector* v[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = v[i]->dot(*v[j]);
  return std::max(0.0, G.determinant());
}

// y = [tau, tau', f, chord]
struct Layout {
  int n;
  int size() const { return 3 * n + 1; }
};

Vector full_rhs(const Vector& y, double beta, const Vector& lambda, int n) {
  IVPState s;
  s.tau = y.segment(0, n);
  s.tau_prime = y.segment(n, n);
  s.f = y[2 * n];
  const auto d = ivp_rhs(s, beta, lambda);
  Vector out(3 * n + 1);
  out.segment(0, n) = d.dtau;
  out.segment(n, n) = d.dtau_prime;
  out[2 * n] = d.df;
  out.segment(2 * n + 1, n) = beta * s.tau;
  return out;
}

void project_state(Vector& y, int n) {
  Vector tau = y.segment(0, n);
  tau /= tau.norm();
  Vector tp = y.segment(n, n);
  tp -= tp.dot(tau) * tau;
  y.segment(0, n) = tau;
  y.segment(n, n) = tp;
}

// Orthonormal pair spanning the complement of a unit vector in R^3.
std::pair<Vector, Vector> tangent_basis(const Vector& v) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) < std::abs(v[k])) k = i;
  Vector a = Vector::Unit(3, k);
  Vector u1 = (a - a.dot(v) * v).normalized();
  Eigen::Vector3d w = Eigen::Vector3d(v).cross(Eigen::Vector3d(u1));
  return {u1, Vector(w)};
}

struct Params {
  Vector lambda;
  double log_f0;
  Vector tau1;
};

}  // namespace

IVPDerivative ivp_rhs(const IVPState& state, double beta, const Vector& lambda) {
  if (!(state.f > kFFloor)) throw Error(ErrorKind::SingularState, "f reached the floor at t = " + std::to_string(state.t));
  const Vector& tau = state.tau;
  const Vector& tp = state.tau_prime;
  const double speed2 = tp.squaredNorm();
  IVPDerivative d;
  d.dtau = tp;
  Vector perp = lambda - lambda.dot(tau) * tau;
  const double sn = std::sqrt(speed2);
  if (sn > 1e-14) {
    const Vector w = tp / sn;
    perp -= perp.dot(w) * w;
  }
  d.dtau_prime = -speed2 * tau + (beta / state.f) * speed2 * perp;
  d.df = beta * lambda.dot(tp);
  return d;
}

SphericalState spherical_rhs(const SphericalState& s, double beta) {
  const double st = std::sin(s.vartheta);
  const double ct = std::cos(s.vartheta);
  if (std::abs(st) <= kPolar) throw Error(ErrorKind::CoordinateBreakdown, "polar angle reached the pole");
  if (!(s.f > kFFloor)) throw Error(ErrorKind::SingularState, "f reached the floor");
  const double bf = beta / s.f;
  SphericalState d;
  d.varphi = s.dvarphi;
  d.dvarphi = (bf * s.dvarphi * s.dvartheta * st * st - 2.0 * s.dvarphi * s.dvartheta * ct) / st;
  d.vartheta = s.dvartheta;
  d.dvartheta = s.dvarphi * s.dvarphi * st * ct - bf * s.dvarphi * s.dvarphi * st * st * st;
  d.f = -beta * s.dvartheta * st;
  return d;
}

double conserved_B(const Vector& tau, const Vector& tau_prime, double f, const Vector& lambda) {
  return f * std::sqrt(gram3(lambda, tau, tau_prime));
}

Trajectory integrate_ivp(const IVPState& init, const Vector& lambda, const WeightFunction& alpha, double horizon,
                         const IntegratorOptions& opts) {
  const int n = static_cast<int>(init.tau.size());
  if (init.tau_prime.size() != n || lambda.size() != n)
    throw Error(ErrorKind::Dimension, "state and lambda dimensions differ");
  if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  if (!(init.f > kFFloor)) throw Error(ErrorKind::SingularState, "initial f must be positive");
  if (opts.require_independent) {
    const double k = init.tau_prime.norm();
    if (k == 0.0 || gram3(init.tau, init.tau_prime / k, lambda) < 1e-12)
      throw Error(ErrorKind::InvalidArgument, "tau0, tau1 and lambda must be linearly independent");
  }

  std::vector<double> stops;
  for (double k : alpha.knots())
    if (k > 0.0) {
      const double tk = alpha.psi(k);
      if (tk < horizon) stops.push_back(tk);
    }
  for (double t : opts.outputs)
    if (t > 0.0 && t < horizon) stops.push_back(t);
  stops.push_back(horizon);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  std::vector<double> outs = opts.outputs;
  std::sort(outs.begin(), outs.end());
  const bool record_all = opts.outputs.empty();

  Vector y(3 * n + 1);
  y.segment(0, n) = init.tau.normalized();
  y.segment(n, n) = init.tau_prime;
  y[2 * n] = init.f;
  y.segment(2 * n + 1, n).setZero();
  project_state(y, n);

  Trajectory tr;
  std::vector<Vector> taus, tps;
  auto record = [&](double t) {
    tr.t.push_back(t);
    taus.push_back(y.segment(0, n));
    tps.push_back(y.segment(n, n));
    tr.f.push_back(y[2 * n]);
  };
  const double speed0 = y.segment(n, n).norm();
  const double B0 = conserved_B(y.segment(0, n), y.segment(n, n), y[2 * n], lambda);
  tr.min_f = y[2 * n];
  tr.max_abs_lambda_tau = std::abs(lambda.dot(y.segment(0, n)));
  record(0.0);

  double t = 0.0;
  double h = std::min(1e-2, horizon / 16.0);
  double lo = 0.0;
  std::size_t next_out = 0;
  for (double stop : stops) {
    const double seg = stop - lo;
    auto beta_at = [&](double tv) {
      const double u = std::clamp((tv - lo) / seg, 1e-12, 1.0 - 1e-12);
      return alpha(alpha.phi(lo + u * seg));
    };
    while (t < stop) {
      if (tr.steps >= opts.max_steps) throw Error(ErrorKind::StepSizeFailure, "step limit reached");
      const bool last = (t + h >= stop);
      const double hh = last ? stop - t : h;
      const Vector k1 = full_rhs(y, beta_at(t), lambda, n);
      const Vector k2 = full_rhs(y + hh * a21 * k1, beta_at(t + c2 * hh), lambda, n);
      const Vector k3 = full_rhs(y + hh * (a31 * k1 + a32 * k2), beta_at(t + c3 * hh), lambda, n);
      const Vector k4 = full_rhs(y + hh * (a41 * k1 + a42 * k2 + a43 * k3), beta_at(t + c4 * hh), lambda, n);
      const Vector k5 =
          full_rhs(y + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), beta_at(t + c5 * hh), lambda, n);
      const Vector k6 = full_rhs(y + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5),
                                 beta_at(t + hh), lambda, n);
      const Vector y5 = y + hh * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Vector k7 = full_rhs(y5, beta_at(t + hh), lambda, n);
      const Vector err = hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double en = 0.0;
      for (Eigen::Index i = 0; i < err.size(); ++i)
        en = std::max(en, std::abs(err[i]) / (opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y5[i]))));
      if (!std::isfinite(en)) throw Error(ErrorKind::StepSizeFailure, "non-finite error estimate");
      if (en <= 1.0) {
        y = y5;
        project_state(y, n);
        t = last ? stop : t + hh;
        ++tr.steps;
        const double f = y[2 * n];
        if (!(f > kFFloor)) throw Error(ErrorKind::SingularState, "f reached the floor at t = " + std::to_string(t));
        tr.min_f = std::min(tr.min_f, f);
        tr.max_abs_lambda_tau = std::max(tr.max_abs_lambda_tau, std::abs(lambda.dot(y.segment(0, n))));
        tr.speed_drift = std::max(tr.speed_drift, std::abs(y.segment(n, n).norm() - speed0));
        tr.B_drift = std::max(tr.B_drift, std::abs(conserved_B(y.segment(0, n), y.segment(n, n), f, lambda) - B0));
        tr.sphere_deviation = std::max(tr.sphere_deviation, std::abs(y.segment(0, n).norm() - 1.0));
        if (tr.speed_drift > opts.max_drift || tr.B_drift > opts.max_drift)
          throw Error(ErrorKind::StepSizeFailure, "conserved quantity drifted beyond tolerance");
        if (record_all) {
          record(t);
        } else {
          while (next_out < outs.size() && outs[next_out] <= 0.0) ++next_out;
          if (next_out < outs.size() && std::abs(outs[next_out] - t) <= 1e-14 * std::max(1.0, horizon)) {
            record(t);
            ++next_out;
          } else if (t == horizon && (tr.t.empty() || tr.t.back() != horizon)) {
            record(t);
          }
        }
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (!last) h = hh * fac;
        else h = std::max(h, hh * fac);
      } else {
        h = hh * std::max(0.2, 0.9 * std::pow(en, -0.25));
        if (h < 1e-14 * std::max(1.0, horizon)) throw Error(ErrorKind::StepSizeFailure, "step size underflow");
      }
    }
    lo = stop;
  }
  if (tr.t.back() != horizon) record(horizon);

  const int m = static_cast<int>(tr.t.size());
  tr.tau.resize(n, m);
  tr.tau_prime.resize(n, m);
  for (int i = 0; i < m; ++i) {
    tr.tau.col(i) = taus[i];
    tr.tau_prime.col(i) = tps[i];
  }
  tr.chord = y.segment(2 * n + 1, n);
  return tr;
}

ShootResult shoot_boundary(const ProblemSpec& spec, const ShootGuess& guess, const ShootOptions& opts) {
  spec.validate();
  if (spec.n != 3) throw Error(ErrorKind::Dimension, "shooting is implemented for n = 3");
  if (guess.lambda.size() != 3 || guess.tau1.size() != 3) throw Error(ErrorKind::Dimension, "guess must live in R^3");
  if (!(guess.tau1.norm() > 0.0)) throw Error(ErrorKind::InvalidArgument, "guess needs |tau1| > 0");
  if (!(guess.f0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "guess needs f0 > 0");

  const double L = spec.alpha.psi(spec.length);
  const Vector a = spec.chord();
  const Vector T1 = spec.T1;
  const auto [v1, v2] = tangent_basis(T1);
  const double k_guess = (guess.tau1 - guess.tau1.dot(T1) * T1).norm();

  IntegratorOptions iopt;
  iopt.rtol = opts.rtol;
  iopt.atol = opts.rtol * 1e-2;
  iopt.require_independent = false;
  iopt.max_drift = std::numeric_limits<double>::infinity();
  iopt.max_steps = 200000;

  auto residual = [&](const Params& p) -> Vector {
    Vector r(6);
    try {
      IVPState s{0.0, T1, p.tau1, std::exp(p.log_f0)};
      const Trajectory tr = integrate_ivp(s, p.lambda, spec.alpha, L, iopt);
      r.head(3) = tr.tau.col(tr.tau.cols() - 1) - spec.T2;
      r.tail(3) = tr.chord - a;
    } catch (const Error&) {
      r.setConstant(1e3);
    }
    return r;
  };

  auto solve_from = [&](Params p) {
    Vector r = residual(p);
    double cost = r.squaredNorm();
    double mu = 1e-3;
    for (int it = 0; it < opts.max_iterations && std::sqrt(cost) > opts.tol; ++it) {
      const auto [u1, u2] = tangent_basis(p.lambda);
      auto apply = [&](const Eigen::Matrix<double, 5, 1>& x) {
        Params q;
        q.lambda = (p.lambda + x[0] * u1 + x[1] * u2).normalized();
        q.log_f0 = p.log_f0 + x[2];
        q.tau1 = p.tau1 + x[3] * v1 + x[4] * v2;
        return q;
      };
      Eigen::Matrix<double, 6, 5> J;
      const double hstep[5] = {1e-6, 1e-6, 1e-6, 1e-6 * std::max(1.0, k_guess), 1e-6 * std::max(1.0, k_guess)};
      for (int c = 0; c < 5; ++c) {
        Eigen::Matrix<double, 5, 1> x = Eigen::Matrix<double, 5, 1>::Zero();
        x[c] = hstep[c];
        J.col(c) = (residual(apply(x)) - r) / hstep[c];
      }
      const Eigen::Matrix<double, 5, 5> A = J.transpose() * J;
      const Eigen::Matrix<double, 5, 1> g = J.transpose() * r;
      bool accepted = false;
      while (mu < 1e12) {
        Eigen::Matrix<double, 5, 5> M = A;
        for (int c = 0; c < 5; ++c) M(c, c) += mu * (A(c, c) + 1e-12);
        const Eigen::Matrix<double, 5, 1> dx = M.ldlt().solve(-g);
        const Params q = apply(dx);
        const Vector rq = residual(q);
        const double cq = rq.squaredNorm();
        if (cq < cost) {
          p = q;
          r = rq;
          cost = cq;
          mu = std::max(mu / 3.0, 1e-12);
          accepted = true;
          break;
        }
        mu *= 4.0;
      }
      if (!accepted) break;
    }
    return std::make_pair(p, std::sqrt(cost));
  };

  std::vector<Params> starts(std::max(1, opts.starts));
  starts[0] = {guess.lambda.normalized(), std::log(guess.f0), guess.tau1 - guess.tau1.dot(T1) * T1};
  for (std::size_t j = 1; j < starts.size(); ++j) {
    std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + j);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uni(std::log(0.1), std::log(10.0));
    Vector lam(3);
    for (int c = 0; c < 3; ++c) lam[c] = gauss(rng);
    const double ang = std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(rng);
    starts[j] = {lam.normalized(), uni(rng), k_guess * (std::cos(ang) * v1 + std::sin(ang) * v2)};
  }

  const int count = static_cast<int>(starts.size());
  std::vector<Params> finals(count);
  std::vector<double> defects(count);
#pragma omp parallel for schedule(dynamic, 1) if (opts.parallel)
  for (int j = 0; j < count; ++j) {
    auto [p, d] = solve_from(starts[j]);
    finals[j] = p;
    defects[j] = d;
  }

  auto distance = [&](const Params& p) {
    return (p.lambda - starts[0].lambda).norm() + std::abs(p.log_f0 - starts[0].log_f0) +
           (p.tau1 - starts[0].tau1).norm();
  };
  auto better = [&](int j, int b) {
    const bool oj = defects[j] <= opts.accept;
    const bool ob = defects[b] <= opts.accept;
    if (oj != ob) return oj;
    if (oj) return distance(finals[j]) < distance(finals[b]);
    return defects[j] < defects[b];
  };
  int best = 0;
  for (int j = 1; j < count; ++j)
    if (better(j, best)) best = j;

  ShootResult out;
  out.start_defects = defects;
  out.start_index = best;
  out.defect = defects[best];
  out.converged = out.defect <= opts.accept;
  out.lambda = finals[best].lambda;
  out.f0 = std::exp(finals[best].log_f0);
  out.tau1 = finals[best].tau1;
  out.k = out.tau1.norm();
  {
    IntegratorOptions fopt = iopt;
    const int nodes = 1024;
    for (int i = 1; i < nodes; ++i) fopt.outputs.push_back(L * i / nodes);
    try {
      out.trajectory = integrate_ivp(IVPState{0.0, T1, out.tau1, out.f0}, out.lambda, spec.alpha, L, fopt);
    } catch (const Error& e) {
      out.converged = false;
      out.report = std::string("final integration failed: ") + e.what();
      return out;
    }
  }
  std::ostringstream msg;
  int ok = 0;
  for (double d : defects) ok += d <= opts.accept ? 1 : 0;
  if (out.converged)
    msg << "converged from start " << best << " (" << ok << " of " << count << " starts converged), defect "
        << out.defect;
  else
    msg << "no start converged (best defect " << out.defect << "); no type-ii candidate";
  out.report = msg.str();
  return out;
}

}  // namespace elastica
