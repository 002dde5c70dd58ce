#include "elastica/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace elastica {

namespace {

constexpr double kFlatSlope = 1e-14;

void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) throw Error(kind, msg);
}

}  // namespace

WeightFunction::WeightFunction(std::vector<double> knots, std::vector<double> values,
                               Interpolation interp)
    : knots_(std::move(knots)), values_(std::move(values)), interp_(interp) {
  require(!knots_.empty() && knots_.size() == values_.size(), ErrorKind::InvalidWeight,
          "weight needs matching, non-empty knot and value lists");
  require(knots_.front() == 0.0, ErrorKind::InvalidWeight, "first weight knot must be 0");
  for (std::size_t k = 1; k < knots_.size(); ++k)
    require(knots_[k] > knots_[k - 1], ErrorKind::InvalidWeight, "weight knots must increase");
  for (double v : values_)
    require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidWeight,
            "weight values must be positive and finite");
  psi_at_knot_.resize(knots_.size(), 0.0);
  for (std::size_t k = 1; k < knots_.size(); ++k)
    psi_at_knot_[k] = psi_at_knot_[k - 1] + piece_integral(k - 1, knots_[k] - knots_[k - 1]);
}

WeightFunction WeightFunction::constant(double value) {
  return WeightFunction({0.0}, {value}, Interpolation::PiecewiseConstant);
}

double WeightFunction::slope(std::size_t k) const {
  if (interp_ == Interpolation::PiecewiseConstant || k + 1 >= knots_.size()) return 0.0;
  return (values_[k + 1] - values_[k]) / (knots_[k + 1] - knots_[k]);
}

double WeightFunction::piece_integral(std::size_t k, double ds) const {
  const double m = slope(k);
  const double v = values_[k];
  if (std::abs(m) * ds < kFlatSlope * v) return ds / v;
  return std::log1p(m * ds / v) / m;
}

double WeightFunction::piece_inverse(std::size_t k, double dt) const {
  const double m = slope(k);
  const double v = values_[k];
  if (std::abs(m * dt) < kFlatSlope) return v * dt;
  return v * std::expm1(m * dt) / m;
}

double WeightFunction::operator()(double s) const {
  if (s <= knots_.front()) return values_.front();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return values_[k] + slope(k) * (s - knots_[k]);
}

double WeightFunction::psi(double s) const {
  if (s <= 0.0) return s / values_.front();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return psi_at_knot_[k] + piece_integral(k, s - knots_[k]);
}

double WeightFunction::phi(double t) const {
  if (t <= 0.0) return t * values_.front();
  const auto it = std::upper_bound(psi_at_knot_.begin(), psi_at_knot_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - psi_at_knot_.begin()) - 1;
  return knots_[k] + piece_inverse(k, t - psi_at_knot_[k]);
}

double WeightFunction::total_variation() const {
  double tv = 0.0;
  for (std::size_t k = 1; k < values_.size(); ++k) tv += std::abs(values_[k] - values_[k - 1]);
  return tv;
}

double WeightFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double WeightFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

bool WeightFunction::is_constant() const {
  return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

void ProblemSpec::validate() const {
  require(n >= 2, ErrorKind::InvalidArgument, "dimension n must be at least 2");
  require(std::isfinite(length) && length > 0.0, ErrorKind::InvalidArgument, "length must be positive");
  for (const Vector* v : {&a1, &a2, &T1, &T2})
    require(v->size() == n, ErrorKind::Dimension, "boundary vectors must have n components");
  require(std::abs(T1.norm() - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "T1 must be a unit vector");
  require(std::abs(T2.norm() - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "T2 must be a unit vector");
  const double chord = (a2 - a1).norm();
  require(chord <= length * (1.0 + 1e-12), ErrorKind::Infeasible,
          "endpoint distance exceeds the prescribed length");
  if (chord >= length * (1.0 - 1e-12)) {
    const Vector dir = (a2 - a1) / chord;
    require((T1 - dir).norm() <= 1e-9 && (T2 - dir).norm() <= 1e-9, ErrorKind::Infeasible,
            "a chord of full length forces T1 = T2 = (a2 - a1)/|a2 - a1|");
  }
}

std::vector<double> Reparametrization::beta_breakpoints() const {
  std::vector<double> out;
  const auto knots = alpha.knots();
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (knots[k] >= ell) break;
    out.push_back(alpha.psi(knots[k]));
  }
  return out;
}

std::vector<double> Reparametrization::trapezoid_weights() const {
  std::vector<double> w(static_cast<std::size_t>(N) + 1, dt());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

Reparametrization build_reparametrization(const WeightFunction& alpha, double ell, int N) {
  require(N >= 16, ErrorKind::InvalidArgument, "reparametrization needs N >= 16");
  require(ell > 0.0, ErrorKind::InvalidArgument, "length must be positive");
  Reparametrization rep;
  rep.ell = ell;
  rep.N = N;
  rep.alpha = alpha;
  rep.L = alpha.psi(ell);
  rep.t.resize(N + 1);
  rep.s.resize(N + 1);
  rep.beta.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double t = rep.L * i / N;
    rep.t[i] = t;
    rep.s[i] = (i == N) ? ell : alpha.phi(t);
    rep.beta[i] = alpha(rep.s[i]);
  }
  return rep;
}

double TangentField::max_unit_deviation() const {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < values.cols(); ++i)
    dev = std::max(dev, std::abs(values.col(i).norm() - 1.0));
  return dev;
}

Vector normalized(const Vector& v) {
  const double nrm = v.norm();
  require(nrm > 0.0, ErrorKind::ProjectionUndefined, "cannot normalise the zero vector");
  return v / nrm;
}

Curve integrate_tangent(const TangentField& tau, const Reparametrization& rep, const Vector& a1) {
  require(tau.N() == rep.N, ErrorKind::Dimension, "tangent field and reparametrization grids differ");
  require(a1.size() == tau.dim(), ErrorKind::Dimension, "start point has the wrong dimension");
  const int N = rep.N;
  const double h = rep.dt();
  Curve c;
  c.param = rep.t;
  c.s = rep.s;
  c.points.resize(tau.dim(), N + 1);
  c.points.col(0) = a1;
  for (int i = 0; i < N; ++i)
    c.points.col(i + 1) = c.points.col(i) +
                          0.5 * h * (rep.beta[i] * tau.values.col(i) + rep.beta[i + 1] * tau.values.col(i + 1));
  const bool unit_speed = rep.alpha.is_constant() && rep.alpha.values()[0] == 1.0;
  c.tag = unit_speed ? Parametrization::ArcLength : Parametrization::SpeedAlpha;
  return c;
}

Field curve_tangents(const Curve& gamma) {
  const int m = gamma.nodes();
  require(m >= 3, ErrorKind::InsufficientResolution, "curve needs at least 3 nodes");
  const auto& s = gamma.s;
  const auto& P = gamma.points;
  Field T(gamma.dim(), m);
  for (int i = 1; i + 1 < m; ++i) {
    const double h0 = s[i] - s[i - 1];
    const double h1 = s[i + 1] - s[i];
    T.col(i) = -h1 / (h0 * (h0 + h1)) * P.col(i - 1) + (h1 - h0) / (h0 * h1) * P.col(i) +
               h0 / (h1 * (h0 + h1)) * P.col(i + 1);
  }
  {
    const double h0 = s[1] - s[0];
    const double h1 = s[2] - s[1];
    T.col(0) = -(2 * h0 + h1) / (h0 * (h0 + h1)) * P.col(0) + (h0 + h1) / (h0 * h1) * P.col(1) -
               h0 / (h1 * (h0 + h1)) * P.col(2);
  }
  {
    const double h0 = s[m - 2] - s[m - 3];
    const double h1 = s[m - 1] - s[m - 2];
    T.col(m - 1) = h1 / (h0 * (h0 + h1)) * P.col(m - 3) - (h0 + h1) / (h0 * h1) * P.col(m - 2) +
                   (2 * h1 + h0) / (h1 * (h0 + h1)) * P.col(m - 1);
  }
  for (int i = 0; i < m; ++i) {
    const double speed = T.col(i).norm();
    if (std::abs(speed - 1.0) > 1e-3)
      throw Error(ErrorKind::NotArcLength,
                  "curve speed " + std::to_string(speed) + " at node " + std::to_string(i));
    T.col(i) /= speed;
  }
  return T;
}

TangentField tangent_from_curve(const Curve& gamma, const Reparametrization& rep) {
  require(std::abs(gamma.length() - rep.ell) <= 1e-6 * rep.ell, ErrorKind::Dimension,
          "curve length does not match the reparametrization");
  const Field T = curve_tangents(gamma);
  TangentField tau;
  tau.L = rep.L;
  tau.values.resize(gamma.dim(), rep.N + 1);
  const auto& s = gamma.s;
  const double s0 = s.front();
  std::size_t j = 0;
  for (int i = 0; i <= rep.N; ++i) {
    const double target = s0 + rep.s[i];
    while (j + 2 < s.size() && s[j + 1] <= target) ++j;
    const double w = std::clamp((target - s[j]) / (s[j + 1] - s[j]), 0.0, 1.0);
    tau.values.col(i) = normalized((1.0 - w) * T.col(j) + w * T.col(j + 1));
  }
  return tau;
}

Vector chord_residual(const TangentField& tau, const Reparametrization& rep, const Vector& a) {
  require(tau.N() == rep.N, ErrorKind::Dimension, "tangent field and reparametrization grids differ");
  require(a.size() == tau.dim(), ErrorKind::Dimension, "chord vector has the wrong dimension");
  const std::vector<double> w = rep.trapezoid_weights();
  Vector sum = Vector::Zero(tau.dim());
  for (int i = 0; i <= rep.N; ++i) sum += (w[i] * rep.beta[i]) * tau.values.col(i);
  return sum - a;
}

}  // namespace elastica
