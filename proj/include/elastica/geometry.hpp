#pragma once

// Curves, tangent fields and the change of variable t = psi(s) that turns a
// weighted curvature bound into a plain bound on |tau'|.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "elastica/error.hpp"

namespace elastica {

using Vector = Eigen::VectorXd;
// One column per grid node.
using Field = Eigen::MatrixXd;

enum class Interpolation { PiecewiseConstant, PiecewiseLinear };

/// Positive weight alpha on [0, length], stored as knot samples.
///
/// Piecewise-constant: value[k] holds on [knot[k], knot[k+1]) and the last value
/// extends to the end. Piecewise-linear: linear between knots, constant outside.
class WeightFunction {
 public:
  WeightFunction(std::vector<double> knots, std::vector<double> values, Interpolation interp);

  static WeightFunction constant(double value);

  double operator()(double s) const;

  /// psi(s) = int_0^s dsigma / alpha(sigma), exact for both interpolation kinds.
  double psi(double s) const;
  /// Inverse of psi.
  double phi(double t) const;

  double total_variation() const;
  double min_value() const;
  double max_value() const;
  bool is_constant() const;

  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  Interpolation interpolation() const { return interp_; }

 private:
  // Piece k spans [knots_[k], knots_[k+1]); the last piece is unbounded.
  double piece_integral(std::size_t k, double ds) const;
  double piece_inverse(std::size_t k, double dt) const;
  double slope(std::size_t k) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  Interpolation interp_;
  std::vector<double> psi_at_knot_;
};

struct ProblemSpec {
  int n = 2;
  double length = 1.0;
  Vector a1;
  Vector a2;
  Vector T1;
  Vector T2;
  WeightFunction alpha = WeightFunction::constant(1.0);

  /// Throws InvalidArgument / Infeasible on violated invariants.
  void validate() const;
  Vector chord() const { return a2 - a1; }
};

/// Change of variable sampled on a uniform grid in t.
struct Reparametrization {
  double ell = 0.0;
  double L = 0.0;
  int N = 0;
  WeightFunction alpha = WeightFunction::constant(1.0);
  std::vector<double> t;     // t_i = i L / N
  std::vector<double> s;     // phi(t_i)
  std::vector<double> beta;  // alpha(phi(t_i))

  double dt() const { return L / N; }
  double psi(double sv) const { return alpha.psi(sv); }
  double phi(double tv) const { return alpha.phi(tv); }
  double beta_at(double tv) const { return alpha(alpha.phi(tv)); }
  /// Interior t-values where beta has a kink or jump.
  std::vector<double> beta_breakpoints() const;
  /// Composite trapezoid weights on the t-grid.
  std::vector<double> trapezoid_weights() const;
};

Reparametrization build_reparametrization(const WeightFunction& alpha, double ell, int N);

struct TangentField {
  double L = 0.0;
  Field values;  // dim x (N+1)

  int dim() const { return static_cast<int>(values.rows()); }
  int N() const { return static_cast<int>(values.cols()) - 1; }
  double dt() const { return L / N(); }
  double max_unit_deviation() const;
};

enum class Parametrization { ArcLength, SpeedAlpha };

/// Sampled curve. `s` always holds arc length at the nodes; `param` holds the
/// native parameter (equal to `s` for arc-length curves, t for speed-alpha).
struct Curve {
  std::vector<double> param;
  std::vector<double> s;
  Field points;  // dim x nodes
  Parametrization tag = Parametrization::ArcLength;

  int dim() const { return static_cast<int>(points.rows()); }
  int nodes() const { return static_cast<int>(points.cols()); }
  double length() const { return s.empty() ? 0.0 : s.back() - s.front(); }
};

/// Cumulative trapezoid of beta * tau, starting at a1.
Curve integrate_tangent(const TangentField& tau, const Reparametrization& rep, const Vector& a1);

/// Unit tangent sampled on the rep's t-grid from finite differences of a curve.
TangentField tangent_from_curve(const Curve& gamma, const Reparametrization& rep);

/// int_0^L beta tau dt - a with the trapezoid rule.
Vector chord_residual(const TangentField& tau, const Reparametrization& rep, const Vector& a);

/// Unit tangents at the curve nodes (second-order differences in s, renormalised).
Field curve_tangents(const Curve& gamma);

Vector normalized(const Vector& v);

}  // namespace elastica
