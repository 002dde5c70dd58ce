#pragma once

// Initial value problem for helicoidal solutions and shooting for boundary data.
//
//   tau'' + |tau'|^2 tau = beta f^-1 |tau'|^2 proj(lambda),  f' = beta lambda . tau'
//
// where proj is the projection onto the complement of span{tau, tau'}.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elastica/geometry.hpp"

namespace elastica {

struct IVPState {
  double t = 0.0;
  Vector tau;
  Vector tau_prime;
  double f = 1.0;
};

struct IVPDerivative {
  Vector dtau;
  Vector dtau_prime;
  double df = 0.0;
};

/// Throws SingularState when f <= 1e-12.
IVPDerivative ivp_rhs(const IVPState& state, double beta, const Vector& lambda);

/// tau = sin(vartheta) (cos(varphi) e1 + sin(varphi) e2) + cos(vartheta) lambda.
struct SphericalState {
  double varphi = 0.0;
  double dvarphi = 0.0;
  double vartheta = 0.0;
  double dvartheta = 0.0;
  double f = 1.0;
};

/// Time derivative of (varphi, varphi', vartheta, vartheta', f), packed in the
/// same layout. Throws CoordinateBreakdown when sin(vartheta) <= 1e-9.
SphericalState spherical_rhs(const SphericalState& state, double beta);

/// f |varphi'| sin^2(vartheta), written without coordinates as f |lambda ^ tau ^ tau'|.
double conserved_B(const Vector& tau, const Vector& tau_prime, double f, const Vector& lambda);

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_drift = 1e-6;  // StepSizeFailure beyond this
  int max_steps = 2000000;
  bool require_independent = true;
  std::vector<double> outputs;  // record only here (plus 0 and the horizon) when non-empty
};

struct Trajectory {
  std::vector<double> t;
  Field tau;
  Field tau_prime;
  std::vector<double> f;
  Vector chord;  // int_0^horizon beta tau
  double speed_drift = 0.0;
  double B_drift = 0.0;
  double sphere_deviation = 0.0;
  double min_f = 0.0;
  double max_abs_lambda_tau = 0.0;
  int steps = 0;
};

/// Dormand-Prince 5(4) with projection of tau and tau' after each step and
/// steps stopped at the kinks of beta. beta(t) = alpha(phi(t)).
Trajectory integrate_ivp(const IVPState& init, const Vector& lambda, const WeightFunction& alpha, double horizon,
                         const IntegratorOptions& opts = {});

struct ShootGuess {
  Vector lambda;
  double f0 = 1.0;
  Vector tau1;
};

struct ShootOptions {
  int starts = 32;
  std::uint64_t seed = 0;
  int max_iterations = 80;
  double tol = 1e-10;  // target defect
  double accept = 1e-6;
  double rtol = 1e-11;
  bool parallel = true;
};

struct ShootResult {
  bool converged = false;
  Vector lambda;
  double f0 = 0.0;
  Vector tau1;
  double k = 0.0;
  double defect = 0.0;
  int start_index = -1;
  std::vector<double> start_defects;
  Trajectory trajectory;
  std::string report;
};

/// Boundary-value solve for tau(L) = T2 and int beta tau = a2 - a1 from
/// tau(0) = T1. Start 0 is the guess; the others are seeded around it.
ShootResult shoot_boundary(const ProblemSpec& spec, const ShootGuess& guess, const ShootOptions& opts = {});

}  // namespace elastica
