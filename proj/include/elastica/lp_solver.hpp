#pragma once

// Minimisation of J_p^mu over unit tangent fields with clamped ends and the
// chord constraint int beta tau = a, plus the p -> infinity continuation.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "elastica/functionals.hpp"
#include "elastica/geometry.hpp"

namespace elastica {

enum class SolverMethod {
  Newton,    // damped sequential quadratic programming on the sphere product
  Gradient,  // projected L-BFGS with an augmented Lagrangian for the chord
};

struct SolverOptions {
  SolverMethod method = SolverMethod::Newton;
  double tol_c = -1.0;  // negative: 1e-8 (1 + |a|)
  double tol_g = 1e-6;
  int max_outer = 30;    // augmented-Lagrangian rounds (gradient method)
  int max_inner = 4000;  // iterations per round, or Newton iterations
  int memory = 12;
  double rho0 = -1.0;  // negative: scaled from the initial curvature and L
  std::uint64_t seed = 0;
  std::ostream* trace = nullptr;  // CSV rows, header written by write_trace_header
  Vector multiplier;              // raw multiplier warm start; empty means zero
};

struct SolverResult {
  TangentField tau;
  TangentField anchor;  // tau0 of the penalty this result minimises
  double p = 2.0;
  double mu = 0.0;
  /// Multiplier in the normalisation of the Euler-Lagrange equation, -L * raw.
  Vector Lambda;
  /// Augmented-Lagrangian multiplier of J - raw . (int beta tau - a).
  Vector Lambda_raw;
  double k_p = 0.0;
  double J = 0.0;
  double el_residual = 0.0;
  double constraint_residual = 0.0;
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string warning;
};

enum class AnchorMode {
  Fixed,     // tau0 is the continuation input for every p
  Proximal,  // tau0 is re-anchored at the current iterate until it stops moving
};

struct ContinuationOptions {
  SolverOptions solver;
  AnchorMode anchor = AnchorMode::Proximal;
  int max_prox_rounds = 8;
  double prox_tol = 1e-6;
};

struct ContinuationResult {
  std::vector<double> schedule;
  std::vector<SolverResult> stages;
  double mu = 0.0;
  double k_inf_estimate = 0.0;
  Vector lambda_estimate;            // Lambda / (1 + |Lambda|) at the last stage
  std::optional<Field> u_estimate;   // cell values, absent when k = 0
  std::vector<double> m_p;           // mu / (1 + |Lambda_p|) per stage
  std::vector<double> lambda_norms;  // |Lambda_p| per stage
  bool monotone = true;
  std::vector<int> monotonicity_violations;  // stage indices j with k_j < k_{j-1} - 1e-6
};

/// Powers of two from 2 to 1024.
std::vector<double> default_schedule();

/// 10 K_2(init), floored so that straight initial fields get a usable weight.
double default_mu(const TangentField& init);

/// Geodesic interpolation from T1 to T2, then a chord-feasibility correction.
TangentField initial_field(const ProblemSpec& spec, int N, std::uint64_t seed = 0);

/// Node-wise normalisation and endpoint clamping.
TangentField project_constraints(const Field& raw, const ProblemSpec& spec, double L);

SolverResult minimize_Jpmu(const ProblemSpec& spec, const PenaltyConfig& cfg, const TangentField& init,
                           const SolverOptions& opts = {});

ContinuationResult continuation_solve(const ProblemSpec& spec, std::optional<double> mu,
                                      std::span<const double> schedule, const TangentField& init,
                                      const ContinuationOptions& opts = {});

void write_trace_header(std::ostream& os);

}  // namespace elastica
