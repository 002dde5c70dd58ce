#pragma once

// Discrete residuals of the optimality systems, certificate handling and the
// sufficient minimiser test.
//
// Weak forms are tested against hat functions at interior nodes. Each nodal
// pairing is divided by the hat's mass (dt in the rescaled frame, its
// 1/alpha-weighted integral in the original frame) so that values are
// comparable across grids.

#include <optional>
#include <span>
#include <vector>

#include "elastica/functionals.hpp"
#include "elastica/geometry.hpp"
#include "elastica/lp_solver.hpp"

namespace elastica {

enum class Frame {
  Original,  // g on the arc-length grid
  Rescaled,  // f on the t grid
  SystemU,   // u on the t grid
};

struct ElasticaCertificate {
  Vector lambda;
  double k = 0.0;
  Frame frame = Frame::Original;
  std::vector<double> grid;    // s (original) or t (rescaled, system-u)
  std::vector<double> scalar;  // g or f at the grid nodes
  Field u;                     // system-u witness, one column per node or per cell
  std::optional<double> eta;   // constant in g = lambda . T - eta for unit weight
};

struct ResidualPair {
  double r1 = 0.0;
  double r2 = 0.0;
};

struct UExtraction {
  Field u;  // one column per cell
  Vector lambda;
  double m = 0.0;
};

struct MinimiserCheck {
  bool pass = false;
  double margin = 0.0;
};

/// Component of v orthogonal to span{tau, tp}; only tau is used once |tp| < 1e-10.
Vector proj_perp(const Vector& v, const Vector& tau, const Vector& tp);

double euler_lagrange_residual(const SolverResult& res, const PenaltyConfig& cfg, std::span<const double> beta);

/// u_p = k_p^(1-p) |tau'|^(p-2) tau' / (1 + |Lambda_p|) per cell.
UExtraction extract_u(const SolverResult& res, const PenaltyConfig& cfg);

/// u may hold one column per node or one per cell.
ResidualPair system_residual(const TangentField& tau, const Field& u, const Vector& lambda,
                             std::span<const double> beta, double k);

ResidualPair rescaled_residual(const TangentField& tau, std::span<const double> f, const Vector& lambda,
                               std::span<const double> beta, double k);

/// The curve must be parametrised by arc length. Hat functions touching the
/// first or last cell are skipped because their tangents come from one-sided
/// stencils.
ResidualPair original_residual(const Curve& gamma, std::span<const double> g, const Vector& lambda,
                               const WeightFunction& alpha, double k);

/// Pointwise defect of T'' + k^2 T = k^2 proj(lambda) / (lambda . T - eta) at
/// interior nodes where |lambda . T - eta| >= 1e-6.
double alpha1_equation_residual(const Field& T, std::span<const double> s, double k, const Vector& lambda,
                                double eta);

/// Rescaled-frame certificate with |lambda| = 1.
ElasticaCertificate normalize_lambda(const ElasticaCertificate& cert, const TangentField& tau,
                                     std::span<const double> beta);

/// 0 <= g <= -alpha lambda . T at every node; T sampled on cert.grid.
MinimiserCheck minimiser_certificate_check(const ElasticaCertificate& cert, const Field& T,
                                           const WeightFunction& alpha);

struct ScanOptions {
  int angles = 720;             // planar curves
  int sphere_points = 20000;    // curves in R^3
  bool parallel = true;
};

struct ScanResult {
  bool pass = false;
  double margin = -1.0;
  Vector lambda;
  double h = 0.0;
  ElasticaCertificate certificate;  // best candidate, original frame
};

/// Searches lambda over a direction grid for g = h + int alpha lambda . T' that
/// passes minimiser_certificate_check. For fixed lambda the best h is found
/// exactly: h = -min_s int_0^s alpha lambda . T'.
ScanResult scan_minimiser_certificates(const Field& T, std::span<const double> s, const WeightFunction& alpha,
                                       double k, const ScanOptions& opts = {});

/// Least-squares (g(0), lambda) for the original-frame weak form with g' = alpha lambda . T'.
/// Returns |lambda| = 1, sign chosen so that mean g > 0; r1/r2 of the fit in `fit`.
struct CertificateFit {
  ElasticaCertificate certificate;
  ResidualPair fit;
};
CertificateFit fit_certificate(const Curve& gamma, const WeightFunction& alpha, double k);

/// (k ||u/beta||_inf + |lambda|) / (2 ||u||_L1) for a system-u witness on cells.
double pseudo_minimiser_constant(const TangentField& tau, const Field& u, const Vector& lambda,
                                 std::span<const double> beta, double k);

}  // namespace elastica
