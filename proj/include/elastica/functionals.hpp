#pragma once

#include <span>

#include "elastica/geometry.hpp"

namespace elastica {

/// Quadratic anchor term of J_p^mu: (mu / 2L) int beta |tau - tau0|^2.
struct PenaltyConfig {
  double p = 2.0;
  double mu = 0.0;
  TangentField tau0;
};

/// esssup alpha |gamma''| from second differences in arc length.
double eval_Kalpha(const Curve& gamma, const WeightFunction& alpha);

/// |tau_{j+1} - tau_j| / dt for every cell.
std::vector<double> cell_speeds(const TangentField& tau);

/// ((1/L) int |tau'|^p)^(1/p), evaluated as m * (mean (|tau'|/m)^p)^(1/p), m = max |tau'|.
double eval_Kp(const TangentField& tau, double p);

double eval_Kinf(const TangentField& tau);

double eval_Jpmu(const TangentField& tau, const PenaltyConfig& cfg, std::span<const double> beta);

/// Gradient of eval_Jpmu with respect to every node value (no sphere projection).
Field grad_Jpmu(const TangentField& tau, const PenaltyConfig& cfg, std::span<const double> beta);

}  // namespace elastica
