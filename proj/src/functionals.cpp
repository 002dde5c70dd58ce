#include "elastica/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "elastica/kernels.hpp"

namespace elastica {

namespace {

kernels::Grid grid_of(const TangentField& tau) {
  return {tau.values.data(), tau.dim(), tau.N(), tau.dt()};
}

std::vector<double> penalty_weights(const TangentField& tau, std::span<const double> beta) {
  if (static_cast<int>(beta.size()) != tau.N() + 1)
    throw Error(ErrorKind::Dimension, "beta samples do not match the tangent grid");
  std::vector<double> w(beta.begin(), beta.end());
  const double h = tau.dt();
  for (double& v : w) v *= h;
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

void check_anchor(const TangentField& tau, const PenaltyConfig& cfg) {
  if (cfg.mu == 0.0) return;
  if (cfg.tau0.values.rows() != tau.values.rows() || cfg.tau0.values.cols() != tau.values.cols())
    throw Error(ErrorKind::Dimension, "penalty anchor grid does not match the tangent field");
}

}  // namespace

double eval_Kalpha(const Curve& gamma, const WeightFunction& alpha) {
  const int m = gamma.nodes();
  if (m < 3) throw Error(ErrorKind::InsufficientResolution, "curvature needs at least 3 nodes");
  const auto& s = gamma.s;
  double k = 0.0;
  for (int i = 1; i + 1 < m; ++i) {
    const double h0 = s[i] - s[i - 1];
    const double h1 = s[i + 1] - s[i];
    const Vector second = 2.0 *
        ((gamma.points.col(i + 1) - gamma.points.col(i)) / h1 - (gamma.points.col(i) - gamma.points.col(i - 1)) / h0) /
        (h0 + h1);
    k = std::max(k, alpha(s[i] - s.front()) * second.norm());
  }
  return k;
}

std::vector<double> cell_speeds(const TangentField& tau) {
  std::vector<double> out(static_cast<std::size_t>(tau.N()));
  const double h = tau.dt();
  for (int j = 0; j < tau.N(); ++j) out[j] = (tau.values.col(j + 1) - tau.values.col(j)).norm() / h;
  return out;
}

double eval_Kp(const TangentField& tau, double p) {
  if (p < 1.0) throw Error(ErrorKind::InvalidArgument, "K_p needs p >= 1");
  const auto g = grid_of(tau);
  const double m = kernels::active::max_cell_speed(g);
  if (m == 0.0) return 0.0;
  const double mean = kernels::active::power_sum(g, m, p) / tau.N();
  return m * std::pow(mean, 1.0 / p);
}

double eval_Kinf(const TangentField& tau) { return kernels::active::max_cell_speed(grid_of(tau)); }

double eval_Jpmu(const TangentField& tau, const PenaltyConfig& cfg, std::span<const double> beta) {
  check_anchor(tau, cfg);
  const double kp = eval_Kp(tau, cfg.p);
  if (cfg.mu == 0.0) return kp;
  const auto w = penalty_weights(tau, beta);
  const double d2 = kernels::active::weighted_distance2(tau.values.data(), cfg.tau0.values.data(), tau.dim(),
                                                        tau.N() + 1, w.data());
  return kp + cfg.mu / (2.0 * tau.L) * d2;
}

Field grad_Jpmu(const TangentField& tau, const PenaltyConfig& cfg, std::span<const double> beta) {
  if (cfg.p < 2.0) throw Error(ErrorKind::InvalidArgument, "gradient needs p >= 2");
  check_anchor(tau, cfg);
  Field grad = Field::Zero(tau.dim(), tau.N() + 1);
  const double kp = eval_Kp(tau, cfg.p);
  kernels::active::add_power_mean_gradient(grid_of(tau), kp, cfg.p, 1.0 / tau.L, grad.data());
  if (cfg.mu != 0.0) {
    const auto w = penalty_weights(tau, beta);
    const double c = cfg.mu / tau.L;
    for (int i = 0; i <= tau.N(); ++i) grad.col(i) += (c * w[i]) * (tau.values.col(i) - cfg.tau0.values.col(i));
  }
  return grad;
}

}  // namespace elastica
