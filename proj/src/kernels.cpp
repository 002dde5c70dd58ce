#include "elastica/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace elastica::kernels {

namespace {

inline double cell_norm(const double* data, int dim, int j) {
  const double* a = data + static_cast<std::ptrdiff_t>(j) * dim;
  const double* b = a + dim;
  double acc = 0.0;
  for (int c = 0; c < dim; ++c) {
    const double d = b[c] - a[c];
    acc += d * d;
  }
  return std::sqrt(acc);
}

inline double ipow(double r, double p) {
  if (p == 2.0) return r * r;
  if (r == 0.0) return 0.0;
  return std::pow(r, p);
}

// flux_j / (1/K): (|d_j|/K)^(p-2) * d_j / K, written into out[0..dim)
inline void flux(const double* data, int dim, int j, double dt, double K, double p, double* out) {
  const double* a = data + static_cast<std::ptrdiff_t>(j) * dim;
  const double* b = a + dim;
  const double speed = cell_norm(data, dim, j) / dt;
  const double r = speed / K;
  const double f = (r == 0.0) ? 0.0 : ipow(r, p - 2.0) / (K * dt);
  for (int c = 0; c < dim; ++c) out[c] = f * (b[c] - a[c]);
}

inline int block_count(int items) { return (items + kBlock - 1) / kBlock; }

}  // namespace

namespace serial {

double max_cell_speed(Grid g) {
  double m = 0.0;
  for (int j = 0; j < g.cells; ++j) m = std::max(m, cell_norm(g.data, g.dim, j));
  return m / g.dt;
}

double power_sum(Grid g, double scale, double p) {
  double acc = 0.0;
  for (int j = 0; j < g.cells; ++j) acc += ipow(cell_norm(g.data, g.dim, j) / (g.dt * scale), p);
  return acc;
}

void add_power_mean_gradient(Grid g, double K, double p, double inv_L, double* grad) {
  if (K <= 0.0) return;
  std::vector<double> f(static_cast<std::size_t>(g.dim));
  for (int j = 0; j < g.cells; ++j) {
    flux(g.data, g.dim, j, g.dt, K, p, f.data());
    double* left = grad + static_cast<std::ptrdiff_t>(j) * g.dim;
    double* right = left + g.dim;
    for (int c = 0; c < g.dim; ++c) {
      left[c] -= inv_L * f[c];
      right[c] += inv_L * f[c];
    }
  }
}

void weighted_sum(const double* data, int dim, int nodes, const double* w, double* out) {
  for (int c = 0; c < dim; ++c) out[c] = 0.0;
  for (int i = 0; i < nodes; ++i)
    for (int c = 0; c < dim; ++c) out[c] += w[i] * data[static_cast<std::ptrdiff_t>(i) * dim + c];
}

double weighted_distance2(const double* a, const double* b, int dim, int nodes, const double* w) {
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double d2 = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double d = a[static_cast<std::ptrdiff_t>(i) * dim + c] - b[static_cast<std::ptrdiff_t>(i) * dim + c];
      d2 += d * d;
    }
    acc += w[i] * d2;
  }
  return acc;
}

}  // namespace serial

namespace parallel {

// Small grids are not worth a parallel region.
constexpr int kParallelThreshold = 4 * kBlock;

double max_cell_speed(Grid g) {
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static) if (g.cells >= kParallelThreshold)
  for (int j = 0; j < g.cells; ++j) m = std::max(m, cell_norm(g.data, g.dim, j));
  return m / g.dt;
}

double power_sum(Grid g, double scale, double p) {
  const int blocks = block_count(g.cells);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (g.cells >= kParallelThreshold)
  for (int b = 0; b < blocks; ++b) {
    const int end = std::min(g.cells, (b + 1) * kBlock);
    double acc = 0.0;
    for (int j = b * kBlock; j < end; ++j) acc += ipow(cell_norm(g.data, g.dim, j) / (g.dt * scale), p);
    partial[b] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

void add_power_mean_gradient(Grid g, double K, double p, double inv_L, double* grad) {
  if (K <= 0.0) return;
  const int dim = g.dim;
  std::vector<double> fluxes(static_cast<std::size_t>(g.cells) * dim);
#pragma omp parallel for schedule(static) if (g.cells >= kParallelThreshold)
  for (int j = 0; j < g.cells; ++j) flux(g.data, dim, j, g.dt, K, p, fluxes.data() + static_cast<std::ptrdiff_t>(j) * dim);
  const int nodes = g.cells + 1;
#pragma omp parallel for schedule(static) if (g.cells >= kParallelThreshold)
  for (int i = 0; i < nodes; ++i) {
    double* out = grad + static_cast<std::ptrdiff_t>(i) * dim;
    for (int c = 0; c < dim; ++c) {
      const double in = (i > 0) ? fluxes[static_cast<std::ptrdiff_t>(i - 1) * dim + c] : 0.0;
      const double outgoing = (i < g.cells) ? fluxes[static_cast<std::ptrdiff_t>(i) * dim + c] : 0.0;
      out[c] += inv_L * (in - outgoing);
    }
  }
}

void weighted_sum(const double* data, int dim, int nodes, const double* w, double* out) {
  const int blocks = block_count(nodes);
  std::vector<double> partial(static_cast<std::size_t>(blocks) * dim, 0.0);
#pragma omp parallel for schedule(static) if (nodes >= kParallelThreshold)
  for (int b = 0; b < blocks; ++b) {
    const int end = std::min(nodes, (b + 1) * kBlock);
    double* acc = partial.data() + static_cast<std::ptrdiff_t>(b) * dim;
    for (int i = b * kBlock; i < end; ++i)
      for (int c = 0; c < dim; ++c) acc[c] += w[i] * data[static_cast<std::ptrdiff_t>(i) * dim + c];
  }
  for (int c = 0; c < dim; ++c) out[c] = 0.0;
  for (int b = 0; b < blocks; ++b)
    for (int c = 0; c < dim; ++c) out[c] += partial[static_cast<std::ptrdiff_t>(b) * dim + c];
}

double weighted_distance2(const double* a, const double* b, int dim, int nodes, const double* w) {
  const int blocks = block_count(nodes);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (nodes >= kParallelThreshold)
  for (int blk = 0; blk < blocks; ++blk) {
    const int end = std::min(nodes, (blk + 1) * kBlock);
    double acc = 0.0;
    for (int i = blk * kBlock; i < end; ++i) {
      double d2 = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double d = a[static_cast<std::ptrdiff_t>(i) * dim + c] - b[static_cast<std::ptrdiff_t>(i) * dim + c];
        d2 += d * d;
      }
      acc += w[i] * d2;
    }
    partial[blk] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace parallel

}  // namespace elastica::kernels
