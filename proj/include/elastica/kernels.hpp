#pragma once

// Cell and node loops behind the discrete functionals and the chord constraint.
//
// Fields are column-major dim x nodes arrays, so node i occupies
// data[i*dim .. i*dim+dim). A grid with `cells` cells has cells+1 nodes.
//
// `serial` is the plain reference used by tests and the benchmark. `parallel`
// splits the work into fixed-size blocks whose partial sums are combined in
// block order, so its results do not depend on the thread count.

#include <cstddef>

namespace elastica::kernels {

struct Grid {
  const double* data;
  int dim;
  int cells;
  double dt;
};

namespace serial {
/// max_j |tau_{j+1} - tau_j| / dt
double max_cell_speed(Grid g);
/// sum_j (|tau_{j+1} - tau_j| / (dt * scale))^p
double power_sum(Grid g, double scale, double p);
/// grad[i] += inv_L * (flux_{i-1} - flux_i), flux_j = (|d_j|/K)^(p-2) d_j / K.
void add_power_mean_gradient(Grid g, double K, double p, double inv_L, double* grad);
/// out = sum_i w_i tau_i
void weighted_sum(const double* data, int dim, int nodes, const double* w, double* out);
/// sum_i w_i |a_i - b_i|^2
double weighted_distance2(const double* a, const double* b, int dim, int nodes, const double* w);
}  // namespace serial

namespace parallel {
double max_cell_speed(Grid g);
double power_sum(Grid g, double scale, double p);
void add_power_mean_gradient(Grid g, double K, double p, double inv_L, double* grad);
void weighted_sum(const double* data, int dim, int nodes, const double* w, double* out);
double weighted_distance2(const double* a, const double* b, int dim, int nodes, const double* w);
}  // namespace parallel

/// Cells per block in the parallel kernels.
inline constexpr int kBlock = 256;

/// Backend used by the library.
namespace active = parallel;

}  // namespace elastica::kernels
