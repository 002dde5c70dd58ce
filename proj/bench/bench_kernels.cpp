// Serial reference vs OpenMP kernels: timing and agreement.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "elastica/kernels.hpp"

namespace k = elastica::kernels;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::micro>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int cells = argc > 1 ? std::atoi(argv[1]) : 1 << 16;
  const int dim = 3;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::vector<double> tau(static_cast<std::size_t>(dim) * (cells + 1));
  for (int i = 0; i <= cells; ++i) {
    double n = 0.0;
    for (int d = 0; d < dim; ++d) n += std::pow(tau[i * dim + d] = gauss(rng), 2);
    for (int d = 0; d < dim; ++d) tau[i * dim + d] /= std::sqrt(n);
  }
  std::vector<double> other(tau.rbegin(), tau.rend());
  std::vector<double> w(cells + 1, 1.0 / cells);
  const k::Grid g{tau.data(), dim, cells, 1.0 / cells};
  const double K = k::serial::max_cell_speed(g);
  std::vector<double> grad_s(tau.size()), grad_p(tau.size());
  double out_s[3], out_p[3];
  volatile double sink = 0.0;

  std::printf("cells=%d dim=%d threads=%d\n", cells, dim, omp_get_max_threads());
  std::printf("%-24s %12s %12s %10s %12s\n", "kernel", "serial_us", "parallel_us", "speedup", "max_diff");
  auto row = [](const char* name, double ts, double tp, double diff) {
    std::printf("%-24s %12.1f %12.1f %10.2f %12.3e\n", name, ts, tp, ts / tp, diff);
  };
  const int reps = 20;
  {
    const double ts = best_of(reps, [&] { sink = k::serial::max_cell_speed(g); });
    const double tp = best_of(reps, [&] { sink = k::parallel::max_cell_speed(g); });
    row("max_cell_speed", ts, tp, std::abs(k::serial::max_cell_speed(g) - k::parallel::max_cell_speed(g)));
  }
  {
    const double ts = best_of(reps, [&] { sink = k::serial::power_sum(g, K, 64.0); });
    const double tp = best_of(reps, [&] { sink = k::parallel::power_sum(g, K, 64.0); });
    const double a = k::serial::power_sum(g, K, 64.0), b = k::parallel::power_sum(g, K, 64.0);
    row("power_sum", ts, tp, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  {
    const double ts = best_of(reps, [&] { k::serial::add_power_mean_gradient(g, K, 64.0, 1.0, grad_s.data()); });
    const double tp = best_of(reps, [&] { k::parallel::add_power_mean_gradient(g, K, 64.0, 1.0, grad_p.data()); });
    std::fill(grad_s.begin(), grad_s.end(), 0.0);
    std::fill(grad_p.begin(), grad_p.end(), 0.0);
    k::serial::add_power_mean_gradient(g, K, 64.0, 1.0, grad_s.data());
    k::parallel::add_power_mean_gradient(g, K, 64.0, 1.0, grad_p.data());
    double diff = 0.0;
    for (std::size_t i = 0; i < grad_s.size(); ++i) diff = std::max(diff, std::abs(grad_s[i] - grad_p[i]));
    row("add_power_mean_gradient", ts, tp, diff);
  }
  {
    const double ts = best_of(reps, [&] { k::serial::weighted_sum(tau.data(), dim, cells + 1, w.data(), out_s); });
    const double tp = best_of(reps, [&] { k::parallel::weighted_sum(tau.data(), dim, cells + 1, w.data(), out_p); });
    double diff = 0.0;
    for (int d = 0; d < dim; ++d) diff = std::max(diff, std::abs(out_s[d] - out_p[d]));
    row("weighted_sum", ts, tp, diff);
  }
  {
    const double ts = best_of(reps, [&] {
      sink = k::serial::weighted_distance2(tau.data(), other.data(), dim, cells + 1, w.data());
    });
    const double tp = best_of(reps, [&] {
      sink = k::parallel::weighted_distance2(tau.data(), other.data(), dim, cells + 1, w.data());
    });
    const double a = k::serial::weighted_distance2(tau.data(), other.data(), dim, cells + 1, w.data());
    const double b = k::parallel::weighted_distance2(tau.data(), other.data(), dim, cells + 1, w.data());
    row("weighted_distance2", ts, tp, std::abs(a - b));
  }
  (void)sink;
  return 0;
}
