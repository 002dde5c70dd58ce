#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>
#include <vector>

#include "elastica/kernels.hpp"

using namespace elastica;

namespace {

struct Sample {
  int dim;
  int cells;
  double dt;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;
};

Sample random_sample(int dim, int cells, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Sample s{dim, cells, 1.0 / cells, {}, {}, {}};
  const int nodes = cells + 1;
  s.x.resize(static_cast<std::size_t>(dim) * nodes);
  s.y.resize(s.x.size());
  s.w.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    double nx = 0.0;
    for (int c = 0; c < dim; ++c) {
      s.x[i * dim + c] = std::cos(0.01 * i * (c + 1)) + 0.05 * g(rng);
      nx += s.x[i * dim + c] * s.x[i * dim + c];
    }
    for (int c = 0; c < dim; ++c) {
      s.x[i * dim + c] /= std::sqrt(nx);
      s.y[i * dim + c] = g(rng);
    }
    s.w[i] = 0.5 + std::abs(g(rng));
  }
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
  for (int dim : {2, 3, 4}) {
    for (int cells : {1, 17, 255, 256, 257, 3000}) {
      const Sample s = random_sample(dim, cells, 7u * dim + cells);
      const kernels::Grid g{s.x.data(), dim, cells, s.dt};
      const double ms = kernels::serial::max_cell_speed(g);
      CHECK(kernels::parallel::max_cell_speed(g) == ms);
      for (double p : {2.0, 7.5, 1024.0}) {
        const double a = kernels::serial::power_sum(g, ms, p);
        const double b = kernels::parallel::power_sum(g, ms, p);
        CHECK(rel(b, a) <= 1e-13);

        std::vector<double> ga(s.x.size(), 0.0);
        std::vector<double> gb(s.x.size(), 0.0);
        kernels::serial::add_power_mean_gradient(g, 0.9 * ms, p, 0.5, ga.data());
        kernels::parallel::add_power_mean_gradient(g, 0.9 * ms, p, 0.5, gb.data());
        for (std::size_t k = 0; k < ga.size(); ++k) CHECK(rel(gb[k], ga[k]) <= 1e-13);
      }
      std::vector<double> oa(dim), ob(dim);
      kernels::serial::weighted_sum(s.x.data(), dim, cells + 1, s.w.data(), oa.data());
      kernels::parallel::weighted_sum(s.x.data(), dim, cells + 1, s.w.data(), ob.data());
      for (int c = 0; c < dim; ++c) CHECK(rel(ob[c], oa[c]) <= 1e-13);
      const double da = kernels::serial::weighted_distance2(s.x.data(), s.y.data(), dim, cells + 1, s.w.data());
      const double db = kernels::parallel::weighted_distance2(s.x.data(), s.y.data(), dim, cells + 1, s.w.data());
      CHECK(rel(db, da) <= 1e-13);
    }
  }
}

TEST_CASE("parallel kernels are bit-identical for every thread count") {
  const Sample s = random_sample(3, 5000, 42);
  const kernels::Grid g{s.x.data(), 3, 5000, s.dt};
  const int saved = omp_get_max_threads();
  std::vector<double> ref_vals;
  std::vector<double> ref_grad;
  for (int threads : {1, 2, 3, 5, 8}) {
    omp_set_num_threads(threads);
    std::vector<double> vals;
    const double m = kernels::parallel::max_cell_speed(g);
    vals.push_back(m);
    vals.push_back(kernels::parallel::power_sum(g, m, 33.0));
    vals.push_back(kernels::parallel::weighted_distance2(s.x.data(), s.y.data(), 3, 5001, s.w.data()));
    std::vector<double> sum(3);
    kernels::parallel::weighted_sum(s.x.data(), 3, 5001, s.w.data(), sum.data());
    vals.insert(vals.end(), sum.begin(), sum.end());
    std::vector<double> grad(s.x.size(), 0.0);
    kernels::parallel::add_power_mean_gradient(g, m, 33.0, 1.0, grad.data());
    if (ref_vals.empty()) {
      ref_vals = vals;
      ref_grad = grad;
    } else {
      CHECK(vals == ref_vals);
      CHECK(grad == ref_grad);
    }
  }
  omp_set_num_threads(saved);
}

TEST_CASE("power sum of a uniform-speed grid") {
  // a great circle sampled uniformly: every cell has the same chord
  const int cells = 400;
  std::vector<double> x(2 * (cells + 1));
  for (int i = 0; i <= cells; ++i) {
    x[2 * i] = std::cos(i * 0.01);
    x[2 * i + 1] = std::sin(i * 0.01);
  }
  const kernels::Grid g{x.data(), 2, cells, 0.01};
  const double m = kernels::parallel::max_cell_speed(g);
  CHECK(m == doctest::Approx(2.0 * std::sin(0.005) / 0.01).epsilon(1e-12));
  CHECK(kernels::parallel::power_sum(g, m, 1e6) == doctest::Approx(cells).epsilon(1e-6));
}
