#include "elastica/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "elastica/kernels.hpp"
#include "elastica/residuals.hpp"

namespace elastica {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMaxRotation = 0.5;  // largest node rotation allowed in one step (radians)

double frob_dot(const Field& a, const Field& b) { return (a.array() * b.array()).sum(); }

// Augmented Lagrangian J - lam . c + (rho/2)|c|^2 with c = int beta tau - a.
class Merit {
 public:
  Merit(const ProblemSpec& spec, const Reparametrization& rep, const PenaltyConfig& cfg)
      : rep_(rep), cfg_(cfg), a_(spec.chord()), dim_(spec.n) {
    const auto w = rep.trapezoid_weights();
    wb_.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) wb_[i] = w[i] * rep.beta[i];
  }

  struct Value {
    double merit = 0.0;
    double J = 0.0;
    double kp = 0.0;
    Vector c;
  };

  Value evaluate(const Field& X, Field* grad) const {
    const int N = rep_.N;
    const double L = rep_.L;
    const kernels::Grid g{X.data(), dim_, N, rep_.dt()};
    Value v;
    const double m = kernels::active::max_cell_speed(g);
    v.kp = (m == 0.0) ? 0.0 : m * std::pow(kernels::active::power_sum(g, m, cfg_.p) / N, 1.0 / cfg_.p);
    double pen = 0.0;
    if (cfg_.mu != 0.0)
      pen = cfg_.mu / (2.0 * L) *
            kernels::active::weighted_distance2(X.data(), cfg_.tau0.values.data(), dim_, N + 1, wb_.data());
    v.J = v.kp + pen;
    v.c = Vector::Zero(dim_);
    kernels::active::weighted_sum(X.data(), dim_, N + 1, wb_.data(), v.c.data());
    v.c -= a_;
    v.merit = v.J - lam.dot(v.c) + 0.5 * rho * v.c.squaredNorm();
    if (grad) {
      grad->setZero(dim_, N + 1);
      kernels::active::add_power_mean_gradient(g, v.kp, cfg_.p, 1.0 / L, grad->data());
      const Vector cg = -lam + rho * v.c;
      const double pm = cfg_.mu / L;
      for (int i = 0; i <= N; ++i) {
        auto col = grad->col(i);
        col += wb_[i] * cg;
        if (cfg_.mu != 0.0) col += (pm * wb_[i]) * (X.col(i) - cfg_.tau0.values.col(i));
      }
    }
    return v;
  }

  Vector lam;
  double rho = 1.0;

 private:
  const Reparametrization& rep_;
  const PenaltyConfig& cfg_;
  Vector a_;
  int dim_;
  std::vector<double> wb_;
};

// Tangent-space projection at every node; clamped endpoints get zero.
void project_tangent(const Field& X, Field& G) {
  const Eigen::Index last = X.cols() - 1;
  for (Eigen::Index i = 1; i < last; ++i) G.col(i) -= G.col(i).dot(X.col(i)) * X.col(i);
  G.col(0).setZero();
  G.col(last).setZero();
}

double max_col_norm(const Field& G) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < G.cols(); ++i) m = std::max(m, G.col(i).norm());
  return m;
}

Field retract(const Field& X, const Field& D, double step) {
  Field Y = X + step * D;
  for (Eigen::Index i = 1; i + 1 < Y.cols(); ++i) Y.col(i) /= Y.col(i).norm();
  return Y;
}

struct InnerStats {
  int iterations = 0;
  double stationarity = 0.0;
  bool line_search_failed = false;
};

InnerStats lbfgs(const Merit& merit, Field& X, double dt, double tol, int max_iter, int memory,
                 std::ostream* trace, double p, int outer, int& global_iter) {
  InnerStats st;
  Field G;
  auto val = merit.evaluate(X, &G);
  project_tangent(X, G);
  std::deque<Field> S;
  std::deque<Field> Y;
  std::deque<double> R;
  for (;;) {
    st.stationarity = max_col_norm(G) / dt;
    if (st.stationarity <= tol || st.iterations >= max_iter) break;

    Field D = G;
    {
      std::vector<double> a(S.size());
      for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
        a[k] = R[k] * frob_dot(S[k], D);
        D -= a[k] * Y[k];
      }
      double gamma = 1.0;
      if (!S.empty()) gamma = frob_dot(S.back(), Y.back()) / Y.back().squaredNorm();
      D *= gamma;
      for (std::size_t k = 0; k < S.size(); ++k) {
        const double b = R[k] * frob_dot(Y[k], D);
        D += (a[k] - b) * S[k];
      }
      D = -D;
      project_tangent(X, D);
    }
    double slope = frob_dot(G, D);
    if (!(slope < 0.0)) {
      S.clear();
      Y.clear();
      R.clear();
      D = -G;
      slope = -G.squaredNorm();
    }
    double step = 1.0;
    const double dmax = max_col_norm(D);
    if (S.empty()) step = std::min(1.0, 0.05 / std::max(dmax, 1e-300));
    if (step * dmax > kMaxRotation) step = kMaxRotation / dmax;

    Field Xn;
    Merit::Value vn;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Xn = retract(X, D, step);
      vn = merit.evaluate(Xn, nullptr);
      if (vn.merit <= val.merit + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (S.empty()) {
        st.line_search_failed = true;
        break;
      }
      S.clear();
      Y.clear();
      R.clear();
      continue;
    }
    Field Gn;
    vn = merit.evaluate(Xn, &Gn);
    project_tangent(Xn, Gn);
    Field s = Xn - X;
    Field y = Gn - G;
    const double sy = frob_dot(s, y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      R.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > memory) {
        S.pop_front();
        Y.pop_front();
        R.pop_front();
      }
    }
    X = std::move(Xn);
    G = std::move(Gn);
    val = vn;
    ++st.iterations;
    ++global_iter;
    if (trace) {
      *trace << p << ',' << outer << ',' << global_iter << ',' << val.merit << ',' << val.J << ',' << val.kp << ','
             << val.c.norm() << ',' << max_col_norm(G) / dt << ',' << step << '\n';
    }
  }
  return st;
}

using Blk = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
constexpr int kNewtonMaxDim = 9;

// Orthonormal basis of the orthogonal complement of the unit vector x.
Blk complement_basis(const Eigen::Ref<const Vector>& x) {
  const int n = static_cast<int>(x.size());
  Blk B(n, n - 1);
  if (n == 2) {
    B(0, 0) = -x[1];
    B(1, 0) = x[0];
    return B;
  }
  Eigen::Index skip = 0;
  x.cwiseAbs().maxCoeff(&skip);
  int col = 0;
  for (int k = 0; k < n; ++k) {
    if (k == skip) continue;
    SmallVec v = SmallVec::Zero(n);
    v[k] = 1.0;
    v -= x[k] * x;
    for (int j = 0; j < col; ++j) v -= B.col(j).dot(v) * B.col(j);
    B.col(col++) = v.normalized();
  }
  return B;
}

// Reduced Hessian of the Lagrangian in tangent coordinates at the interior
// nodes: block tridiagonal part from the cell terms, the penalty and the
// sphere curvature, minus the rank-one part of the power mean.
class ReducedHessian {
 public:
  ReducedHessian(const Field& X, const Field& G, const Vector& lam, const std::vector<double>& wb, double p, double mu,
                 double L, double dt)
      : n_(static_cast<int>(X.rows())), m_(n_ - 1), nodes_(static_cast<int>(X.cols()) - 2), wb_(wb), dt_(dt) {
    const int cells = nodes_ + 1;
    B_.resize(nodes_);
    for (int k = 0; k < nodes_; ++k) B_[k] = complement_basis(X.col(k + 1));

    Field d(n_, cells);
    std::vector<double> nd(cells);
    double mx = 0.0;
    for (int j = 0; j < cells; ++j) {
      d.col(j) = (X.col(j + 1) - X.col(j)) / dt;
      nd[j] = d.col(j).norm();
      mx = std::max(mx, nd[j]);
    }
    std::vector<double> q(cells, 0.0);
    double K = 0.0;
    if (mx > 0.0) {
      double S = 0.0;
      for (int j = 0; j < cells; ++j) S += std::pow(nd[j] / mx, p);
      K = mx * std::pow(S / cells, 1.0 / p);
      for (int j = 0; j < cells; ++j) q[j] = std::pow(nd[j] / mx, p - 2.0) / (mx * mx * S);
    }
    rank_coef_ = K * (p - 1.0);

    // Reduced cell coupling between node a and node b through cell j.
    auto cell_block = [&](int j, const Blk& Ba, const Blk& Bb) {
      const double s = K * q[j] / (dt * dt);
      Blk out = s * (Ba.transpose() * Bb);
      if (nd[j] > 0.0 && p != 2.0) {
        const SmallVec u = d.col(j) / nd[j];
        const SmallVec ua = Ba.transpose() * u;
        const SmallVec ub = Bb.transpose() * u;
        out += (s * (p - 2.0)) * ua * ub.transpose();
      }
      return out;
    };

    D_.resize(nodes_);
    U_.resize(std::max(nodes_ - 1, 0));
    v_.resize(m_, nodes_);
    scale_ = 0.0;
    for (int k = 0; k < nodes_; ++k) {
      const int i = k + 1;
      const Blk& Bi = B_[k];
      Blk Dk = cell_block(k, Bi, Bi) + cell_block(k + 1, Bi, Bi);
      const double sphere = (G.col(i) - wb[i] * lam).dot(X.col(i));
      Dk.diagonal().array() += (mu / L) * wb[i] - sphere;
      D_[k] = Dk;
      scale_ = std::max(scale_, Dk.diagonal().cwiseAbs().maxCoeff());
      if (k + 1 < nodes_) U_[k] = -cell_block(k + 1, Bi, B_[k + 1]);
      const Vector vi = (q[k] * d.col(k) - q[k + 1] * d.col(k + 1)) / dt;
      v_.col(k) = Bi.transpose() * vi;
    }
    if (!(scale_ > 0.0)) scale_ = 1.0;
  }

  double scale() const { return scale_; }
  int nodes() const { return nodes_; }
  const Blk& basis(int k) const { return B_[k]; }

  // Block Cholesky of the tridiagonal part plus sigma I, then the rank-one
  // update. False when the shifted Hessian is not positive definite.
  bool factor(double sigma) {
    S_.clear();
    W_.clear();
    S_.reserve(nodes_);
    W_.reserve(nodes_);
    for (int k = 0; k < nodes_; ++k) {
      Blk Sk = D_[k];
      Sk.diagonal().array() += sigma;
      if (k > 0) Sk -= U_[k - 1].transpose() * W_[k - 1];
      S_.emplace_back(Sk);
      if (S_.back().info() != Eigen::Success) return false;
      const Blk& Lk = S_.back().matrixLLT();
      if (!Lk.diagonal().allFinite() || Lk.diagonal().minCoeff() <= 0.0) return false;
      if (k + 1 < nodes_) W_.push_back(S_.back().solve(U_[k]));
    }
    Hv_ = solve_tridiagonal(v_);
    const double denom = 1.0 - rank_coef_ * (v_.array() * Hv_.array()).sum();
    if (!(denom > 1e-12)) return false;
    rank_scale_ = rank_coef_ / denom;
    return true;
  }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& r) const {
    Eigen::MatrixXd y = solve_tridiagonal(r);
    if (rank_coef_ != 0.0) y += (rank_scale_ * (v_.array() * y.array()).sum()) * Hv_;
    return y;
  }

  // Reduced form of the ambient nodal vectors w_i lam, i.e. E^T lam.
  Eigen::MatrixXd constraint_transpose(const Vector& lam) const {
    Eigen::MatrixXd out(m_, nodes_);
    for (int k = 0; k < nodes_; ++k) out.col(k) = wb_[k + 1] * (B_[k].transpose() * lam);
    return out;
  }

  Vector constraint_apply(const Eigen::MatrixXd& xi) const {
    Vector out = Vector::Zero(n_);
    for (int k = 0; k < nodes_; ++k) out += wb_[k + 1] * (B_[k] * xi.col(k));
    return out;
  }

  Field lift(const Eigen::MatrixXd& xi) const {
    Field out = Field::Zero(n_, nodes_ + 2);
    for (int k = 0; k < nodes_; ++k) out.col(k + 1) = B_[k] * xi.col(k);
    return out;
  }

  Eigen::MatrixXd reduce(const Field& G) const {
    Eigen::MatrixXd out(m_, nodes_);
    for (int k = 0; k < nodes_; ++k) out.col(k) = B_[k].transpose() * G.col(k + 1);
    return out;
  }

 private:
  Eigen::MatrixXd solve_tridiagonal(const Eigen::MatrixXd& r) const {
    Eigen::MatrixXd y = r;
    for (int k = 1; k < nodes_; ++k) y.col(k) -= W_[k - 1].transpose() * y.col(k - 1);
    for (int k = nodes_ - 1; k >= 0; --k) {
      SmallVec yk = S_[k].solve(SmallVec(y.col(k)));
      if (k + 1 < nodes_) yk -= W_[k] * y.col(k + 1);
      y.col(k) = yk;
    }
    return y;
  }

  int n_;
  int m_;
  int nodes_;
  const std::vector<double>& wb_;
  double dt_;
  std::vector<Blk> B_;
  std::vector<Blk> D_;
  std::vector<Blk> U_;
  std::vector<Eigen::LLT<Blk>> S_;
  std::vector<Blk> W_;
  Eigen::MatrixXd v_;
  Eigen::MatrixXd Hv_;
  double rank_coef_ = 0.0;
  double rank_scale_ = 0.0;
  double scale_ = 1.0;
};

struct NewtonOutcome {
  int iterations = 0;
  double stationarity = 0.0;
  Vector lam;
  bool converged = false;
  bool stalled = false;
};

// Sequential quadratic programming with a Levenberg shift and an l2 merit
// f + nu |c|; each trial point gets one second-order constraint correction.
NewtonOutcome sqp(const Merit& f, const std::vector<double>& wb, const PenaltyConfig& cfg, const Reparametrization& rep,
                  Field& X, Vector lam, double tol_c, double tol_g, int max_iter, std::ostream* trace) {
  NewtonOutcome out;
  const double dt = rep.dt();
  const int n = static_cast<int>(X.rows());
  double shift = 0.0;
  double nu = 0.0;
  int failures = 0;
  Field G;
  auto val = f.evaluate(X, &G);
  for (;;) {
    ReducedHessian H(X, G, lam, wb, cfg.p, cfg.mu, rep.L, dt);
    while (!H.factor(shift * H.scale())) {
      shift = std::max(10.0 * shift, 1e-10);
      if (shift > 1e6) {
        out.stalled = true;
        out.lam = lam;
        return out;
      }
    }
    const Eigen::MatrixXd r = H.reduce(G);
    const Eigen::MatrixXd zr = H.solve(r);
    std::vector<Eigen::MatrixXd> Z(n);
    Eigen::MatrixXd M(n, n);
    for (int l = 0; l < n; ++l) {
      Z[l] = H.solve(H.constraint_transpose(Vector::Unit(n, l)));
      M.col(l) = H.constraint_apply(Z[l]);
    }
    const Eigen::LDLT<Eigen::MatrixXd> Mf(M);
    const Vector lam_new = Mf.solve(H.constraint_apply(zr) - val.c);
    Eigen::MatrixXd xi = -zr;
    for (int l = 0; l < n; ++l) xi += lam_new[l] * Z[l];

    const Eigen::MatrixXd resid = r - H.constraint_transpose(lam_new);
    out.stationarity = std::sqrt(resid.colwise().squaredNorm().maxCoeff()) / dt;
    const double cn = val.c.norm();
    lam = lam_new;
    if (out.stationarity <= tol_g && cn <= tol_c) {
      out.converged = true;
      break;
    }
    if (out.iterations >= max_iter) break;

    nu = std::max(nu, 2.0 * lam.norm() + 1e-12);
    const double phi0 = val.J + nu * cn;
    const double slope = (r.array() * xi.array()).sum() - nu * cn;
    const Field delta = H.lift(xi);
    double step = 1.0;
    const double dmax = max_col_norm(delta);
    if (dmax > kMaxRotation) step = kMaxRotation / dmax;

    auto correct = [&](const Field& Y, const Vector& c) {
      const Vector w = Mf.solve(c);
      Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(xi.rows(), xi.cols());
      for (int l = 0; l < n; ++l) corr -= w[l] * Z[l];
      return retract(Y, H.lift(corr), 1.0);
    };

    const double floor = 1e-12 * (1.0 + std::abs(phi0));
    bool accepted = false;
    Field Xn;
    Merit::Value vn;
    for (int bt = 0; bt < 40; ++bt) {
      Xn = retract(X, delta, step);
      vn = f.evaluate(Xn, nullptr);
      if (vn.c.norm() > tol_c) {
        Xn = correct(Xn, vn.c);
        vn = f.evaluate(Xn, nullptr);
      }
      const double phi = vn.J + nu * vn.c.norm();
      if (phi <= phi0 + kArmijo * step * slope || (slope > -floor && phi <= phi0 + floor)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      shift = std::max(10.0 * shift, 1e-8);
      if (++failures > 40) {
        out.stalled = true;
        break;
      }
      continue;
    }
    shift = shift < 1e-9 ? 0.0 : 0.1 * shift;
    X = std::move(Xn);
    val = f.evaluate(X, &G);
    ++out.iterations;
    if (trace) {
      *trace << cfg.p << ',' << 0 << ',' << out.iterations << ',' << val.J + nu * val.c.norm() << ',' << val.J << ','
             << val.kp << ',' << val.c.norm() << ',' << out.stationarity << ',' << step << '\n';
    }
  }
  out.lam = lam;
  return out;
}

void check_endpoints(const TangentField& init, const ProblemSpec& spec) {
  if (init.dim() != spec.n) throw Error(ErrorKind::Dimension, "initial field has the wrong dimension");
  if ((init.values.col(0) - spec.T1).norm() > 1e-10 || (init.values.col(init.N()) - spec.T2).norm() > 1e-10)
    throw Error(ErrorKind::InvalidArgument, "initial field does not match the end tangents");
  if (!init.values.allFinite()) throw Error(ErrorKind::InvalidArgument, "initial field is not finite");
}

double anchor_distance(const TangentField& a, const TangentField& b, const Reparametrization& rep) {
  const auto w = rep.trapezoid_weights();
  std::vector<double> wb(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) wb[i] = w[i] * rep.beta[i];
  const double d2 = kernels::active::weighted_distance2(a.values.data(), b.values.data(), a.dim(), a.N() + 1, wb.data());
  return std::sqrt(d2 / rep.L);
}

}  // namespace

std::vector<double> default_schedule() {
  std::vector<double> s;
  for (double p = 2.0; p <= 1024.0; p *= 2.0) s.push_back(p);
  return s;
}

double default_mu(const TangentField& init) {
  const double L = std::max(init.L, 1e-12);
  return 10.0 * std::max(eval_Kp(init, 2.0), 1.0 / L);
}

TangentField project_constraints(const Field& raw, const ProblemSpec& spec, double L) {
  if (raw.rows() != spec.n) throw Error(ErrorKind::Dimension, "field has the wrong dimension");
  if (raw.cols() < 2) throw Error(ErrorKind::InsufficientResolution, "field needs at least two nodes");
  TangentField out;
  out.L = L;
  out.values.resize(raw.rows(), raw.cols());
  for (Eigen::Index i = 0; i < raw.cols(); ++i) out.values.col(i) = normalized(raw.col(i));
  out.values.col(0) = spec.T1;
  out.values.col(raw.cols() - 1) = spec.T2;
  return out;
}

TangentField initial_field(const ProblemSpec& spec, int N, std::uint64_t seed) {
  spec.validate();
  const Reparametrization rep = build_reparametrization(spec.alpha, spec.length, N);
  const int n = spec.n;
  const Vector a = spec.chord();
  TangentField tau;
  tau.L = rep.L;
  tau.values.resize(n, N + 1);

  if (a.norm() >= spec.length * (1.0 - 1e-12)) {
    for (int i = 0; i <= N; ++i) tau.values.col(i) = spec.T1;
    return tau;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const Vector& T1 = spec.T1;
  const double c = std::clamp(T1.dot(spec.T2), -1.0, 1.0);
  const double theta = std::acos(c);
  Vector e = spec.T2 - c * T1;
  bool tie = false;
  if (e.norm() < 1e-8) {
    e = a - a.dot(T1) * T1;
    if (e.norm() < 1e-12 * std::max(1.0, a.norm())) {
      tie = true;
      do {
        for (int k = 0; k < n; ++k) e[k] = gauss(rng);
        e -= e.dot(T1) * T1;
      } while (e.norm() < 1e-6);
    }
  }
  if (theta < 1e-12) {
    for (int i = 0; i <= N; ++i) tau.values.col(i) = T1;
  } else {
    e.normalize();
    for (int i = 0; i <= N; ++i) {
      const double ang = theta * rep.t[i] / rep.L;
      tau.values.col(i) = std::cos(ang) * T1 + std::sin(ang) * e;
    }
  }
  tau.values.col(N) = spec.T2;
  if (tie) {
    for (int i = 1; i < N; ++i) {
      Vector v = tau.values.col(i);
      for (int k = 0; k < n; ++k) v[k] += 1e-6 * gauss(rng);
      tau.values.col(i) = v.normalized();
    }
  }

  // Gauss-Newton on a bump-shaped rotation so that the chord constraint holds.
  auto bumped = [&](const Field& base, const Vector& coef) {
    Field out = base;
    for (int i = 1; i < N; ++i) {
      const double b = std::sin(M_PI * rep.t[i] / rep.L);
      Vector v = base.col(i) + b * coef;
      const double nv = v.norm();
      if (nv > 1e-12) out.col(i) = v / nv;
    }
    return out;
  };
  const double tol = 1e-13 * (1.0 + a.norm());
  Field base = tau.values;
  Vector coef = Vector::Zero(n);
  Vector F = chord_residual(tau, rep, a);
  for (int it = 0; it < 30 && F.norm() > tol; ++it) {
    Eigen::MatrixXd Jac(n, n);
    const double h = 1e-7;
    for (int k = 0; k < n; ++k) {
      Vector cp = coef;
      cp[k] += h;
      TangentField tp{rep.L, bumped(base, cp)};
      Jac.col(k) = (chord_residual(tp, rep, a) - F) / h;
    }
    const Vector delta = Jac.completeOrthogonalDecomposition().solve(-F);
    double step = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 30; ++bt) {
      const Vector trial = coef + step * delta;
      TangentField tt{rep.L, bumped(base, trial)};
      const Vector Ft = chord_residual(tt, rep, a);
      if (Ft.norm() < F.norm()) {
        coef = trial;
        F = Ft;
        tau = std::move(tt);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return tau;
}

SolverResult minimize_Jpmu(const ProblemSpec& spec, const PenaltyConfig& cfg, const TangentField& init,
                           const SolverOptions& opts) {
  spec.validate();
  if (cfg.p < 2.0) throw Error(ErrorKind::InvalidArgument, "solver needs p >= 2");
  if (cfg.mu < 0.0) throw Error(ErrorKind::InvalidArgument, "penalty weight must be nonnegative");
  check_endpoints(init, spec);
  const Reparametrization rep = build_reparametrization(spec.alpha, spec.length, init.N());
  if (std::abs(rep.L - init.L) > 1e-9 * rep.L)
    throw Error(ErrorKind::Dimension, "initial field length does not match psi(length)");
  if (cfg.mu != 0.0 && (cfg.tau0.values.rows() != init.values.rows() || cfg.tau0.values.cols() != init.values.cols()))
    throw Error(ErrorKind::Dimension, "penalty anchor grid does not match the initial field");

  const Vector a = spec.chord();
  const double tol_c = opts.tol_c > 0.0 ? opts.tol_c : 1e-8 * (1.0 + a.norm());
  const double dt = rep.dt();

  Merit merit(spec, rep, cfg);
  merit.lam = opts.multiplier.size() == spec.n ? opts.multiplier : Vector::Zero(spec.n);
  Field X = project_constraints(init.values, spec, rep.L).values;
  if (opts.rho0 > 0.0) {
    merit.rho = opts.rho0;
  } else {
    const double kscale = std::max(merit.evaluate(X, nullptr).kp, 1.0 / rep.L);
    merit.rho = 10.0 * kscale / (rep.L * rep.L);
  }

  SolverResult res;
  res.p = cfg.p;
  res.mu = cfg.mu;
  res.anchor = cfg.tau0;
  int total_iter = 0;
  double stationarity = 0.0;
  bool converged = false;
  bool stalled = false;
  if (opts.method == SolverMethod::Newton && spec.n <= kNewtonMaxDim) {
    const auto w = rep.trapezoid_weights();
    std::vector<double> wb(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) wb[i] = w[i] * rep.beta[i];
    Merit f(spec, rep, cfg);
    f.lam = Vector::Zero(spec.n);
    f.rho = 0.0;
    const auto out = sqp(f, wb, cfg, rep, X, merit.lam, tol_c, opts.tol_g, opts.max_inner, opts.trace);
    merit.lam = out.lam;
    total_iter = out.iterations;
    stationarity = out.stationarity;
    converged = out.converged;
    stalled = out.stalled;
  } else {
    double prev_c = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < opts.max_outer; ++outer) {
      const auto st = lbfgs(merit, X, dt, opts.tol_g, opts.max_inner, opts.memory, opts.trace, cfg.p, outer, total_iter);
      stationarity = st.stationarity;
      const Vector c = merit.evaluate(X, nullptr).c;
      const double cn = c.norm();
      const Vector lam_eff = merit.lam - merit.rho * c;
      merit.lam = lam_eff;
      if (cn <= tol_c && stationarity <= opts.tol_g) {
        converged = true;
        break;
      }
      if (cn > 0.25 * prev_c) merit.rho *= 10.0;
      prev_c = cn;
      if (st.line_search_failed && cn <= tol_c) {
        stalled = true;
        break;
      }
    }
  }

  res.tau = TangentField{rep.L, X};
  res.Lambda_raw = merit.lam;
  res.Lambda = -rep.L * merit.lam;
  res.k_p = eval_Kp(res.tau, cfg.p);
  res.J = eval_Jpmu(res.tau, cfg, rep.beta);
  res.constraint_residual = chord_residual(res.tau, rep, a).norm();
  res.stationarity = stationarity;
  res.iterations = total_iter;
  res.converged = converged;
  if (!converged) {
    std::ostringstream msg;
    msg << (stalled ? "line search stalled" : "iteration limit reached") << " at p = " << cfg.p
        << ": constraint " << res.constraint_residual << ", stationarity " << stationarity;
    res.warning = msg.str();
  }
  res.el_residual = euler_lagrange_residual(res, cfg, rep.beta);
  return res;
}

ContinuationResult continuation_solve(const ProblemSpec& spec, std::optional<double> mu,
                                      std::span<const double> schedule, const TangentField& init,
                                      const ContinuationOptions& opts) {
  if (schedule.empty() || schedule.front() != 2.0)
    throw Error(ErrorKind::InvalidArgument, "p schedule must start at 2");
  for (std::size_t j = 1; j < schedule.size(); ++j)
    if (!(schedule[j] > schedule[j - 1])) throw Error(ErrorKind::InvalidArgument, "p schedule must increase");

  const Reparametrization rep = build_reparametrization(spec.alpha, spec.length, init.N());
  ContinuationResult out;
  out.schedule.assign(schedule.begin(), schedule.end());
  out.mu = mu ? *mu : default_mu(init);
  if (out.mu < 0.0) throw Error(ErrorKind::InvalidArgument, "penalty weight must be nonnegative");

  TangentField current = init;
  Vector mult;
  for (double p : schedule) {
    PenaltyConfig cfg{p, out.mu, opts.anchor == AnchorMode::Fixed ? init : current};
    SolverOptions so = opts.solver;
    so.multiplier = mult;
    SolverResult res = minimize_Jpmu(spec, cfg, current, so);
    if (opts.anchor == AnchorMode::Proximal) {
      for (int round = 0; round < opts.max_prox_rounds; ++round) {
        if (anchor_distance(res.tau, cfg.tau0, rep) <= opts.prox_tol) break;
        cfg.tau0 = res.tau;
        so.multiplier = res.Lambda_raw;
        const int prior = res.iterations;
        res = minimize_Jpmu(spec, cfg, res.tau, so);
        res.iterations += prior;
      }
    }
    current = res.tau;
    mult = res.Lambda_raw;
    const double lnorm = res.Lambda.norm();
    out.lambda_norms.push_back(lnorm);
    out.m_p.push_back(out.mu / (1.0 + lnorm));
    out.stages.push_back(std::move(res));
  }

  for (std::size_t j = 1; j < out.stages.size(); ++j) {
    if (out.stages[j].k_p < out.stages[j - 1].k_p - 1e-6) {
      out.monotone = false;
      out.monotonicity_violations.push_back(static_cast<int>(j));
    }
  }
  const SolverResult& last = out.stages.back();
  out.k_inf_estimate = last.k_p;
  out.lambda_estimate = last.Lambda / (1.0 + last.Lambda.norm());
  if (last.k_p > 0.0) {
    PenaltyConfig cfg{last.p, last.mu, last.anchor};
    out.u_estimate = extract_u(last, cfg).u;
  }
  return out;
}

void write_trace_header(std::ostream& os) {
  os << "p,outer,iteration,merit,J,k_p,constraint,stationarity,step\n";
}

}  // namespace elastica
