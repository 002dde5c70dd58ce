#include "elastica/residuals.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace elastica {

namespace {

constexpr double kDegenerateSpeed = 1e-10;

void require(bool ok, ErrorKind kind, const char* msg) {
  if (!ok) throw Error(kind, msg);
}

double midpoint_beta(std::span<const double> beta, int j) { return 0.5 * (beta[j] + beta[j + 1]); }

Vector cell_derivative(const Field& X, int j, double dt) { return (X.col(j + 1) - X.col(j)) / dt; }

// Nodal weak-form pairings of the original-frame equation for hats at nodes
// 2..M-3, each divided by the hat's 1/alpha mass. Columns outside that range stay zero.
Field original_pairings(const Field& T, std::span<const double> s, std::span<const double> g, const Vector& lambda,
                        const WeightFunction& alpha, double k) {
  const int M = static_cast<int>(T.cols());
  const int n = static_cast<int>(T.rows());
  const double s0 = s.front();
  const double k2 = k * k;
  Field R = Field::Zero(n, M);
  std::vector<double> h(M - 1), am(M - 1);
  Field Tp(n, M - 1);
  for (int j = 0; j + 1 < M; ++j) {
    h[j] = s[j + 1] - s[j];
    am[j] = alpha(0.5 * (s[j] + s[j + 1]) - s0);
    Tp.col(j) = (T.col(j + 1) - T.col(j)) / h[j];
  }
  for (int i = 2; i + 2 < M; ++i) {
    const double ai = alpha(s[i] - s0);
    const double mass = 0.5 * (h[i - 1] + h[i]);
    const double gl = 0.5 * (g[i - 1] + g[i]);
    const double gr = 0.5 * (g[i] + g[i + 1]);
    Vector r = gl * am[i - 1] * Tp.col(i - 1) - gr * am[i] * Tp.col(i);
    r += 0.5 * ((g[i] - g[i - 1]) * am[i - 1] * Tp.col(i - 1) + (g[i + 1] - g[i]) * am[i] * Tp.col(i));
    const Vector tp = 0.5 * (Tp.col(i - 1) + Tp.col(i));
    r += mass * (-k2 * g[i] / ai * T.col(i) + k2 * proj_perp(lambda, T.col(i), tp));
    const double norm = (k2 > 0.0 ? k2 : 1.0) * mass / ai;
    R.col(i) = r / norm;
  }
  return R;
}

std::vector<Vector> direction_grid(int n, const ScanOptions& opts) {
  std::vector<Vector> dirs;
  if (n == 2) {
    dirs.reserve(opts.angles);
    for (int j = 0; j < opts.angles; ++j) {
      const double th = 2.0 * M_PI * j / opts.angles;
      Vector v(2);
      v << std::cos(th), std::sin(th);
      dirs.push_back(v);
    }
  } else if (n == 3) {
    const int m = opts.sphere_points;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    dirs.reserve(m);
    for (int j = 0; j < m; ++j) {
      const double z = 1.0 - (2.0 * j + 1.0) / m;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double th = golden * j;
      Vector v(3);
      v << r * std::cos(th), r * std::sin(th), z;
      dirs.push_back(v);
    }
  } else {
    throw Error(ErrorKind::Dimension, "certificate scan supports n = 2 and n = 3");
  }
  return dirs;
}

// Cumulative int_0^s alpha lambda . T' with midpoint alpha on each cell.
std::vector<double> cumulative_g(const Field& T, std::span<const double> s, const WeightFunction& alpha,
                                 const Vector& lambda) {
  const int M = static_cast<int>(T.cols());
  std::vector<double> G(M, 0.0);
  for (int j = 0; j + 1 < M; ++j)
    G[j + 1] = G[j] + alpha(0.5 * (s[j] + s[j + 1]) - s.front()) * lambda.dot(T.col(j + 1) - T.col(j));
  return G;
}

// Best margin min G - max(G + alpha lambda . T) for one direction.
double scan_margin(const Field& T, std::span<const double> s, std::span<const double> a_nodes,
                   std::span<const double> a_mid, const Vector& lambda) {
  const int M = static_cast<int>(T.cols());
  double G = 0.0;
  double gmin = 0.0;
  double upper = a_nodes[0] * lambda.dot(T.col(0));
  for (int j = 0; j + 1 < M; ++j) {
    G += a_mid[j] * lambda.dot(T.col(j + 1) - T.col(j));
    gmin = std::min(gmin, G);
    upper = std::max(upper, G + a_nodes[j + 1] * lambda.dot(T.col(j + 1)));
  }
  (void)s;
  return gmin - upper;
}

}  // namespace

Vector proj_perp(const Vector& v, const Vector& tau, const Vector& tp) {
  Vector out = v - v.dot(tau) * tau;
  Vector w = tp - tp.dot(tau) * tau;
  const double wn = w.norm();
  if (wn < kDegenerateSpeed) return out;
  w /= wn;
  return out - out.dot(w) * w;
}

double euler_lagrange_residual(const SolverResult& res, const PenaltyConfig& cfg, std::span<const double> beta) {
  const TangentField& tau = res.tau;
  const int N = tau.N();
  require(static_cast<int>(beta.size()) == N + 1, ErrorKind::Dimension, "beta samples do not match the grid");
  require(cfg.p >= 2.0, ErrorKind::InvalidArgument, "Euler-Lagrange residual needs p >= 2");
  const double dt = tau.dt();
  const double k = res.k_p;
  const double p = cfg.p;
  const Vector& Lam = res.Lambda;
  const bool anchored = cfg.mu != 0.0;
  if (anchored)
    require(cfg.tau0.values.cols() == N + 1, ErrorKind::Dimension, "penalty anchor grid does not match");

  // Fluxes and |tau'|^p, both divided by k^(p-1).
  Field F = Field::Zero(tau.dim(), N);
  std::vector<double> P(N, 0.0);
  if (k > 0.0) {
    for (int j = 0; j < N; ++j) {
      const Vector d = cell_derivative(tau.values, j, dt);
      const double r = d.norm() / k;
      if (r == 0.0) continue;
      const double rp2 = std::pow(r, p - 2.0);
      F.col(j) = rp2 * d / k;
      P[j] = k * rp2 * r * r;
    }
  }
  double worst = 0.0;
  for (int i = 1; i < N; ++i) {
    const Vector t = tau.values.col(i);
    Vector rhs = Lam - Lam.dot(t) * t;
    if (anchored) {
      const Vector t0 = cfg.tau0.values.col(i);
      rhs -= res.mu * (t0 - t0.dot(t) * t);
    }
    const Vector r = (F.col(i) - F.col(i - 1)) + 0.5 * dt * (P[i - 1] + P[i]) * t - dt * beta[i] * rhs;
    worst = std::max(worst, r.norm());
  }
  return worst / (dt * (1.0 + Lam.norm()));
}

UExtraction extract_u(const SolverResult& res, const PenaltyConfig& cfg) {
  const double k = res.k_p;
  if (!(k > 0.0)) throw Error(ErrorKind::DegenerateExtraction, "k_p = 0: u is undefined for a straight field");
  const TangentField& tau = res.tau;
  const int N = tau.N();
  const double dt = tau.dt();
  const double scale = 1.0 / (1.0 + res.Lambda.norm());
  UExtraction out;
  out.u.resize(tau.dim(), N);
  for (int j = 0; j < N; ++j) {
    const Vector d = cell_derivative(tau.values, j, dt);
    const double r = d.norm() / k;
    out.u.col(j) = (r == 0.0) ? Vector::Zero(tau.dim()) : Vector(std::pow(r, cfg.p - 2.0) * (d / k) * scale);
  }
  out.lambda = res.Lambda * scale;
  out.m = cfg.mu * scale;
  return out;
}

ResidualPair system_residual(const TangentField& tau, const Field& u, const Vector& lambda,
                             std::span<const double> beta, double k) {
  const int N = tau.N();
  const double dt = tau.dt();
  require(static_cast<int>(beta.size()) == N + 1, ErrorKind::Dimension, "beta samples do not match the grid");
  require(u.rows() == tau.values.rows(), ErrorKind::Dimension, "u has the wrong dimension");
  ResidualPair out;
  if (u.cols() == N + 1) {
    for (int j = 0; j < N; ++j) {
      const Vector d = cell_derivative(tau.values, j, dt);
      const Vector tm = normalized(tau.values.col(j) + tau.values.col(j + 1));
      const Vector um = 0.5 * (u.col(j) + u.col(j + 1));
      const Vector du = cell_derivative(u, j, dt);
      const double bm = midpoint_beta(beta, j);
      const Vector e7 = du + um.dot(d) * tm - bm * (lambda - lambda.dot(tm) * tm);
      const Vector e8 = um.norm() * d - k * um;
      out.r1 = std::max(out.r1, e7.norm());
      out.r2 = std::max(out.r2, e8.norm());
    }
  } else if (u.cols() == N) {
    for (int i = 1; i < N; ++i) {
      const Vector t = tau.values.col(i);
      const Vector tp = 0.5 * (cell_derivative(tau.values, i - 1, dt) + cell_derivative(tau.values, i, dt));
      const Vector un = 0.5 * (u.col(i - 1) + u.col(i));
      const Vector du = (u.col(i) - u.col(i - 1)) / dt;
      const Vector e7 = du + un.dot(tp) * t - beta[i] * (lambda - lambda.dot(t) * t);
      out.r1 = std::max(out.r1, e7.norm());
    }
    for (int j = 0; j < N; ++j) {
      const Vector d = cell_derivative(tau.values, j, dt);
      out.r2 = std::max(out.r2, (u.col(j).norm() * d - k * u.col(j)).norm());
    }
  } else {
    throw Error(ErrorKind::Dimension, "u must have one column per node or per cell");
  }
  return out;
}

ResidualPair rescaled_residual(const TangentField& tau, std::span<const double> f, const Vector& lambda,
                               std::span<const double> beta, double k) {
  const int N = tau.N();
  const double dt = tau.dt();
  require(static_cast<int>(beta.size()) == N + 1, ErrorKind::Dimension, "beta samples do not match the grid");
  require(static_cast<int>(f.size()) == N + 1, ErrorKind::Dimension, "f samples do not match the grid");
  const double k2 = k * k;
  const double norm = (k2 > 0.0 ? k2 : 1.0) * dt;
  Field D(tau.dim(), N);
  for (int j = 0; j < N; ++j) D.col(j) = cell_derivative(tau.values, j, dt);
  ResidualPair out;
  for (int i = 1; i < N; ++i) {
    const Vector t = tau.values.col(i);
    const double fl = 0.5 * (f[i - 1] + f[i]);
    const double fr = 0.5 * (f[i] + f[i + 1]);
    Vector r = fl * D.col(i - 1) - fr * D.col(i);
    r += 0.5 * ((f[i] - f[i - 1]) * D.col(i - 1) + (f[i + 1] - f[i]) * D.col(i));
    r += dt * (-k2 * f[i] * t + k2 * beta[i] * proj_perp(lambda, t, 0.5 * (D.col(i - 1) + D.col(i))));
    out.r1 = std::max(out.r1, r.norm() / norm);
  }
  for (int j = 0; j < N; ++j)
    out.r2 = std::max(out.r2, std::abs((f[j + 1] - f[j]) / dt - midpoint_beta(beta, j) * lambda.dot(D.col(j))));
  return out;
}

ResidualPair original_residual(const Curve& gamma, std::span<const double> g, const Vector& lambda,
                               const WeightFunction& alpha, double k) {
  const int M = gamma.nodes();
  require(M >= 6, ErrorKind::InsufficientResolution, "original residual needs at least 6 nodes");
  require(static_cast<int>(g.size()) == M, ErrorKind::Dimension, "g samples do not match the curve");
  require(lambda.size() == gamma.dim(), ErrorKind::Dimension, "lambda has the wrong dimension");
  const Field T = curve_tangents(gamma);
  const Field R = original_pairings(T, gamma.s, g, lambda, alpha, k);
  ResidualPair out;
  for (int i = 0; i < M; ++i) out.r1 = std::max(out.r1, R.col(i).norm());
  const double s0 = gamma.s.front();
  for (int j = 1; j + 2 < M; ++j) {
    const double h = gamma.s[j + 1] - gamma.s[j];
    const double am = alpha(0.5 * (gamma.s[j] + gamma.s[j + 1]) - s0);
    out.r2 = std::max(out.r2, std::abs((g[j + 1] - g[j]) / h - am * lambda.dot(T.col(j + 1) - T.col(j)) / h));
  }
  return out;
}

double alpha1_equation_residual(const Field& T, std::span<const double> s, double k, const Vector& lambda,
                                double eta) {
  const int M = static_cast<int>(T.cols());
  require(M >= 3, ErrorKind::InsufficientResolution, "needs at least 3 nodes");
  require(static_cast<int>(s.size()) == M, ErrorKind::Dimension, "grid does not match the tangent samples");
  const double k2 = k * k;
  double worst = 0.0;
  bool any = false;
  for (int i = 1; i + 1 < M; ++i) {
    const Vector t = T.col(i);
    const double den = lambda.dot(t) - eta;
    if (std::abs(den) < 1e-6) continue;
    any = true;
    const double h0 = s[i] - s[i - 1];
    const double h1 = s[i + 1] - s[i];
    const Vector d0 = (T.col(i) - T.col(i - 1)) / h0;
    const Vector d1 = (T.col(i + 1) - T.col(i)) / h1;
    const Vector second = 2.0 * (d1 - d0) / (h0 + h1);
    const Vector first = (h0 * d1 + h1 * d0) / (h0 + h1);
    const Vector defect = second + k2 * t - k2 * proj_perp(lambda, t, first) / den;
    worst = std::max(worst, defect.norm());
  }
  if (!any) throw Error(ErrorKind::NotEvaluable, "lambda . T - eta vanishes on every node");
  return worst;
}

ElasticaCertificate normalize_lambda(const ElasticaCertificate& cert, const TangentField& tau,
                                     std::span<const double> beta) {
  require(cert.frame == Frame::Rescaled, ErrorKind::InvalidArgument, "normalize_lambda expects a rescaled certificate");
  const int N = tau.N();
  require(static_cast<int>(cert.scalar.size()) == N + 1, ErrorKind::Dimension, "f samples do not match the grid");
  require(static_cast<int>(beta.size()) == N + 1, ErrorKind::Dimension, "beta samples do not match the grid");
  ElasticaCertificate out = cert;
  const double ln = cert.lambda.norm();
  if (ln > 1e-12) {
    out.lambda = cert.lambda / ln;
    for (double& v : out.scalar) v /= ln;
    if (out.eta) *out.eta /= ln;
    return out;
  }
  // lambda = 0 forces a great circle; any direction in its plane works.
  const double dt = tau.dt();
  const Vector t0 = tau.values.col(0);
  Vector w = Vector::Zero(tau.dim());
  for (int j = 0; j < N && w.norm() < kDegenerateSpeed; ++j) {
    const Vector d = cell_derivative(tau.values, j, dt);
    w = d - d.dot(t0) * t0;
  }
  if (w.norm() >= kDegenerateSpeed) {
    w.normalize();
    for (int i = 0; i <= N; ++i) {
      const Vector t = tau.values.col(i);
      const Vector off = t - t.dot(t0) * t0 - t.dot(w) * w;
      if (off.norm() > 1e-6)
        throw Error(ErrorKind::InconsistentCertificate, "lambda = 0 but tau does not follow a great circle");
    }
  }
  out.lambda = t0;
  std::vector<double> F(N + 1, 0.0);
  for (int j = 0; j < N; ++j)
    F[j + 1] = F[j] + midpoint_beta(beta, j) * t0.dot(tau.values.col(j + 1) - tau.values.col(j));
  const double fmin = *std::min_element(F.begin(), F.end());
  const double base = cert.scalar.front() > 0.0 ? cert.scalar.front() : 1.0;
  for (int i = 0; i <= N; ++i) out.scalar[i] = base + F[i] - fmin;
  out.eta.reset();
  return out;
}

MinimiserCheck minimiser_certificate_check(const ElasticaCertificate& cert, const Field& T,
                                           const WeightFunction& alpha) {
  require(cert.frame == Frame::Original, ErrorKind::InvalidArgument, "minimiser check needs an original-frame certificate");
  const int M = static_cast<int>(T.cols());
  require(static_cast<int>(cert.scalar.size()) == M && static_cast<int>(cert.grid.size()) == M, ErrorKind::Dimension,
          "certificate samples do not match the tangent samples");
  double gmin = std::numeric_limits<double>::infinity();
  double upper = -std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();
  const double s0 = cert.grid.front();
  for (int i = 0; i < M; ++i) {
    const double alt = alpha(cert.grid[i] - s0) * cert.lambda.dot(T.col(i));
    gmin = std::min(gmin, cert.scalar[i]);
    upper = std::max(upper, cert.scalar[i] + alt);
    margin = std::min(margin, -alt - cert.scalar[i]);
  }
  return {gmin >= -1e-10 && upper <= 1e-10, margin};
}

ScanResult scan_minimiser_certificates(const Field& T, std::span<const double> s, const WeightFunction& alpha,
                                       double k, const ScanOptions& opts) {
  const int M = static_cast<int>(T.cols());
  require(M >= 2 && static_cast<int>(s.size()) == M, ErrorKind::Dimension, "grid does not match the tangent samples");
  const auto dirs = direction_grid(static_cast<int>(T.rows()), opts);
  std::vector<double> a_nodes(M), a_mid(M - 1);
  for (int i = 0; i < M; ++i) a_nodes[i] = alpha(s[i] - s.front());
  for (int j = 0; j + 1 < M; ++j) a_mid[j] = alpha(0.5 * (s[j] + s[j + 1]) - s.front());

  const int count = static_cast<int>(dirs.size());
  std::vector<double> margins(count);
#pragma omp parallel for schedule(static) if (opts.parallel)
  for (int j = 0; j < count; ++j) margins[j] = scan_margin(T, s, a_nodes, a_mid, dirs[j]);

  int best = 0;
  for (int j = 1; j < count; ++j)
    if (margins[j] > margins[best]) best = j;

  ScanResult out;
  out.lambda = dirs[best];
  out.margin = margins[best];
  out.pass = out.margin >= -1e-10;
  const auto G = cumulative_g(T, s, alpha, out.lambda);
  out.h = -*std::min_element(G.begin(), G.end());
  auto& cert = out.certificate;
  cert.lambda = out.lambda;
  cert.k = k;
  cert.frame = Frame::Original;
  cert.grid.assign(s.begin(), s.end());
  cert.scalar.resize(M);
  for (int i = 0; i < M; ++i) cert.scalar[i] = out.h + G[i];
  return out;
}

CertificateFit fit_certificate(const Curve& gamma, const WeightFunction& alpha, double k) {
  const int M = gamma.nodes();
  const int n = gamma.dim();
  require(M >= 6, ErrorKind::InsufficientResolution, "certificate fit needs at least 6 nodes");
  const Field T = curve_tangents(gamma);
  const auto& s = gamma.s;

  // Pairings are linear in (g(0), lambda); one column per unknown.
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n) * M, n + 1);
  {
    const std::vector<double> ones(M, 1.0);
    const Field R = original_pairings(T, s, ones, Vector::Zero(n), alpha, k);
    A.col(0) = Eigen::Map<const Vector>(R.data(), R.size());
  }
  for (int e = 0; e < n; ++e) {
    const Vector dir = Vector::Unit(n, e);
    const auto G = cumulative_g(T, s, alpha, dir);
    const Field R = original_pairings(T, s, G, dir, alpha, k);
    A.col(e + 1) = Eigen::Map<const Vector>(R.data(), R.size());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  Vector x = svd.matrixV().col(n);
  Vector lambda = x.tail(n);
  double g0 = x[0];
  CertificateFit out;
  auto& cert = out.certificate;
  cert.k = k;
  cert.frame = Frame::Original;
  cert.grid.assign(s.begin(), s.end());
  const double ln = lambda.norm();
  if (ln < 1e-12) {
    cert.lambda = Vector::Zero(n);
    cert.scalar.assign(M, 0.0);
    out.fit = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    return out;
  }
  lambda /= ln;
  g0 /= ln;
  auto G = cumulative_g(T, s, alpha, lambda);
  double mean = 0.0;
  for (int i = 0; i < M; ++i) mean += g0 + G[i];
  if (mean < 0.0) {
    lambda = -lambda;
    g0 = -g0;
    for (double& v : G) v = -v;
  }
  cert.lambda = lambda;
  cert.scalar.resize(M);
  for (int i = 0; i < M; ++i) cert.scalar[i] = g0 + G[i];
  out.fit = original_residual(gamma, cert.scalar, lambda, alpha, k);
  return out;
}

double pseudo_minimiser_constant(const TangentField& tau, const Field& u, const Vector& lambda,
                                 std::span<const double> beta, double k) {
  const int N = tau.N();
  require(u.cols() == N, ErrorKind::Dimension, "u must have one column per cell");
  require(static_cast<int>(beta.size()) == N + 1, ErrorKind::Dimension, "beta samples do not match the grid");
  double sup = 0.0;
  double l1 = 0.0;
  for (int j = 0; j < N; ++j) {
    const double un = u.col(j).norm();
    sup = std::max(sup, un / midpoint_beta(beta, j));
    l1 += un * tau.dt();
  }
  if (l1 == 0.0) throw Error(ErrorKind::DegenerateExtraction, "u vanishes identically");
  return (k * sup + lambda.norm()) / (2.0 * l1);
}

}  // namespace elastica
