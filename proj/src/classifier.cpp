#include "elastica/classifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "elastica/error.hpp"
#include "elastica/shooting.hpp"

namespace elastica {

namespace {

// Nonuniform three-point second derivative at interior nodes; endpoints copy their neighbour.
Field second_vectors(const Curve& gamma) {
  const int M = gamma.nodes();
  Field S = Field::Zero(gamma.dim(), M);
  if (M < 3) return S;
  for (int i = 1; i < M - 1; ++i) {
    const double h0 = gamma.s[i] - gamma.s[i - 1];
    const double h1 = gamma.s[i + 1] - gamma.s[i];
    S.col(i) = 2.0 * ((gamma.points.col(i + 1) - gamma.points.col(i)) / h1 -
                      (gamma.points.col(i) - gamma.points.col(i - 1)) / h0) /
               (h0 + h1);
  }
  S.col(0) = S.col(1);
  S.col(M - 1) = S.col(M - 2);
  return S;
}

std::vector<double> node_curvature(const Curve& gamma, const Field& S, const WeightFunction& alpha) {
  std::vector<double> kappa(gamma.nodes());
  for (int i = 0; i < gamma.nodes(); ++i) kappa[i] = alpha(gamma.s[i]) * S.col(i).norm();
  return kappa;
}

Vector central_tangent(const Curve& gamma, int i) {
  const int M = gamma.nodes();
  const int a = std::max(0, i - 1);
  const int b = std::min(M - 1, i + 1);
  return normalized(gamma.points.col(b) - gamma.points.col(a));
}

Field columns(const Field& P, int first, int last) { return P.middleCols(first, last - first + 1); }

double det2(const Vector& u, const Vector& v, const Field& plane) {
  const double u1 = u.dot(plane.col(0)), u2 = u.dot(plane.col(1));
  const double v1 = v.dot(plane.col(0)), v2 = v.dot(plane.col(1));
  return u1 * v2 - u2 * v1;
}

// Kasa fit in plane coordinates; returns centre in ambient coordinates.
std::pair<Vector, double> circle_fit(const Field& pts, const Field& plane) {
  const int m = static_cast<int>(pts.cols());
  const Vector c0 = pts.rowwise().mean();
  Eigen::MatrixXd A(m, 3);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const Vector d = pts.col(i) - c0;
    const double x = d.dot(plane.col(0)), y = d.dot(plane.col(1));
    A(i, 0) = x;
    A(i, 1) = y;
    A(i, 2) = 1.0;
    rhs(i) = -(x * x + y * y);
  }
  const Eigen::Vector3d sol = A.colPivHouseholderQr().solve(rhs);
  const double cx = -sol(0) / 2, cy = -sol(1) / 2;
  const double r = std::sqrt(std::max(0.0, cx * cx + cy * cy - sol(2)));
  return {c0 + cx * plane.col(0) + cy * plane.col(1), r};
}

Field plane_basis(const Curve& gamma, const AffineHull& hull) {
  const int n = gamma.dim();
  Field plane = Field::Zero(n, 2);
  if (n == 2) {
    plane(0, 0) = 1.0;
    plane(1, 1) = 1.0;
  } else if (hull.dimension >= 2) {
    plane = hull.basis.leftCols(2);
  } else {
    plane(0, 0) = 1.0;
    plane(1, 1) = 1.0;
  }
  return plane;
}

bool in_plane(const Field& pts, const Vector& origin, const Field& plane, double tol) {
  for (int i = 0; i < pts.cols(); ++i) {
    const Vector d = pts.col(i) - origin;
    const Vector r = d - plane * (plane.transpose() * d);
    if (r.norm() > tol) return false;
  }
  return true;
}

struct TypeIOutcome {
  bool pass = false;
  std::vector<IntervalReport> intervals;
  std::string failure;
};

TypeIOutcome evaluate_type_i(const Curve& gamma, const Field& S, const std::vector<double>& kappa, double k,
                             double diameter, const Line& line, const Vector& lambda, const ClassifyOptions& opts) {
  TypeIOutcome out;
  const double tol = opts.line_distance_tol * std::max(diameter, 1e-300);
  const auto intervals = off_line_intervals(gamma, line, tol);
  if (intervals.empty()) {
    out.failure = "no arcs off the line";
    return out;
  }
  const Vector& d = line.direction;
  for (const auto& J : intervals) {
    IntervalReport rep;
    rep.interval = J;
    const int lo = std::max(0, J.first - 1), hi = std::min(gamma.nodes() - 1, J.last + 1);
    Field pts(gamma.dim(), hi - lo + 3);
    pts.leftCols(hi - lo + 1) = columns(gamma.points, lo, hi);
    pts.col(hi - lo + 1) = line.point;
    pts.col(hi - lo + 2) = line.point + diameter * d;
    const AffineHull hull = fit_affine_hull(pts, opts.planarity_tol);
    rep.planar = hull.dimension <= 2;

    const int mid = (J.first + J.last) / 2;
    Vector off = gamma.points.col(mid) - line.point;
    off -= d * d.dot(off);
    if (off.norm() < tol) off = S.col(mid) - d * d.dot(S.col(mid));
    rep.plane = Field::Zero(gamma.dim(), 2);
    rep.plane.col(0) = d;
    if (off.norm() > 0) rep.plane.col(1) = off.normalized();
    rep.sense = det2(central_tangent(gamma, mid), S.col(mid), rep.plane) >= 0 ? 1 : -1;

    int counted = 0;
    bool constant = true;
    double mean_curv = 0.0;
    for (int i = J.first + 1; i <= J.last - 1; ++i) {
      ++counted;
      mean_curv += S.col(i).norm();
      if (std::abs(kappa[i] - k) > opts.curvature_tol * k) constant = false;
    }
    rep.constant_curvature = constant && counted > 0;
    rep.radius = counted > 0 ? counted / mean_curv : 0.0;

    bool signs = true;
    const std::span<const Interval> only(&J, 1);
    if (J.open_begin && junction_sign_check(gamma, lambda, J.s_begin, opts.junction_window, only) != SignCheck::Pass)
      signs = false;
    if (J.open_end && junction_sign_check(gamma, lambda, J.s_end, opts.junction_window, only) != SignCheck::Pass)
      signs = false;
    rep.junction_signs = signs;

    if (!rep.planar && out.failure.empty()) out.failure = "interval not coplanar with the line";
    if (!rep.constant_curvature && out.failure.empty()) out.failure = "curvature not constant on an interval";
    if (!rep.junction_signs && out.failure.empty()) out.failure = "junction sign condition fails";
    out.intervals.push_back(rep);
  }
  out.pass = out.failure.empty();
  return out;
}

struct Attempt {
  std::optional<LineEstimate> estimate;
  TypeIOutcome outcome;
};

Attempt try_line(const Curve& gamma, const Field& S, const std::vector<double>& kappa, double k, double diameter,
                 const Vector& point, const Vector& direction, const ClassifyOptions& opts) {
  Attempt best;
  const Line line{point, normalized(direction)};
  for (double sign : {1.0, -1.0}) {
    const Vector lambda = sign * line.direction;
    TypeIOutcome o = evaluate_type_i(gamma, S, kappa, k, diameter, line, lambda, opts);
    if (o.pass) {
      best.estimate = LineEstimate{line, lambda};
      best.outcome = std::move(o);
      return best;
    }
    if (best.outcome.intervals.empty()) best.outcome = std::move(o);
  }
  return best;
}

std::vector<Vector> arc_junctions(const std::vector<CurvePiece>& pieces, const Curve& gamma) {
  std::vector<const CurvePiece*> arcs;
  for (const auto& p : pieces)
    if (p.kind == PieceKind::Arc && !p.junction) arcs.push_back(&p);
  std::vector<Vector> pts;
  for (std::size_t j = 0; j + 1 < arcs.size(); ++j) {
    const CurvePiece& A = *arcs[j];
    const CurvePiece& B = *arcs[j + 1];
    if (A.center.size() > 0 && B.center.size() > 0 && (B.center - A.center).norm() > 1e-12) {
      pts.push_back(A.center + A.radius * (B.center - A.center).normalized());
    } else {
      pts.push_back(0.5 * (gamma.points.col(A.last) + gamma.points.col(B.first)));
    }
  }
  return pts;
}

}  // namespace

AffineHull fit_affine_hull(const Field& points, double rel_tol) {
  AffineHull hull;
  const int n = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "empty point set");
  hull.offset = points.rowwise().mean();
  const Field centred = points.colwise() - hull.offset;
  const Eigen::MatrixXd C = centred * centred.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = n - 1 - i;
  std::vector<double> extents(n);
  Field axes(n, n);
  for (int j = 0; j < n; ++j) {
    axes.col(j) = es.eigenvectors().col(order[j]);
    const Eigen::RowVectorXd proj = axes.col(j).transpose() * centred;
    extents[j] = proj.maxCoeff() - proj.minCoeff();
  }
  double d2 = 0.0;
  for (double e : extents) d2 += e * e;
  hull.diameter = std::sqrt(d2);
  hull.extents = extents;
  for (int j = 0; j < n; ++j)
    if (extents[j] > rel_tol * hull.diameter) ++hull.dimension;
  hull.basis = axes.leftCols(hull.dimension);
  return hull;
}

std::vector<CurvePiece> segment_curve(const Curve& gamma, const WeightFunction& alpha, const ClassifyOptions& opts) {
  const int M = gamma.nodes();
  if (M < 4) throw Error(ErrorKind::InsufficientResolution, "segmentation needs at least 4 nodes");
  const Field S = second_vectors(gamma);
  const auto kappa = node_curvature(gamma, S, alpha);
  const double k = *std::max_element(kappa.begin(), kappa.end());

  std::vector<PieceKind> label(M);
  for (int i = 0; i < M; ++i) {
    if (kappa[i] <= opts.line_tol * k)
      label[i] = PieceKind::Line;
    else if (std::abs(kappa[i] - k) <= opts.curvature_tol * k)
      label[i] = PieceKind::Arc;
    else
      label[i] = PieceKind::Other;
  }

  std::vector<CurvePiece> runs;
  int start = 0;
  for (int i = 1; i <= M; ++i) {
    bool cut = i == M || label[i] != label[start];
    if (!cut && label[i] == PieceKind::Arc) {
      const Vector n0 = S.col(i - 1).normalized(), n1 = S.col(i).normalized();
      cut = n0.dot(n1) < 0.9;
    }
    if (cut) {
      CurvePiece p;
      p.kind = label[start];
      p.first = start;
      p.last = i - 1;
      runs.push_back(p);
      start = i;
    }
  }
  for (std::size_t j = 1; j + 1 < runs.size(); ++j) {
    CurvePiece& p = runs[j];
    if (p.kind != PieceKind::Arc && p.last - p.first + 1 <= 2) {
      p.junction = true;
      p.kind = PieceKind::Other;
    }
  }

  const AffineHull whole = fit_affine_hull(gamma.points, opts.planarity_tol);
  const double tol = opts.planarity_tol * std::max(whole.diameter, 1e-300);
  for (auto& p : runs) {
    p.s_begin = gamma.s[p.first];
    p.s_end = gamma.s[p.last];
    if (p.kind != PieceKind::Arc || p.last - p.first < 2) continue;
    const Field pts = columns(gamma.points, p.first, p.last);
    const AffineHull h = fit_affine_hull(pts, 0.0);
    if (gamma.dim() > 2 && h.extents.size() > 2 && h.extents[2] > tol) {
      p.kind = PieceKind::Other;
      continue;
    }
    p.plane = gamma.dim() == 2 ? Field(Field::Identity(2, 2)) : Field(h.basis.leftCols(2));
    const int mid = (p.first + p.last) / 2;
    p.sense = det2(central_tangent(gamma, mid), S.col(mid), p.plane) >= 0 ? 1 : -1;
    double mean = 0.0;
    for (int i = p.first; i <= p.last; ++i) mean += S.col(i).norm();
    p.radius = (p.last - p.first + 1) / mean;
    if (alpha.is_constant()) {
      auto [c, r] = circle_fit(pts, p.plane);
      p.center = c;
      p.radius = r;
    }
  }
  return runs;
}

std::vector<Interval> off_line_intervals(const Curve& gamma, const Line& line, double tol) {
  const int M = gamma.nodes();
  Field off(gamma.dim(), M);
  std::vector<double> dist(M);
  for (int i = 0; i < M; ++i) {
    Vector o = gamma.points.col(i) - line.point;
    o -= line.direction * line.direction.dot(o);
    off.col(i) = o;
    dist[i] = o.norm();
  }
  std::vector<Interval> out;
  int i = 0;
  while (i < M) {
    if (dist[i] <= tol) {
      ++i;
      continue;
    }
    Interval J;
    J.first = i;
    if (i == 0) {
      J.s_begin = gamma.s[0];
      J.open_begin = false;
    } else if (dist[i - 1] <= tol) {
      J.s_begin = gamma.s[i - 1];
      J.open_begin = true;
    } else {
      const double w = dist[i - 1] / (dist[i - 1] + dist[i]);
      J.s_begin = gamma.s[i - 1] + w * (gamma.s[i] - gamma.s[i - 1]);
      J.open_begin = true;
    }
    int j = i;
    while (j + 1 < M && dist[j + 1] > tol && off.col(j).dot(off.col(j + 1)) >= 0) ++j;
    J.last = j;
    if (j == M - 1) {
      J.s_end = gamma.s[M - 1];
      J.open_end = false;
    } else if (dist[j + 1] <= tol) {
      J.s_end = gamma.s[j + 1];
      J.open_end = true;
    } else {
      const double w = dist[j] / (dist[j] + dist[j + 1]);
      J.s_end = gamma.s[j] + w * (gamma.s[j + 1] - gamma.s[j]);
      J.open_end = true;
    }
    out.push_back(J);
    i = j + 1;
  }
  return out;
}

SignCheck junction_sign_check(const Curve& gamma, const Vector& lambda, double s0, int window,
                              std::span<const Interval> intervals) {
  const int M = gamma.nodes();
  const Field S = second_vectors(gamma);
  const double eps = 1e-12 * std::max(1.0, gamma.length());
  auto eligible = [&](int i, bool after) {
    if (i < 1 || i > M - 2) return false;
    if (intervals.empty()) return true;
    for (const auto& J : intervals) {
      const bool adjacent = after ? std::abs(J.s_begin - s0) <= eps : std::abs(J.s_end - s0) <= eps;
      if (adjacent && i >= J.first + 1 && i <= J.last - 1) return true;
    }
    return false;
  };
  int seen = 0;
  bool fail = false;
  int count = 0;
  for (int i = 0; i < M && count < window; ++i) {
    if (gamma.s[i] <= s0 + eps || !eligible(i, true)) continue;
    ++count;
    if (!(lambda.dot(S.col(i)) > 0)) fail = true;
  }
  seen += count;
  count = 0;
  for (int i = M - 1; i >= 0 && count < window; --i) {
    if (gamma.s[i] >= s0 - eps || !eligible(i, false)) continue;
    ++count;
    if (!(lambda.dot(S.col(i)) < 0)) fail = true;
  }
  seen += count;
  if (seen == 0) return SignCheck::Inconclusive;
  return fail ? SignCheck::Fail : SignCheck::Pass;
}

std::optional<LineEstimate> infer_line_and_lambda(const std::vector<CurvePiece>& pieces, const Curve& gamma,
                                                  const WeightFunction& alpha, const ClassifyOptions& opts) {
  const Field S = second_vectors(gamma);
  const auto kappa = node_curvature(gamma, S, alpha);
  const double k = *std::max_element(kappa.begin(), kappa.end());
  const AffineHull whole = fit_affine_hull(gamma.points, opts.planarity_tol);
  const double D = whole.diameter;

  const CurvePiece* longest = nullptr;
  for (const auto& p : pieces)
    if (p.kind == PieceKind::Line && !p.junction && p.last - p.first >= 2 &&
        (!longest || p.last - p.first > longest->last - longest->first))
      longest = &p;
  if (longest) {
    const Vector a = gamma.points.col(longest->first), b = gamma.points.col(longest->last);
    return try_line(gamma, S, kappa, k, D, a, b - a, opts).estimate;
  }

  const auto junctions = arc_junctions(pieces, gamma);
  if (junctions.size() >= 2) {
    const Vector dir = junctions.back() - junctions.front();
    if (dir.norm() > 1e-12 * std::max(D, 1.0))
      return try_line(gamma, S, kappa, k, D, junctions.front(), dir, opts).estimate;
    return std::nullopt;
  }
  const Field plane = plane_basis(gamma, whole);
  if (junctions.size() == 1) {
    const int steps = 720;
    for (int a = 0; a < steps; ++a) {
      const double th = std::numbers::pi * a / steps;
      const Vector dir = std::cos(th) * plane.col(0) + std::sin(th) * plane.col(1);
      auto att = try_line(gamma, S, kappa, k, D, junctions.front(), dir, opts);
      if (att.estimate) return att.estimate;
    }
    return std::nullopt;
  }

  int arcs = 0;
  for (const auto& p : pieces)
    if (p.kind == PieceKind::Arc && !p.junction) ++arcs;
  if (arcs != 1) return std::nullopt;
  if (!in_plane(gamma.points, whole.offset, plane, opts.planarity_tol * std::max(D, 1e-300))) return std::nullopt;
  Vector dir;
  if (gamma.dim() <= 3) {
    const Field T = curve_tangents(gamma);
    ScanOptions so;
    const auto scan = scan_minimiser_certificates(T, gamma.s, alpha, k, so);
    dir = plane * (plane.transpose() * scan.lambda);
  }
  if (dir.size() == 0 || dir.norm() < 1e-12) dir = plane.col(0);
  dir.normalize();
  Vector perp = plane.col(0) - dir * dir.dot(plane.col(0));
  if (perp.norm() < 1e-6) perp = plane.col(1) - dir * dir.dot(plane.col(1));
  perp.normalize();
  const Vector point = whole.offset + (D + 1.0) * perp;
  const Line line{point, dir};
  TypeIOutcome o = evaluate_type_i(gamma, S, kappa, k, D, line, dir, opts);
  if (o.pass) return LineEstimate{line, dir};
  o = evaluate_type_i(gamma, S, kappa, k, D, line, -dir, opts);
  if (o.pass) return LineEstimate{line, Vector(-dir)};
  return std::nullopt;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::TypeI: return "type-i";
    case Verdict::TypeII: return "type-ii";
    case Verdict::StraightLine: return "straight-line";
    case Verdict::Unclassified: return "unclassified";
  }
  return "unclassified";
}

namespace {

std::string vec_str(const Vector& v) {
  std::ostringstream os;
  os.precision(10);
  os << '(';
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ')';
  return os.str();
}

}  // namespace

std::string StructureReport::summary() const {
  std::ostringstream os;
  os.precision(10);
  os << "verdict: " << to_string(verdict) << '\n';
  os << "k: " << k << '\n';
  os << "hull dimension: " << hull_dimension << '\n';
  if (lambda) os << "lambda: " << vec_str(*lambda) << '\n';
  if (line) os << "line: point " << vec_str(line->point) << " direction " << vec_str(line->direction) << '\n';
  if (!intervals.empty()) {
    os << "intervals: " << intervals.size() << '\n';
    for (const auto& r : intervals)
      os << "  [" << r.interval.s_begin << ", " << r.interval.s_end << "] radius " << r.radius << " sense "
         << (r.sense > 0 ? "+" : "-") << '\n';
  }
  if (certificate) os << "certificate lambda: " << vec_str(certificate->lambda) << '\n';
  for (const auto& [name, ok] : checks) os << "check " << name << ": " << (ok ? "pass" : "fail") << '\n';
  if (!note.empty()) os << "note: " << note << '\n';
  return os.str();
}

StructureReport classify(const Curve& gamma, const WeightFunction& alpha, const ClassifyOptions& opts) {
  StructureReport rep;
  rep.tolerances = opts;
  const int M = gamma.nodes();
  if (M < 4) throw Error(ErrorKind::InsufficientResolution, "classification needs at least 4 nodes");
  const Field S = second_vectors(gamma);
  const auto kappa = node_curvature(gamma, S, alpha);
  rep.k = *std::max_element(kappa.begin(), kappa.end());
  const AffineHull hull = fit_affine_hull(gamma.points, opts.planarity_tol);
  rep.hull_dimension = hull.dimension;
  const double D = hull.diameter;

  if (rep.k * D <= opts.straight_tol || hull.dimension <= 1) {
    rep.verdict = Verdict::StraightLine;
    const Vector dir = normalized(gamma.points.col(M - 1) - gamma.points.col(0));
    rep.lambda = dir;
    rep.line = Line{gamma.points.col(0), dir};
    rep.checks.emplace_back("curvature vanishes", true);
    return rep;
  }

  rep.pieces = segment_curve(gamma, alpha, opts);
  int other = 0;
  for (const auto& p : rep.pieces)
    if (p.kind == PieceKind::Other && !p.junction) other += p.last - p.first + 1;
  const double frac = static_cast<double>(other) / M;
  rep.checks.emplace_back("pieces are lines and arcs", frac <= opts.other_fraction);

  if (frac <= opts.other_fraction) {
    if (auto est = infer_line_and_lambda(rep.pieces, gamma, alpha, opts)) {
      TypeIOutcome o = evaluate_type_i(gamma, S, kappa, rep.k, D, est->line, est->lambda, opts);
      rep.intervals = o.intervals;
      if (o.pass) {
        rep.verdict = Verdict::TypeI;
        rep.lambda = est->lambda;
        rep.line = est->line;
        rep.checks.emplace_back("intervals coplanar with the line", true);
        rep.checks.emplace_back("constant curvature off the line", true);
        rep.checks.emplace_back("junction signs", true);
        return rep;
      }
      rep.note = o.failure;
    } else {
      rep.note = "no line parallel to lambda found";
    }
  }

  if (hull.dimension == 3) {
    bool constant = true;
    for (int i = 1; i < M - 1; ++i)
      if (std::abs(kappa[i] - rep.k) > opts.curvature_tol * rep.k) constant = false;
    rep.checks.emplace_back("constant curvature", constant);
    const CertificateFit fit = fit_certificate(gamma, alpha, rep.k);
    double gmin = fit.certificate.scalar.front(), gmax = 0.0;
    for (double g : fit.certificate.scalar) {
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, std::abs(g));
    }
    const bool positive = gmin > 1e-8 * gmax;
    const bool fits = fit.fit.r1 <= opts.certificate_tol && fit.fit.r2 <= opts.certificate_tol;
    rep.checks.emplace_back("certificate positive", positive);
    rep.checks.emplace_back("certificate fit", fits);
    bool round_trip = false;
    if (constant && positive && fits) {
      try {
        const Field T = curve_tangents(gamma);
        const double h0 = gamma.s[1] - gamma.s[0];
        const Vector Tp0 = (-3.0 * T.col(0) + 4.0 * T.col(1) - T.col(2)) / (2.0 * h0);
        IVPState init;
        init.tau = T.col(0);
        init.tau_prime = alpha(gamma.s[0]) * Tp0;
        init.tau_prime -= init.tau * init.tau.dot(init.tau_prime);
        init.f = fit.certificate.scalar.front();
        IntegratorOptions io;
        for (int i = 0; i < M; ++i) io.outputs.push_back(alpha.psi(gamma.s[i]) - alpha.psi(gamma.s[0]));
        const double horizon = io.outputs.back();
        io.max_drift = 1e-4;
        const Trajectory tr = integrate_ivp(init, fit.certificate.lambda, alpha, horizon, io);
        double err = 0.0;
        std::size_t j = 0;
        for (int i = 0; i < M; ++i) {
          while (j + 1 < tr.t.size() && tr.t[j] < io.outputs[i] - 1e-12 * std::max(1.0, horizon)) ++j;
          err = std::max(err, (tr.tau.col(j) - T.col(i)).norm());
        }
        round_trip = err <= 1e-3;
      } catch (const Error&) {
        round_trip = false;
      }
    }
    rep.checks.emplace_back("initial value round trip", round_trip);
    if (constant && positive && fits && round_trip) {
      rep.verdict = Verdict::TypeII;
      rep.lambda = fit.certificate.lambda;
      rep.certificate = fit.certificate;
      rep.note.clear();
      return rep;
    }
    if (rep.note.empty()) rep.note = "type ii conditions fail";
  }
  rep.verdict = Verdict::Unclassified;
  if (rep.note.empty()) rep.note = "neither structure recognised";
  return rep;
}

}  // namespace elastica
