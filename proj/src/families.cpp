#include "elastica/families.hpp"

#include <algorithm>
#include <cmath>

namespace elastica {

namespace {

constexpr double kJoinTol = 1e-10;

double sweep_sign(const ArcSpec& a) { return a.sweep >= 0.0 ? 1.0 : -1.0; }

double arc_angle(const ArcSpec& a, double sigma) { return a.start_angle + sweep_sign(a) * sigma / a.radius; }

double mod2pi(double x) {
  double y = std::fmod(x, 2.0 * M_PI);
  if (y < 0.0) y += 2.0 * M_PI;
  if (2.0 * M_PI - y < 1e-10) y = 0.0;
  return y;
}

Vector planar(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

double distance_to_line(const Vector& x, const Vector& p, const Vector& dir) {
  const Vector d = x - p;
  return (d - d.dot(dir) * dir).norm();
}

}  // namespace

double Piece::length() const {
  if (const auto* a = std::get_if<ArcSpec>(&geom)) return a->radius * std::abs(a->sweep);
  const auto& s = std::get<Segment>(geom);
  return (s.to - s.from).norm();
}

Vector Piece::point(double sigma) const {
  if (const auto* a = std::get_if<ArcSpec>(&geom)) {
    const double th = arc_angle(*a, sigma);
    return a->center + a->radius * (std::cos(th) * a->e1 + std::sin(th) * a->e2);
  }
  const auto& s = std::get<Segment>(geom);
  const double len = length();
  if (len == 0.0) return s.from;
  return s.from + (sigma / len) * (s.to - s.from);
}

Vector Piece::tangent(double sigma) const {
  if (const auto* a = std::get_if<ArcSpec>(&geom)) {
    const double th = arc_angle(*a, sigma);
    return sweep_sign(*a) * (-std::sin(th) * a->e1 + std::cos(th) * a->e2);
  }
  const auto& s = std::get<Segment>(geom);
  return (s.to - s.from) / length();
}

Vector Piece::second(double sigma) const {
  if (const auto* a = std::get_if<ArcSpec>(&geom)) {
    const double th = arc_angle(*a, sigma);
    return -(std::cos(th) * a->e1 + std::sin(th) * a->e2) / a->radius;
  }
  return Vector::Zero(std::get<Segment>(geom).from.size());
}

double PiecewisePath::length() const {
  double total = 0.0;
  for (const auto& p : pieces) total += p.length();
  return total;
}

int PiecewisePath::dim() const {
  if (pieces.empty()) throw Error(ErrorKind::InvalidBlueprint, "path has no pieces");
  const auto& g = pieces.front().geom;
  if (const auto* a = std::get_if<ArcSpec>(&g)) return static_cast<int>(a->center.size());
  return static_cast<int>(std::get<Segment>(g).from.size());
}

std::vector<double> PiecewisePath::breakpoints() const {
  std::vector<double> b{0.0};
  for (const auto& p : pieces) b.push_back(b.back() + p.length());
  return b;
}

void PiecewisePath::validate() const {
  if (pieces.empty()) throw Error(ErrorKind::InvalidBlueprint, "path has no pieces");
  for (std::size_t k = 1; k < pieces.size(); ++k) {
    const auto& prev = pieces[k - 1];
    const auto& next = pieces[k];
    const double len = prev.length();
    if ((prev.point(len) - next.point(0.0)).norm() > kJoinTol)
      throw Error(ErrorKind::InvalidBlueprint, "pieces " + std::to_string(k - 1) + " and " + std::to_string(k) +
                                                   " do not share an endpoint");
    if ((prev.tangent(len) - next.tangent(0.0)).norm() > kJoinTol)
      throw Error(ErrorKind::InvalidBlueprint, "pieces " + std::to_string(k - 1) + " and " + std::to_string(k) +
                                                   " do not share a tangent");
  }
}

std::pair<std::size_t, double> PiecewisePath::locate(double s) const {
  double start = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const double len = pieces[k].length();
    if (s <= start + len || k + 1 == pieces.size()) return {k, std::clamp(s - start, 0.0, len)};
    start += len;
  }
  throw Error(ErrorKind::InvalidBlueprint, "path has no pieces");
}

Vector PiecewisePath::point_at(double s) const {
  const auto [k, sigma] = locate(s);
  return pieces[k].point(sigma);
}

Vector PiecewisePath::tangent_at(double s) const {
  const auto [k, sigma] = locate(s);
  return pieces[k].tangent(sigma);
}

Field PiecewisePath::tangents(std::span<const double> s) const {
  Field T(dim(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) T.col(i) = tangent_at(s[i]);
  return T;
}

Field PiecewisePath::seconds(std::span<const double> s) const {
  Field K(dim(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto [k, sigma] = locate(s[i]);
    K.col(i) = pieces[k].second(sigma);
  }
  return K;
}

Curve PiecewisePath::sample(int N) const {
  if (N < 2) throw Error(ErrorKind::InsufficientResolution, "sampling needs N >= 2");
  const double ell = length();
  Curve c;
  c.tag = Parametrization::ArcLength;
  c.s.resize(N + 1);
  c.points.resize(dim(), N + 1);
  for (int i = 0; i <= N; ++i) {
    c.s[i] = (i == N) ? ell : ell * i / N;
    c.points.col(i) = point_at(c.s[i]);
  }
  c.param = c.s;
  return c;
}

PathBuilder::PathBuilder(Vector start, Vector heading, Vector e1, Vector e2)
    : pos_(std::move(start)), head_(std::move(heading)), e1_(std::move(e1)), e2_(std::move(e2)) {
  head_ = normalized(head_);
}

PathBuilder::PathBuilder(Vector start, Vector heading)
    : PathBuilder(start, heading, Vector::Unit(start.size(), 0), Vector::Unit(start.size(), 1)) {}

PathBuilder& PathBuilder::line(double length) {
  if (length < 0.0) throw Error(ErrorKind::InvalidBlueprint, "line length must be nonnegative");
  if (length <= 1e-14) return *this;
  Segment seg{pos_, pos_ + length * head_};
  pos_ = seg.to;
  path_.pieces.push_back(Piece{seg});
  return *this;
}

PathBuilder& PathBuilder::arc(double radius, double sweep) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidBlueprint, "arc radius must be positive");
  if (std::abs(sweep) * radius <= 1e-14) return *this;
  const double h1 = head_.dot(e1_);
  const double h2 = head_.dot(e2_);
  const Vector left = -h2 * e1_ + h1 * e2_;
  const double sgn = sweep >= 0.0 ? 1.0 : -1.0;
  ArcSpec a;
  a.center = pos_ + sgn * radius * left;
  a.radius = radius;
  a.e1 = e1_;
  a.e2 = e2_;
  const Vector rel = pos_ - a.center;
  a.start_angle = std::atan2(rel.dot(e2_), rel.dot(e1_));
  a.sweep = sweep;
  Piece piece{a};
  const double len = piece.length();
  pos_ = piece.point(len);
  head_ = piece.tangent(len);
  path_.pieces.push_back(std::move(piece));
  return *this;
}

PiecewisePath PathBuilder::build(std::string word) const {
  PiecewisePath p = path_;
  p.word = std::move(word);
  return p;
}

BoundaryData boundary_of(const PiecewisePath& path) {
  const double ell = path.length();
  return {path.point_at(0.0), path.point_at(ell), path.tangent_at(0.0), path.tangent_at(ell)};
}

ProblemSpec problem_from(const BoundaryData& b, double length, const WeightFunction& alpha) {
  ProblemSpec spec;
  spec.n = static_cast<int>(b.a1.size());
  spec.length = length;
  spec.a1 = b.a1;
  spec.a2 = b.a2;
  spec.T1 = b.T1.normalized();
  spec.T2 = b.T2.normalized();
  spec.alpha = alpha;
  return spec;
}

Fixture make_circular_arc(double r, double ell, int N) {
  if (!(r > 0.0) || !(ell > 0.0)) throw Error(ErrorKind::InvalidArgument, "arc needs r > 0 and length > 0");
  const auto path = PathBuilder(planar(r, 0.0), planar(0.0, 1.0)).arc(r, ell / r).build("arc");
  Fixture fx;
  fx.curve = path.sample(N);
  fx.tangents = path.tangents(fx.curve.s);
  auto& cert = fx.certificate;
  cert.lambda = planar(std::sin(ell / (2.0 * r)), -std::cos(ell / (2.0 * r)));
  cert.k = 1.0 / r;
  cert.frame = Frame::Original;
  cert.grid = fx.curve.s;
  cert.scalar.resize(fx.curve.s.size());
  for (std::size_t i = 0; i < cert.scalar.size(); ++i) cert.scalar[i] = cert.lambda.dot(fx.tangents.col(i)) + 1.0;
  fx.minimiser_certified = ell <= 2.0 * M_PI * r / 3.0 * (1.0 + 1e-12);
  return fx;
}

PiecewisePath semicircle_triple_path() {
  const double r = 1.0 / 3.0;
  return PathBuilder(planar(-1.0, 0.0), planar(0.0, 1.0)).arc(r, -M_PI).arc(r, M_PI).arc(r, -M_PI).build("RLR");
}

TripleFixture make_semicircle_triple(int N) {
  if (N % 3 != 0) throw Error(ErrorKind::InvalidArgument, "semicircle triple needs N divisible by 3");
  const auto path = semicircle_triple_path();
  return {path.sample(N), boundary_of(path)};
}

double comparison_length(double r) {
  if (!(r >= 1.0 / 3.0 - 1e-15 && r <= 1.0))
    throw Error(ErrorKind::Domain, "comparison_length needs r in [1/3, 1]");
  const double omega = std::acos(std::clamp((1.0 - r) / (2.0 * r), -1.0, 1.0));
  return r * (3.0 * M_PI - 4.0 * omega);
}

PiecewisePath comparison_path(double r) {
  const double len = comparison_length(r);
  const double omega = std::acos(std::clamp((1.0 - r) / (2.0 * r), -1.0, 1.0));
  const double h = 0.5 * (M_PI - len);
  return PathBuilder(planar(-1.0, 0.0), planar(0.0, 1.0))
      .line(h)
      .arc(r, -(M_PI - omega))
      .arc(r, M_PI - 2.0 * omega)
      .arc(r, -(M_PI - omega))
      .line(h)
      .build("SRLRS");
}

Curve make_comparison_curve(double r, int N) { return comparison_path(r).sample(N); }

double helix_eta(double omega) { return std::sin(omega) - std::cos(omega) * std::cos(omega) / std::sin(omega); }

Field helix_tangents(const HelixSpec& h, std::span<const double> s) {
  Field T(3, static_cast<Eigen::Index>(s.size()));
  const double cw = std::cos(h.omega);
  const double sw = std::sin(h.omega);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double th = s[i] / h.r;
    T.col(i) << -cw * std::sin(th), cw * std::cos(th), sw;
  }
  return T;
}

Fixture make_helix(const HelixSpec& h, int N) {
  if (!(h.omega > 0.0 && h.omega < M_PI / 2.0)) throw Error(ErrorKind::InvalidArgument, "helix needs omega in (0, pi/2)");
  if (!(h.r > 0.0) || !(h.length > 0.0)) throw Error(ErrorKind::InvalidArgument, "helix needs r > 0 and length > 0");
  if (N < 2) throw Error(ErrorKind::InsufficientResolution, "sampling needs N >= 2");
  const double cw = std::cos(h.omega);
  const double sw = std::sin(h.omega);
  Fixture fx;
  auto& c = fx.curve;
  c.tag = Parametrization::ArcLength;
  c.s.resize(N + 1);
  c.points.resize(3, N + 1);
  for (int i = 0; i <= N; ++i) {
    const double s = (i == N) ? h.length : h.length * i / N;
    c.s[i] = s;
    c.points.col(i) << h.r * cw * std::cos(s / h.r), h.r * cw * std::sin(s / h.r), s * sw;
  }
  c.param = c.s;
  fx.tangents = helix_tangents(h, c.s);
  auto& cert = fx.certificate;
  cert.lambda = Vector::Unit(3, 2);
  cert.k = cw / h.r;
  cert.frame = Frame::Original;
  cert.eta = helix_eta(h.omega);
  cert.grid = c.s;
  cert.scalar.resize(c.s.size());
  for (std::size_t i = 0; i < c.s.size(); ++i) cert.scalar[i] = cert.lambda.dot(fx.tangents.col(i)) - *cert.eta;
  return fx;
}

PiecewisePath build_type_i_path(const TypeIBlueprint& bp) {
  if (bp.start.size() != 2 || bp.heading.size() != 2 || bp.line_point.size() != 2 || bp.line_dir.size() != 2)
    throw Error(ErrorKind::InvalidBlueprint, "type-i blueprints are planar");
  if (bp.moves.empty()) throw Error(ErrorKind::InvalidBlueprint, "blueprint has no moves");
  PathBuilder b(bp.start, bp.heading);
  for (const auto& m : bp.moves) {
    if (m.arc)
      b.arc(bp.radius, m.sweep);
    else
      b.line(m.length);
  }
  PiecewisePath path = b.build("type-i");
  path.validate();

  const Vector dir = normalized(bp.line_dir);
  const double scale = std::max(1.0, path.length());
  const auto& pcs = path.pieces;
  for (std::size_t k = 0; k < pcs.size(); ++k) {
    const double len = pcs[k].length();
    if (!pcs[k].is_arc()) {
      if (distance_to_line(pcs[k].point(0.0), bp.line_point, dir) > 1e-10 * scale ||
          distance_to_line(pcs[k].point(len), bp.line_point, dir) > 1e-10 * scale)
        throw Error(ErrorKind::InvalidBlueprint, "segment " + std::to_string(k) + " leaves the line");
      continue;
    }
    // Junctions with other pieces lie on the line; the interior stays off it.
    if (k > 0 && distance_to_line(pcs[k].point(0.0), bp.line_point, dir) > 1e-10 * scale)
      throw Error(ErrorKind::InvalidBlueprint, "arc " + std::to_string(k) + " does not start on the line");
    if (k + 1 < pcs.size() && distance_to_line(pcs[k].point(len), bp.line_point, dir) > 1e-10 * scale)
      throw Error(ErrorKind::InvalidBlueprint, "arc " + std::to_string(k) + " does not end on the line");
    const double sweep = std::abs(std::get<ArcSpec>(pcs[k].geom).sweep);
    const bool full_circle = sweep >= 2.0 * M_PI - 1e-9;
    if (full_circle) {
      if (std::abs(pcs[k].tangent(0.0).dot(dir)) < 1.0 - 1e-10)
        throw Error(ErrorKind::InvalidBlueprint, "full circle must touch the line tangentially");
    }
    for (int q = 1; q < 64; ++q) {
      const double sigma = len * q / 64.0;
      if (full_circle && q == 32) continue;
      if (distance_to_line(pcs[k].point(sigma), bp.line_point, dir) <= 1e-9 * scale && !full_circle)
        throw Error(ErrorKind::InvalidBlueprint, "arc " + std::to_string(k) + " crosses the line");
    }
    if (bp.lambda) {
      const Vector& lam = *bp.lambda;
      const double delta = 1e-3 * len;
      if (k > 0 && lam.dot(pcs[k].second(delta)) <= 0.0)
        throw Error(ErrorKind::InvalidBlueprint, "junction sign fails after the start of arc " + std::to_string(k));
      if (k + 1 < pcs.size() && lam.dot(pcs[k].second(len - delta)) >= 0.0)
        throw Error(ErrorKind::InvalidBlueprint, "junction sign fails before the end of arc " + std::to_string(k));
    }
  }
  return path;
}

Curve make_type_i_concat(const TypeIBlueprint& bp, int N) { return build_type_i_path(bp).sample(N); }

std::vector<DubinsCandidate> make_dubins_candidates(const BoundaryData& b, double R) {
  if (b.a1.size() != 2 || b.a2.size() != 2 || b.T1.size() != 2 || b.T2.size() != 2)
    throw Error(ErrorKind::Dimension, "Dubins candidates are planar");
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "turning radius must be positive");
  const Vector diff = b.a2 - b.a1;
  const double d = diff.norm() / R;
  const double theta = d > 0.0 ? std::atan2(diff[1], diff[0]) : 0.0;
  const double al = mod2pi(std::atan2(b.T1[1], b.T1[0]) - theta);
  const double be = mod2pi(std::atan2(b.T2[1], b.T2[0]) - theta);
  const double sa = std::sin(al), sb = std::sin(be), ca = std::cos(al), cb = std::cos(be);
  const double cab = std::cos(al - be);

  struct Raw {
    std::string word;
    double t, p, q;
  };
  std::vector<Raw> raws;
  {
    const double p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb);
    if (p2 >= -1e-12) {
      const double tmp = std::atan2(cb - ca, d + sa - sb);
      raws.push_back({"LSL", mod2pi(-al + tmp), std::sqrt(std::max(p2, 0.0)), mod2pi(be - tmp)});
    }
  }
  {
    const double p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa);
    if (p2 >= -1e-12) {
      const double tmp = std::atan2(ca - cb, d - sa + sb);
      raws.push_back({"RSR", mod2pi(al - tmp), std::sqrt(std::max(p2, 0.0)), mod2pi(-be + tmp)});
    }
  }
  {
    const double p2 = -2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb);
    if (p2 >= -1e-12) {
      const double p = std::sqrt(std::max(p2, 0.0));
      const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
      raws.push_back({"LSR", mod2pi(-al + tmp), p, mod2pi(-mod2pi(be) + tmp)});
    }
  }
  {
    const double p2 = -2.0 + d * d + 2.0 * cab - 2.0 * d * (sa + sb);
    if (p2 >= -1e-12) {
      const double p = std::sqrt(std::max(p2, 0.0));
      const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
      raws.push_back({"RSL", mod2pi(al - tmp), p, mod2pi(be - tmp)});
    }
  }
  {
    const double c = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0;
    if (std::abs(c) <= 1.0 + 1e-12) {
      const double p = mod2pi(2.0 * M_PI - std::acos(std::clamp(c, -1.0, 1.0)));
      const double t = mod2pi(al - std::atan2(ca - cb, d - sa + sb) + p / 2.0);
      raws.push_back({"RLR", t, p, mod2pi(al - be - t + p)});
    }
  }
  {
    const double c = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0;
    if (std::abs(c) <= 1.0 + 1e-12) {
      const double p = mod2pi(2.0 * M_PI - std::acos(std::clamp(c, -1.0, 1.0)));
      const double t = mod2pi(-al - std::atan2(ca - cb, d + sa - sb) + p / 2.0);
      raws.push_back({"LRL", t, p, mod2pi(be - al - t + p)});
    }
  }

  std::vector<DubinsCandidate> out;
  const double tol = 1e-9 * std::max(1.0, diff.norm());
  for (const auto& raw : raws) {
    PathBuilder builder(b.a1, b.T1);
    const double len[3] = {raw.t, raw.p, raw.q};
    for (int k = 0; k < 3; ++k) {
      const char c = raw.word[k];
      if (c == 'S')
        builder.line(R * len[k]);
      else
        builder.arc(R, c == 'L' ? len[k] : -len[k]);
    }
    if ((builder.position() - b.a2).norm() > tol || (builder.heading() - b.T2.normalized()).norm() > 1e-9) continue;
    if (raw.word[1] != 'S' && raw.p <= M_PI) continue;
    DubinsCandidate cand;
    cand.word = (raw.word[1] == 'S' && raw.t == 0.0 && raw.q == 0.0) ? std::string("S") : raw.word;
    if (std::any_of(out.begin(), out.end(), [&](const DubinsCandidate& c) { return c.word == cand.word; })) continue;
    cand.t = raw.t;
    cand.p = raw.p;
    cand.q = raw.q;
    cand.length = R * (raw.t + raw.p + raw.q);
    cand.path = builder.build(cand.word);
    out.push_back(std::move(cand));
  }
  if (out.empty()) throw Error(ErrorKind::Infeasible, "no Dubins word reaches the target");
  std::size_t best = 0;
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k].length < out[best].length) best = k;
  out[best].shortest = true;
  return out;
}

Curve rigid_transform(const Curve& c, const Eigen::MatrixXd& Q, const Vector& b) {
  Curve out = c;
  out.points = (Q * c.points).colwise() + b;
  return out;
}

}  // namespace elastica
