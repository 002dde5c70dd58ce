#pragma once

// Closed-form curves used as fixtures: arcs, helices, concatenations of arcs
// and segments, the semicircle triple with its comparison curves, and Dubins
// paths.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "elastica/geometry.hpp"
#include "elastica/residuals.hpp"

namespace elastica {

/// center + r (cos theta e1 + sin theta e2), theta = start_angle + sign(sweep) sigma / r.
struct ArcSpec {
  Vector center;
  double radius = 1.0;
  Vector e1;
  Vector e2;
  double start_angle = 0.0;
  double sweep = 0.0;  // positive: counter-clockwise in the (e1, e2) orientation
};

struct Segment {
  Vector from;
  Vector to;
};

struct Piece {
  std::variant<ArcSpec, Segment> geom;

  bool is_arc() const { return std::holds_alternative<ArcSpec>(geom); }
  double length() const;
  Vector point(double sigma) const;
  Vector tangent(double sigma) const;
  Vector second(double sigma) const;
};

struct PiecewisePath {
  std::vector<Piece> pieces;
  std::string word;  // e.g. "LSR"; informational

  double length() const;
  int dim() const;
  /// Throws InvalidBlueprint when adjacent pieces do not share point and tangent within 1e-10.
  void validate() const;
  /// Arc-length samples, s relative to the start.
  Curve sample(int N) const;
  Field tangents(std::span<const double> s) const;
  Field seconds(std::span<const double> s) const;
  Vector point_at(double s) const;
  Vector tangent_at(double s) const;
  /// Cumulative piece boundaries, size pieces+1.
  std::vector<double> breakpoints() const;

 private:
  std::pair<std::size_t, double> locate(double s) const;
};

/// Planar turtle: lines and arcs of signed sweep (positive turns left).
class PathBuilder {
 public:
  PathBuilder(Vector start, Vector heading, Vector e1, Vector e2);
  PathBuilder(Vector start, Vector heading);  // e1, e2 = first two axes

  PathBuilder& line(double length);
  PathBuilder& arc(double radius, double sweep);
  PiecewisePath build(std::string word = {}) const;
  const Vector& position() const { return pos_; }
  const Vector& heading() const { return head_; }

 private:
  Vector pos_;
  Vector head_;
  Vector e1_;
  Vector e2_;
  PiecewisePath path_;
};

struct BoundaryData {
  Vector a1;
  Vector a2;
  Vector T1;
  Vector T2;
};

BoundaryData boundary_of(const PiecewisePath& path);
ProblemSpec problem_from(const BoundaryData& b, double length,
                         const WeightFunction& alpha = WeightFunction::constant(1.0));

struct Fixture {
  Curve curve;
  Field tangents;  // exact T at the nodes
  ElasticaCertificate certificate;
  bool minimiser_certified = false;
};

/// Arc of radius r from (r, 0) counter-clockwise, T(s) = (-sin(s/r), cos(s/r)).
/// Certificate g = lambda . T + 1 with lambda = (sin(l/2r), -cos(l/2r)); it
/// satisfies the minimiser bounds exactly when l <= 2 pi r / 3.
Fixture make_circular_arc(double r, double ell, int N);

/// Three semicircles of radius 1/3 from (-1, 0) to (1, 0).
PiecewisePath semicircle_triple_path();
struct TripleFixture {
  Curve curve;
  BoundaryData boundary;
};
TripleFixture make_semicircle_triple(int N);

/// r (3 pi - 4 omega(r)), omega(r) = arccos((1 - r) / 2r), for r in [1/3, 1].
double comparison_length(double r);
PiecewisePath comparison_path(double r);
Curve make_comparison_curve(double r, int N);

struct HelixSpec {
  double r = 1.0;
  double omega = 0.7853981633974483;
  double length = 1.0;
};
double helix_eta(double omega);
/// gamma(s) = (r cos w cos(s/r), r cos w sin(s/r), s sin w), lambda = e3, g = lambda . T - eta.
Fixture make_helix(const HelixSpec& h, int N);
Field helix_tangents(const HelixSpec& h, std::span<const double> s);

struct BlueprintMove {
  bool arc = false;
  double length = 0.0;  // lines
  double sweep = 0.0;   // arcs, signed
};

struct TypeIBlueprint {
  Vector start;
  Vector heading;
  double radius = 1.0;
  std::vector<BlueprintMove> moves;
  Vector line_point;
  Vector line_dir;
  std::optional<Vector> lambda;  // when present, junction signs are checked against it
};

PiecewisePath build_type_i_path(const TypeIBlueprint& bp);
Curve make_type_i_concat(const TypeIBlueprint& bp, int N);

struct DubinsCandidate {
  std::string word;
  double t = 0.0;  // normalised piece lengths (angles for arcs)
  double p = 0.0;
  double q = 0.0;
  double length = 0.0;
  bool shortest = false;
  PiecewisePath path;
};

/// The six classical words; only those whose construction reaches the target are returned.
std::vector<DubinsCandidate> make_dubins_candidates(const BoundaryData& b, double R);

/// Rotates and translates a curve: x -> Q x + b.
Curve rigid_transform(const Curve& c, const Eigen::MatrixXd& Q, const Vector& b);

}  // namespace elastica
