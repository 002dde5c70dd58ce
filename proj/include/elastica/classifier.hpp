#pragma once

// Structural classification of candidate curves: planar arcs and segments
// attached to a line parallel to lambda (type i), or a single curve in a
// three-dimensional subspace with a positive certificate (type ii).

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "elastica/geometry.hpp"
#include "elastica/residuals.hpp"

namespace elastica {

struct AffineHull {
  int dimension = 0;
  Field basis;  // n x dimension, orthonormal principal directions
  Vector offset;
  double diameter = 0.0;
  std::vector<double> extents;  // point spread along each principal direction
};

/// Principal directions whose spread exceeds rel_tol * diameter.
AffineHull fit_affine_hull(const Field& points, double rel_tol = 1e-6);

enum class PieceKind { Line, Arc, Other };

struct CurvePiece {
  PieceKind kind = PieceKind::Other;
  int first = 0;  // node range, inclusive
  int last = 0;
  double s_begin = 0.0;
  double s_end = 0.0;
  double radius = 0.0;  // arcs: 1 / mean |gamma''|
  int sense = 0;        // arcs: +1 counter-clockwise in `plane`, -1 clockwise
  Field plane;          // arcs: n x 2 basis of the osculating plane
  Vector center;        // arcs with constant weight: fitted circle centre
  bool junction = false;  // short run absorbed between two pieces
};

struct ClassifyOptions {
  double curvature_tol = 1e-3;     // relative
  double line_tol = 1e-3;          // line nodes: alpha |gamma''| <= line_tol * k
  double planarity_tol = 1e-6;     // relative to the diameter
  double line_distance_tol = 1e-6; // relative to the diameter
  double other_fraction = 0.1;
  double straight_tol = 1e-6;      // k * diameter below this is a straight line
  int junction_window = 8;         // nodes inspected on each side of a junction
  double certificate_tol = 1e-4;   // type ii fit residual
};

/// Run-length segmentation of alpha |gamma''| into lines, arcs and other pieces.
/// Short line or other runs between two pieces are absorbed as junctions.
std::vector<CurvePiece> segment_curve(const Curve& gamma, const WeightFunction& alpha,
                                      const ClassifyOptions& opts = {});

struct Line {
  Vector point;
  Vector direction;  // unit
};

struct LineEstimate {
  Line line;
  Vector lambda;
};

/// Line from segment pieces or from arc junctions, lambda along it with the
/// sign fixed by the junction test. Single arcs get a line disjoint from the curve.
std::optional<LineEstimate> infer_line_and_lambda(const std::vector<CurvePiece>& pieces, const Curve& gamma,
                                                  const WeightFunction& alpha = WeightFunction::constant(1.0),
                                                  const ClassifyOptions& opts = {});

enum class SignCheck { Pass, Fail, Inconclusive };

struct Interval {
  double s_begin = 0.0;
  double s_end = 0.0;
  int first = 0;  // first and last nodes strictly inside
  int last = 0;
  bool open_begin = false;  // s_begin is a junction (in the closure, not in the interval)
  bool open_end = false;
};

/// Maximal runs of nodes off the line, split where the curve crosses it.
std::vector<Interval> off_line_intervals(const Curve& gamma, const Line& line, double tol);

/// Sign of lambda . gamma'' on up to `window` nodes after s0 (must be > 0) and
/// before s0 (must be < 0), restricted to interval nodes whose stencil stays
/// inside the interval. Without intervals every node is eligible.
SignCheck junction_sign_check(const Curve& gamma, const Vector& lambda, double s0, int window,
                              std::span<const Interval> intervals = {});

enum class Verdict { TypeI, TypeII, StraightLine, Unclassified };

std::string to_string(Verdict v);

struct IntervalReport {
  Interval interval;
  Field plane;  // n x 2, first column along the line
  double radius = 0.0;
  int sense = 0;
  bool planar = false;
  bool constant_curvature = false;
  bool junction_signs = false;
};

struct StructureReport {
  Verdict verdict = Verdict::Unclassified;
  double k = 0.0;
  int hull_dimension = 0;
  std::optional<Vector> lambda;
  std::optional<Line> line;
  std::vector<IntervalReport> intervals;
  std::vector<CurvePiece> pieces;
  std::vector<std::pair<std::string, bool>> checks;
  std::optional<ElasticaCertificate> certificate;
  ClassifyOptions tolerances;
  std::string note;

  std::string summary() const;
};

StructureReport classify(const Curve& gamma, const WeightFunction& alpha = WeightFunction::constant(1.0),
                         const ClassifyOptions& opts = {});

}  // namespace elastica
