#pragma once

// CSV, JSON and SVG exports, and the run configuration.
//
// CSV: header row, then one row per node. Curves: s (or t), x1..xn and
// optional named scalar columns. Floats are the shortest decimal that
// round-trips.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "elastica/classifier.hpp"
#include "elastica/families.hpp"
#include "elastica/geometry.hpp"
#include "elastica/lp_solver.hpp"
#include "elastica/residuals.hpp"
#include "elastica/shooting.hpp"

namespace elastica {

using Json = nlohmann::json;

std::string format_double(double x);
double parse_double(const std::string& text);

struct NamedColumn {
  std::string name;
  std::vector<double> values;
};

void write_curve_csv(std::ostream& os, const Curve& c, const std::vector<NamedColumn>& extra = {});
void write_tangent_csv(std::ostream& os, const TangentField& tau, const std::vector<NamedColumn>& extra = {});
/// t, tau1..n, f, |tau'|, B.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const Vector& lambda);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};
CsvTable read_csv(std::istream& is);
/// Columns s|t and x1..xn; param and s are both set from the first column.
Curve curve_from_csv(const CsvTable& table);

Json to_json(const Curve& c);
Curve curve_from_json(const Json& j);
Json to_json(const TangentField& tau);
Json to_json(const ElasticaCertificate& cert);
ElasticaCertificate certificate_from_json(const Json& j);
Json to_json(const StructureReport& rep);
Json to_json(const ShootResult& res);
Json to_json(const SolverResult& res);
Json to_json(const ContinuationResult& res);
Json to_json(const std::vector<DubinsCandidate>& cands);
Json to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& field);

WeightFunction weight_from_json(const Json& j, const std::string& field);
ProblemSpec problem_from_json(const Json& j);
BoundaryData boundary_from_json(const Json& j);
TypeIBlueprint blueprint_from_json(const Json& j);

struct SvgOptions {
  double stroke = 0.01;
  std::optional<Line> line;  // drawn across the curve's bounding box
};

/// 2D: one panel. 3D and higher: (x1, x2) and (x1, x3) orthographic panels.
/// Coordinates are written unscaled at full precision; the y flip lives in a transform.
void write_svg(std::ostream& os, const Curve& c, const SvgOptions& opts = {});
/// Points of every polyline with class "curve", in document order.
std::vector<std::vector<std::pair<double, double>>> read_svg_polylines(std::istream& is);

struct RunConfig {
  std::string command;
  std::optional<ProblemSpec> problem;
  std::optional<double> mu;
  std::vector<double> schedule = default_schedule();
  int N = 1024;
  SolverOptions solver;
  AnchorMode anchor = AnchorMode::Proximal;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool svg = false;
  bool trace = false;
  ClassifyOptions classify;
  Json payload = Json::object();
};

/// Throws Error(Parse) naming the offending field.
RunConfig run_config_from_json(const Json& j);
RunConfig load_run_config(const std::string& path);

}  // namespace elastica
