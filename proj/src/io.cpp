#include "elastica/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "elastica/error.hpp"

namespace elastica {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error(ErrorKind::InvalidArgument, "unformattable number");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  std::size_t b = text.find_first_not_of(" \t\r\n");
  std::size_t e = text.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) throw Error(ErrorKind::Parse, "empty number");
  const char* first = text.data() + b;
  const char* last = text.data() + e + 1;
  if (*first == '+') ++first;
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) throw Error(ErrorKind::Parse, "bad number '" + text + "'");
  return x;
}

namespace {

void write_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
  os << '\n';
}

void check_extra(const std::vector<NamedColumn>& extra, std::size_t rows) {
  for (const auto& c : extra)
    if (c.values.size() != rows) throw Error(ErrorKind::Dimension, "column '" + c.name + "' has the wrong length");
}

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Parse, "field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad_field(path.empty() ? key : path + "." + key, "missing");
  return j.at(key);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) bad_field(field, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) bad_field(field, "expected an integer");
  return j.get<int>();
}

bool boolean(const Json& j, const std::string& field) {
  if (!j.is_boolean()) bad_field(field, "expected true or false");
  return j.get<bool>();
}

std::vector<double> numbers(const Json& j, const std::string& field) {
  if (!j.is_array()) bad_field(field, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, field));
  return out;
}

std::string frame_name(Frame f) {
  switch (f) {
    case Frame::Original: return "original";
    case Frame::Rescaled: return "rescaled";
    case Frame::SystemU: return "system-u";
  }
  return "original";
}

Json field_json(const Field& F) {
  Json rows = Json::array();
  for (int i = 0; i < F.cols(); ++i) rows.push_back(to_json(Vector(F.col(i))));
  return rows;
}

Field field_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) bad_field(field, "expected an array of vectors");
  if (j.empty()) return Field();
  const Vector first = vector_from_json(j[0], field);
  Field F(first.size(), j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector v = vector_from_json(j[i], field);
    if (v.size() != first.size()) bad_field(field, "ragged rows");
    F.col(i) = v;
  }
  return F;
}

}  // namespace

void write_curve_csv(std::ostream& os, const Curve& c, const std::vector<NamedColumn>& extra) {
  const int M = c.nodes();
  check_extra(extra, M);
  const bool arc = c.tag == Parametrization::ArcLength;
  os << (arc ? "s" : "t");
  for (int d = 0; d < c.dim(); ++d) os << ",x" << d + 1;
  for (const auto& e : extra) os << ',' << e.name;
  os << '\n';
  std::vector<double> row;
  for (int i = 0; i < M; ++i) {
    row.clear();
    row.push_back(arc ? c.s[i] : c.param[i]);
    for (int d = 0; d < c.dim(); ++d) row.push_back(c.points(d, i));
    for (const auto& e : extra) row.push_back(e.values[i]);
    write_row(os, row);
  }
}

void write_tangent_csv(std::ostream& os, const TangentField& tau, const std::vector<NamedColumn>& extra) {
  const int M = tau.N() + 1;
  check_extra(extra, M);
  os << 't';
  for (int d = 0; d < tau.dim(); ++d) os << ",x" << d + 1;
  for (const auto& e : extra) os << ',' << e.name;
  os << '\n';
  std::vector<double> row;
  for (int i = 0; i < M; ++i) {
    row.clear();
    row.push_back(i * tau.dt());
    for (int d = 0; d < tau.dim(); ++d) row.push_back(tau.values(d, i));
    for (const auto& e : extra) row.push_back(e.values[i]);
    write_row(os, row);
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const Vector& lambda) {
  const int n = static_cast<int>(tr.tau.rows());
  os << 't';
  for (int d = 0; d < n; ++d) os << ",tau" << d + 1;
  os << ",f,speed,B\n";
  std::vector<double> row;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    row.clear();
    row.push_back(tr.t[i]);
    for (int d = 0; d < n; ++d) row.push_back(tr.tau(d, i));
    row.push_back(tr.f[i]);
    row.push_back(tr.tau_prime.col(i).norm());
    row.push_back(conserved_B(tr.tau.col(i), tr.tau_prime.col(i), tr.f[i], lambda));
    write_row(os, row);
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(is, line)) throw Error(ErrorKind::Parse, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split(line);
  t.columns.assign(t.header.size(), {});
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw Error(ErrorKind::Parse, "CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                        " cells, expected " + std::to_string(t.header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) t.columns[c].push_back(parse_double(cells[c]));
  }
  return t;
}

Curve curve_from_csv(const CsvTable& table) {
  if (table.header.empty() || (table.header[0] != "s" && table.header[0] != "t"))
    throw Error(ErrorKind::Parse, "curve CSV must start with an s or t column");
  int n = 0;
  while (n + 1 < static_cast<int>(table.header.size()) && table.header[n + 1] == "x" + std::to_string(n + 1)) ++n;
  if (n == 0) throw Error(ErrorKind::Parse, "curve CSV has no x1 column");
  Curve c;
  c.tag = table.header[0] == "s" ? Parametrization::ArcLength : Parametrization::SpeedAlpha;
  c.param = table.columns[0];
  c.s = table.columns[0];
  const int M = static_cast<int>(c.s.size());
  c.points.resize(n, M);
  for (int d = 0; d < n; ++d)
    for (int i = 0; i < M; ++i) c.points(d, i) = table.columns[d + 1][i];
  return c;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from_json(const Json& j, const std::string& field) {
  const auto xs = numbers(j, field);
  Vector v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v(i) = xs[i];
  return v;
}

Json to_json(const Curve& c) {
  Json j;
  j["parametrization"] = c.tag == Parametrization::ArcLength ? "arc-length" : "speed-alpha";
  j["param"] = c.param;
  j["s"] = c.s;
  j["points"] = field_json(c.points);
  return j;
}

Curve curve_from_json(const Json& j) {
  Curve c;
  const Json& tag = require(j, "parametrization", "curve");
  if (tag == "arc-length")
    c.tag = Parametrization::ArcLength;
  else if (tag == "speed-alpha")
    c.tag = Parametrization::SpeedAlpha;
  else
    bad_field("curve.parametrization", "expected arc-length or speed-alpha");
  c.param = numbers(require(j, "param", "curve"), "curve.param");
  c.s = numbers(require(j, "s", "curve"), "curve.s");
  c.points = field_from_json(require(j, "points", "curve"), "curve.points");
  if (c.points.cols() != static_cast<Eigen::Index>(c.s.size()) || c.param.size() != c.s.size())
    bad_field("curve.points", "node count mismatch");
  return c;
}

Json to_json(const TangentField& tau) {
  Json j;
  j["L"] = tau.L;
  j["values"] = field_json(tau.values);
  return j;
}

Json to_json(const ElasticaCertificate& cert) {
  Json j;
  j["lambda"] = to_json(cert.lambda);
  j["k"] = cert.k;
  j["frame"] = frame_name(cert.frame);
  Json w;
  w["grid"] = cert.grid;
  w["values"] = cert.scalar;
  if (cert.u.size() > 0) w["u"] = field_json(cert.u);
  j["witness"] = w;
  if (cert.eta) j["eta"] = *cert.eta;
  return j;
}

ElasticaCertificate certificate_from_json(const Json& j) {
  ElasticaCertificate c;
  c.lambda = vector_from_json(require(j, "lambda", "certificate"), "certificate.lambda");
  c.k = number(require(j, "k", "certificate"), "certificate.k");
  const Json& f = require(j, "frame", "certificate");
  if (f == "original")
    c.frame = Frame::Original;
  else if (f == "rescaled")
    c.frame = Frame::Rescaled;
  else if (f == "system-u")
    c.frame = Frame::SystemU;
  else
    bad_field("certificate.frame", "expected original, rescaled or system-u");
  const Json& w = require(j, "witness", "certificate");
  c.grid = numbers(require(w, "grid", "certificate.witness"), "certificate.witness.grid");
  c.scalar = numbers(require(w, "values", "certificate.witness"), "certificate.witness.values");
  if (w.contains("u")) c.u = field_from_json(w["u"], "certificate.witness.u");
  if (j.contains("eta")) c.eta = number(j["eta"], "certificate.eta");
  if (c.scalar.size() != c.grid.size() && c.frame != Frame::SystemU)
    bad_field("certificate.witness.values", "length differs from grid");
  return c;
}

Json to_json(const StructureReport& rep) {
  Json j;
  j["verdict"] = to_string(rep.verdict);
  j["k"] = rep.k;
  j["hull_dimension"] = rep.hull_dimension;
  if (rep.lambda) j["lambda"] = to_json(*rep.lambda);
  if (rep.line) j["line"] = {{"point", to_json(rep.line->point)}, {"direction", to_json(rep.line->direction)}};
  Json ivs = Json::array();
  for (const auto& r : rep.intervals) {
    ivs.push_back({{"s_begin", r.interval.s_begin},
                   {"s_end", r.interval.s_end},
                   {"open_begin", r.interval.open_begin},
                   {"open_end", r.interval.open_end},
                   {"radius", r.radius},
                   {"sense", r.sense},
                   {"planar", r.planar},
                   {"constant_curvature", r.constant_curvature},
                   {"junction_signs", r.junction_signs}});
  }
  j["intervals"] = ivs;
  Json pieces = Json::array();
  for (const auto& p : rep.pieces) {
    const char* kind = p.kind == PieceKind::Line ? "line" : p.kind == PieceKind::Arc ? "arc" : "other";
    Json pj = {{"kind", kind}, {"s_begin", p.s_begin}, {"s_end", p.s_end}, {"junction", p.junction}};
    if (p.kind == PieceKind::Arc) {
      pj["radius"] = p.radius;
      pj["sense"] = p.sense;
    }
    pieces.push_back(pj);
  }
  j["pieces"] = pieces;
  Json checks = Json::object();
  for (const auto& [name, ok] : rep.checks) checks[name] = ok;
  j["checks"] = checks;
  if (rep.certificate) j["certificate"] = to_json(*rep.certificate);
  const auto& t = rep.tolerances;
  j["tolerances"] = {{"curvature", t.curvature_tol},      {"line", t.line_tol},
                     {"planarity", t.planarity_tol},      {"line_distance", t.line_distance_tol},
                     {"other_fraction", t.other_fraction}, {"straight", t.straight_tol},
                     {"junction_window", t.junction_window}, {"certificate", t.certificate_tol}};
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

Json to_json(const ShootResult& res) {
  Json j;
  j["converged"] = res.converged;
  j["lambda"] = to_json(res.lambda);
  j["f0"] = res.f0;
  j["tau1"] = to_json(res.tau1);
  j["k"] = res.k;
  j["defect"] = res.defect;
  j["start_index"] = res.start_index;
  j["start_defects"] = res.start_defects;
  j["speed_drift"] = res.trajectory.speed_drift;
  j["B_drift"] = res.trajectory.B_drift;
  j["sphere_deviation"] = res.trajectory.sphere_deviation;
  j["min_f"] = res.trajectory.min_f;
  return j;
}

Json to_json(const SolverResult& res) {
  Json j;
  j["p"] = res.p;
  j["mu"] = res.mu;
  j["Lambda"] = to_json(res.Lambda);
  j["k_p"] = res.k_p;
  j["J"] = res.J;
  j["el_residual"] = res.el_residual;
  j["constraint_residual"] = res.constraint_residual;
  j["stationarity"] = res.stationarity;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  if (!res.warning.empty()) j["warning"] = res.warning;
  return j;
}

Json to_json(const ContinuationResult& res) {
  Json j;
  j["schedule"] = res.schedule;
  j["mu"] = res.mu;
  j["k_inf_estimate"] = res.k_inf_estimate;
  j["lambda_estimate"] = to_json(res.lambda_estimate);
  j["m_p"] = res.m_p;
  j["lambda_norms"] = res.lambda_norms;
  j["monotone"] = res.monotone;
  j["monotonicity_violations"] = res.monotonicity_violations;
  Json stages = Json::array();
  for (const auto& s : res.stages) stages.push_back(to_json(s));
  j["stages"] = stages;
  return j;
}

Json to_json(const std::vector<DubinsCandidate>& cands) {
  Json a = Json::array();
  for (const auto& c : cands)
    a.push_back({{"word", c.word}, {"t", c.t}, {"p", c.p}, {"q", c.q}, {"length", c.length}, {"shortest", c.shortest}});
  return a;
}

WeightFunction weight_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return WeightFunction::constant(j.get<double>());
  if (!j.is_object()) bad_field(field, "expected a number or an object with knots and values");
  const auto knots = numbers(require(j, "knots", field), join(field, "knots"));
  const auto values = numbers(require(j, "values", field), join(field, "values"));
  Interpolation interp = Interpolation::PiecewiseConstant;
  if (j.contains("interpolation")) {
    const Json& k = j["interpolation"];
    if (k == "linear")
      interp = Interpolation::PiecewiseLinear;
    else if (k != "constant")
      bad_field(join(field, "interpolation"), "expected constant or linear");
  }
  try {
    return WeightFunction(knots, values, interp);
  } catch (const Error& e) {
    bad_field(field, e.what());
  }
}

ProblemSpec problem_from_json(const Json& j) {
  const std::string f = "problem";
  if (!j.is_object()) bad_field(f, "expected an object");
  ProblemSpec p;
  p.length = number(require(j, "length", f), join(f, "length"));
  p.a1 = vector_from_json(require(j, "a1", f), join(f, "a1"));
  p.a2 = vector_from_json(require(j, "a2", f), join(f, "a2"));
  p.T1 = vector_from_json(require(j, "T1", f), join(f, "T1"));
  p.T2 = vector_from_json(require(j, "T2", f), join(f, "T2"));
  p.n = j.contains("n") ? integer(j["n"], join(f, "n")) : static_cast<int>(p.a1.size());
  if (j.contains("alpha")) p.alpha = weight_from_json(j["alpha"], join(f, "alpha"));
  try {
    p.validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) throw;
    bad_field(f, e.what());
  }
  return p;
}

BoundaryData boundary_from_json(const Json& j) {
  const std::string f = "boundary";
  if (!j.is_object()) bad_field(f, "expected an object");
  BoundaryData b;
  b.a1 = vector_from_json(require(j, "a1", f), join(f, "a1"));
  b.a2 = vector_from_json(require(j, "a2", f), join(f, "a2"));
  b.T1 = vector_from_json(require(j, "T1", f), join(f, "T1"));
  b.T2 = vector_from_json(require(j, "T2", f), join(f, "T2"));
  return b;
}

TypeIBlueprint blueprint_from_json(const Json& j) {
  const std::string f = "blueprint";
  if (!j.is_object()) bad_field(f, "expected an object");
  TypeIBlueprint bp;
  bp.start = vector_from_json(require(j, "start", f), join(f, "start"));
  bp.heading = vector_from_json(require(j, "heading", f), join(f, "heading"));
  bp.radius = number(require(j, "radius", f), join(f, "radius"));
  bp.line_point = vector_from_json(require(j, "line_point", f), join(f, "line_point"));
  bp.line_dir = vector_from_json(require(j, "line_dir", f), join(f, "line_dir"));
  if (j.contains("lambda")) bp.lambda = vector_from_json(j["lambda"], join(f, "lambda"));
  const Json& moves = require(j, "moves", f);
  if (!moves.is_array()) bad_field(join(f, "moves"), "expected an array");
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const std::string mf = join(f, "moves[" + std::to_string(i) + "]");
    const Json& m = moves[i];
    BlueprintMove mv;
    if (m.contains("line")) {
      mv.arc = false;
      mv.length = number(m["line"], join(mf, "line"));
    } else if (m.contains("arc")) {
      mv.arc = true;
      mv.sweep = number(m["arc"], join(mf, "arc"));
    } else {
      bad_field(mf, "expected {\"line\": length} or {\"arc\": sweep}");
    }
    bp.moves.push_back(mv);
  }
  return bp;
}

namespace {

struct Panel {
  int a = 0;
  int b = 1;
};

std::pair<double, double> range_of(const Field& P, int row) {
  return {P.row(row).minCoeff(), P.row(row).maxCoeff()};
}

}  // namespace

void write_svg(std::ostream& os, const Curve& c, const SvgOptions& opts) {
  if (c.nodes() == 0 || c.dim() < 2) throw Error(ErrorKind::Dimension, "SVG export needs a curve in R^2 or higher");
  std::vector<Panel> panels{{0, 1}};
  if (c.dim() >= 3) panels.push_back({0, 2});
  const int W = 480;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W * panels.size() << "\" height=\"" << W
     << "\" viewBox=\"0 0 " << panels.size() << " 1\">\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto [xmin, xmax] = range_of(c.points, panels[k].a);
    const auto [ymin, ymax] = range_of(c.points, panels[k].b);
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double pad = 0.05 * span;
    const double x0 = xmin - pad, y0 = -(ymax + pad);
    const double w = xmax - xmin + 2 * pad, h = ymax - ymin + 2 * pad;
    os << "  <svg x=\"" << k << "\" y=\"0\" width=\"1\" height=\"1\" viewBox=\"" << format_double(x0) << ' '
       << format_double(y0) << ' ' << format_double(w) << ' ' << format_double(h)
       << "\" preserveAspectRatio=\"xMidYMid meet\">\n";
    os << "    <g transform=\"scale(1,-1)\" data-axes=\"x" << panels[k].a + 1 << ",x" << panels[k].b + 1 << "\">\n";
    if (opts.line && k == 0) {
      const Vector& p = opts.line->point;
      const Vector& d = opts.line->direction;
      const double reach = 2.0 * span + (p - c.points.col(0)).norm();
      const int a = panels[k].a, b = panels[k].b;
      os << "      <line class=\"line\" x1=\"" << format_double(p(a) - reach * d(a)) << "\" y1=\""
         << format_double(p(b) - reach * d(b)) << "\" x2=\"" << format_double(p(a) + reach * d(a)) << "\" y2=\""
         << format_double(p(b) + reach * d(b)) << "\" stroke=\"#888\" stroke-width=\""
         << format_double(opts.stroke * span) << "\" stroke-dasharray=\""
         << format_double(4 * opts.stroke * span) << "\"/>\n";
    }
    os << "      <polyline class=\"curve\" fill=\"none\" stroke=\"black\" stroke-width=\""
       << format_double(opts.stroke * span) << "\" points=\"";
    for (int i = 0; i < c.nodes(); ++i)
      os << (i ? " " : "") << format_double(c.points(panels[k].a, i)) << ','
         << format_double(c.points(panels[k].b, i));
    os << "\"/>\n    </g>\n  </svg>\n";
  }
  os << "</svg>\n";
}

std::vector<std::vector<std::pair<double, double>>> read_svg_polylines(std::istream& is) {
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string doc = buf.str();
  std::vector<std::vector<std::pair<double, double>>> out;
  std::size_t pos = 0;
  while ((pos = doc.find("<polyline", pos)) != std::string::npos) {
    const std::size_t end = doc.find("/>", pos);
    if (end == std::string::npos) throw Error(ErrorKind::Parse, "unterminated polyline");
    const std::string tag = doc.substr(pos, end - pos);
    pos = end;
    if (tag.find("class=\"curve\"") == std::string::npos) continue;
    const std::size_t p0 = tag.find("points=\"");
    if (p0 == std::string::npos) throw Error(ErrorKind::Parse, "polyline without points");
    const std::size_t p1 = tag.find('"', p0 + 8);
    std::stringstream pts(tag.substr(p0 + 8, p1 - p0 - 8));
    std::vector<std::pair<double, double>> line;
    std::string pair;
    while (pts >> pair) {
      const std::size_t comma = pair.find(',');
      if (comma == std::string::npos) throw Error(ErrorKind::Parse, "bad polyline point '" + pair + "'");
      line.emplace_back(parse_double(pair.substr(0, comma)), parse_double(pair.substr(comma + 1)));
    }
    out.push_back(std::move(line));
  }
  return out;
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) bad_field("<root>", "expected an object");
  RunConfig rc;
  rc.payload = j;
  if (j.contains("command")) {
    if (!j["command"].is_string()) bad_field("command", "expected a string");
    rc.command = j["command"].get<std::string>();
  }
  if (j.contains("problem")) rc.problem = problem_from_json(j["problem"]);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) bad_field("seed", "expected an integer");
    rc.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("solver")) {
    const Json& s = j["solver"];
    if (!s.is_object()) bad_field("solver", "expected an object");
    if (s.contains("mu")) rc.mu = number(s["mu"], "solver.mu");
    if (s.contains("schedule")) {
      rc.schedule = numbers(s["schedule"], "solver.schedule");
      if (rc.schedule.empty()) bad_field("solver.schedule", "must not be empty");
      for (double p : rc.schedule)
        if (!(p >= 2.0)) bad_field("solver.schedule", "exponents must be at least 2");
    }
    if (s.contains("N")) {
      rc.N = integer(s["N"], "solver.N");
      if (rc.N < 16) bad_field("solver.N", "must be at least 16");
    }
    if (s.contains("tol_c")) rc.solver.tol_c = number(s["tol_c"], "solver.tol_c");
    if (s.contains("tol_g")) rc.solver.tol_g = number(s["tol_g"], "solver.tol_g");
    if (s.contains("max_outer")) rc.solver.max_outer = integer(s["max_outer"], "solver.max_outer");
    if (s.contains("max_inner")) rc.solver.max_inner = integer(s["max_inner"], "solver.max_inner");
    if (s.contains("memory")) rc.solver.memory = integer(s["memory"], "solver.memory");
    if (s.contains("anchor")) {
      if (s["anchor"] == "proximal")
        rc.anchor = AnchorMode::Proximal;
      else if (s["anchor"] == "fixed")
        rc.anchor = AnchorMode::Fixed;
      else
        bad_field("solver.anchor", "expected proximal or fixed");
    }
    if (s.contains("method")) {
      if (s["method"] == "newton")
        rc.solver.method = SolverMethod::Newton;
      else if (s["method"] == "gradient")
        rc.solver.method = SolverMethod::Gradient;
      else
        bad_field("solver.method", "expected newton or gradient");
    }
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    if (!o.is_object()) bad_field("output", "expected an object");
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) bad_field("output.dir", "expected a string");
      rc.out_dir = o["dir"].get<std::string>();
    }
    if (o.contains("svg")) rc.svg = boolean(o["svg"], "output.svg");
    if (o.contains("trace")) rc.trace = boolean(o["trace"], "output.trace");
  }
  if (j.contains("classify")) {
    const Json& c = j["classify"];
    if (!c.is_object()) bad_field("classify", "expected an object");
    auto& t = rc.classify;
    if (c.contains("curvature_tol")) t.curvature_tol = number(c["curvature_tol"], "classify.curvature_tol");
    if (c.contains("line_tol")) t.line_tol = number(c["line_tol"], "classify.line_tol");
    if (c.contains("planarity_tol")) t.planarity_tol = number(c["planarity_tol"], "classify.planarity_tol");
    if (c.contains("line_distance_tol"))
      t.line_distance_tol = number(c["line_distance_tol"], "classify.line_distance_tol");
    if (c.contains("other_fraction")) t.other_fraction = number(c["other_fraction"], "classify.other_fraction");
    if (c.contains("straight_tol")) t.straight_tol = number(c["straight_tol"], "classify.straight_tol");
    if (c.contains("junction_window"))
      t.junction_window = integer(c["junction_window"], "classify.junction_window");
    if (c.contains("certificate_tol")) t.certificate_tol = number(c["certificate_tol"], "classify.certificate_tol");
  }
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml")
    throw Error(ErrorKind::Parse, "config '" + path + "': TOML is not supported, use JSON");
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "config '" + path + "': cannot open");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, "config '" + path + "': " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace elastica
