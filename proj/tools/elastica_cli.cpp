// Batch front-end: solve, verify, classify, family, dubins, shoot.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "elastica/classifier.hpp"
#include "elastica/error.hpp"
#include "elastica/families.hpp"
#include "elastica/io.hpp"
#include "elastica/lp_solver.hpp"
#include "elastica/residuals.hpp"
#include "elastica/shooting.hpp"

namespace fs = std::filesystem;
using namespace elastica;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kNoConvergence = 3 };

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool trace = false;
  bool svg = false;
  std::vector<std::string> args;
};

RunConfig resolve(const Flags& f, const std::string& command) {
  RunConfig rc;
  if (!f.config.empty()) rc = load_run_config(f.config);
  if (!rc.command.empty() && rc.command != command)
    throw Error(ErrorKind::Parse, "field 'command': config is for '" + rc.command + "', not '" + command + "'");
  rc.command = command;
  if (!f.out.empty()) rc.out_dir = f.out;
  if (f.seed) rc.seed = *f.seed;
  if (f.trace) rc.trace = true;
  if (f.svg) rc.svg = true;
  rc.solver.seed = rc.seed;
  fs::create_directories(rc.out_dir);
  return rc;
}

std::string out_path(const RunConfig& rc, const std::string& name) { return (fs::path(rc.out_dir) / name).string(); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_curve_files(const RunConfig& rc, const std::string& stem, const Curve& c,
                       const std::optional<Line>& line = std::nullopt) {
  std::ostringstream csv;
  write_curve_csv(csv, c);
  write_text(out_path(rc, stem + ".csv"), csv.str());
  write_json(out_path(rc, stem + ".json"), to_json(c));
  if (rc.svg) {
    std::ostringstream svg;
    SvgOptions so;
    so.line = line;
    write_svg(svg, c, so);
    write_text(out_path(rc, stem + ".svg"), svg.str());
  }
}

Curve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "curve '" + path + "': cannot open");
  if (fs::path(path).extension() == ".json") {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::Parse, "curve '" + path + "': " + e.what());
    }
    return curve_from_json(j.contains("curve") ? j["curve"] : j);
  }
  return curve_from_csv(read_csv(in));
}

ElasticaCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "certificate '" + path + "': cannot open");
  try {
    return certificate_from_json(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, "certificate '" + path + "': " + e.what());
  }
}

std::string payload_string(const RunConfig& rc, const std::string& key, const std::vector<std::string>& args,
                           std::size_t pos) {
  if (pos < args.size()) return args[pos];
  if (rc.payload.contains(key) && rc.payload[key].is_string()) return rc.payload[key].get<std::string>();
  throw Error(ErrorKind::Parse, "field '" + key + "': missing");
}

WeightFunction payload_alpha(const RunConfig& rc) {
  if (rc.problem) return rc.problem->alpha;
  if (rc.payload.contains("alpha")) return weight_from_json(rc.payload["alpha"], "alpha");
  return WeightFunction::constant(1.0);
}

int payload_int(const RunConfig& rc, const std::string& key, int fallback) {
  if (!rc.payload.contains(key)) return fallback;
  if (!rc.payload[key].is_number_integer()) throw Error(ErrorKind::Parse, "field '" + key + "': expected an integer");
  return rc.payload[key].get<int>();
}

double payload_number(const RunConfig& rc, const std::string& key, double fallback) {
  if (!rc.payload.contains(key)) return fallback;
  if (!rc.payload[key].is_number()) throw Error(ErrorKind::Parse, "field '" + key + "': expected a number");
  return rc.payload[key].get<double>();
}

// Tangent field of a speed-alpha curve sampled on a uniform t grid.
TangentField tangents_in_t(const Curve& c) {
  const int M = c.nodes();
  if (M < 3) throw Error(ErrorKind::InsufficientResolution, "curve needs at least 3 nodes");
  TangentField tau;
  tau.L = c.param.back() - c.param.front();
  tau.values.resize(c.dim(), M);
  const double h = tau.L / (M - 1);
  for (int i = 0; i < M; ++i) {
    Vector d;
    if (i == 0)
      d = (-3.0 * c.points.col(0) + 4.0 * c.points.col(1) - c.points.col(2)) / (2 * h);
    else if (i == M - 1)
      d = (3.0 * c.points.col(M - 1) - 4.0 * c.points.col(M - 2) + c.points.col(M - 3)) / (2 * h);
    else
      d = (c.points.col(i + 1) - c.points.col(i - 1)) / (2 * h);
    tau.values.col(i) = normalized(d);
  }
  return tau;
}

int cmd_solve(const Flags& f) {
  RunConfig rc = resolve(f, "solve");
  if (!rc.problem) throw Error(ErrorKind::Parse, "field 'problem': missing");
  const ProblemSpec& spec = *rc.problem;
  ContinuationOptions opts;
  opts.solver = rc.solver;
  opts.anchor = rc.anchor;
  std::ofstream trace;
  if (rc.trace) {
    trace.open(out_path(rc, "trace.csv"));
    write_trace_header(trace);
    opts.solver.trace = &trace;
  }
  const TangentField init = initial_field(spec, rc.N, rc.seed);
  const ContinuationResult res = continuation_solve(spec, rc.mu, rc.schedule, init, opts);
  const SolverResult& last = res.stages.back();
  const Reparametrization rep = build_reparametrization(spec.alpha, spec.length, rc.N);
  const Curve curve = integrate_tangent(last.tau, rep, spec.a1);

  StructureReport report;
  try {
    report = classify(curve, spec.alpha, rc.classify);
  } catch (const Error& e) {
    report.note = e.what();
  }
  write_curve_files(rc, "solution", curve, report.line);
  {
    std::ostringstream csv;
    write_tangent_csv(csv, last.tau);
    write_text(out_path(rc, "tangent.csv"), csv.str());
  }
  Json sol = to_json(res);
  sol["curve"] = to_json(curve);
  write_json(out_path(rc, "solve.json"), sol);
  if (res.u_estimate) {
    ElasticaCertificate cert;
    cert.frame = Frame::SystemU;
    cert.k = res.k_inf_estimate;
    cert.lambda = res.lambda_estimate;
    cert.grid = rep.t;
    cert.u = *res.u_estimate;
    write_json(out_path(rc, "certificate.json"), to_json(cert));
  }
  write_json(out_path(rc, "report.json"), to_json(report));

  std::cout << "k = " << format_double(res.k_inf_estimate) << "\n";
  std::cout << "lambda = " << to_json(res.lambda_estimate).dump() << "\n";
  std::cout << "monotone = " << (res.monotone ? "yes" : "no") << "\n";
  std::cout << report.summary();
  if (!last.converged) {
    std::cerr << "solver did not converge at p = " << last.p << (last.warning.empty() ? "" : ": " + last.warning)
              << "\n";
    return kNoConvergence;
  }
  return kOk;
}

int cmd_verify(const Flags& f) {
  RunConfig rc = resolve(f, "verify");
  const Curve curve = load_curve(payload_string(rc, "curve", f.args, 0));
  const ElasticaCertificate cert = load_certificate(payload_string(rc, "certificate", f.args, 1));
  const WeightFunction alpha = payload_alpha(rc);
  const double tol = payload_number(rc, "tolerance", 1e-6);
  const bool arc_length = curve.tag == Parametrization::ArcLength;
  const bool unit = alpha.is_constant() && alpha.values()[0] == 1.0;
  if (cert.frame == Frame::Original && !arc_length)
    throw Error(ErrorKind::InconsistentCertificate, "frame mismatch: original-frame certificate needs an s curve");
  if (cert.frame != Frame::Original && arc_length && !unit)
    throw Error(ErrorKind::InconsistentCertificate, "frame mismatch: rescaled certificate needs a t curve");
  if (cert.lambda.size() != curve.dim())
    throw Error(ErrorKind::InconsistentCertificate, "frame mismatch: lambda dimension differs from the curve");

  std::vector<std::pair<std::string, double>> rows;
  std::optional<MinimiserCheck> mc;
  if (cert.frame == Frame::Original) {
    if (cert.scalar.size() != static_cast<std::size_t>(curve.nodes()))
      throw Error(ErrorKind::InconsistentCertificate, "frame mismatch: witness grid differs from the curve");
    const ResidualPair r = original_residual(curve, cert.scalar, cert.lambda, alpha, cert.k);
    rows.emplace_back("original r1", r.r1);
    rows.emplace_back("original r2", r.r2);
    const Field T = curve_tangents(curve);
    if (cert.eta && unit) rows.emplace_back("helix equation", alpha1_equation_residual(T, curve.s, cert.k, cert.lambda, *cert.eta));
    mc = minimiser_certificate_check(cert, T, alpha);
  } else {
    const TangentField tau = tangents_in_t(curve);
    std::vector<double> beta(curve.nodes());
    for (int i = 0; i < curve.nodes(); ++i) beta[i] = alpha(alpha.phi(curve.param[i] - curve.param.front()));
    ResidualPair r;
    if (cert.frame == Frame::Rescaled) {
      if (cert.scalar.size() != static_cast<std::size_t>(curve.nodes()))
        throw Error(ErrorKind::InconsistentCertificate, "frame mismatch: witness grid differs from the curve");
      r = rescaled_residual(tau, cert.scalar, cert.lambda, beta, cert.k);
    } else {
      r = system_residual(tau, cert.u, cert.lambda, beta, cert.k);
    }
    rows.emplace_back("r1", r.r1);
    rows.emplace_back("r2", r.r2);
  }
  bool pass = true;
  std::cout << std::left << std::setw(18) << "residual" << std::setw(26) << "value" << "status\n";
  for (const auto& [name, v] : rows) {
    const bool ok = v <= tol;
    pass = pass && ok;
    std::cout << std::setw(18) << name << std::setw(26) << format_double(v) << (ok ? "pass" : "fail") << "\n";
  }
  if (mc)
    std::cout << std::setw(18) << "minimiser check" << std::setw(26) << format_double(mc->margin)
              << (mc->pass ? "pass" : "fail") << "\n";
  return pass ? kOk : kUsage;
}

int cmd_classify(const Flags& f) {
  RunConfig rc = resolve(f, "classify");
  const Curve curve = load_curve(payload_string(rc, "curve", f.args, 0));
  const StructureReport rep = classify(curve, payload_alpha(rc), rc.classify);
  write_json(out_path(rc, "report.json"), to_json(rep));
  if (rc.svg) {
    std::ostringstream svg;
    SvgOptions so;
    so.line = rep.line;
    write_svg(svg, curve, so);
    write_text(out_path(rc, "report.svg"), svg.str());
  }
  std::cout << rep.summary();
  return kOk;
}

std::map<std::string, double> family_params(const RunConfig& rc, const std::vector<std::string>& args) {
  std::map<std::string, double> p;
  if (rc.payload.contains("params")) {
    const Json& j = rc.payload["params"];
    if (!j.is_object()) throw Error(ErrorKind::Parse, "field 'params': expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it.value().is_number()) throw Error(ErrorKind::Parse, "field 'params." + it.key() + "': expected a number");
      p[it.key()] = it.value().get<double>();
    }
  }
  for (std::size_t i = 1; i < args.size(); ++i) {
    const auto eq = args[i].find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parse, "parameter '" + args[i] + "': expected key=value");
    p[args[i].substr(0, eq)] = parse_double(args[i].substr(eq + 1));
  }
  return p;
}

double param(const std::map<std::string, double>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw Error(ErrorKind::Parse, "field 'params." + key + "': missing");
  return it->second;
}

int cmd_family(const Flags& f) {
  RunConfig rc = resolve(f, "family");
  const std::string name = payload_string(rc, "family", f.args, 0);
  const auto p = family_params(rc, f.args);
  const int N = p.count("N") ? static_cast<int>(p.at("N")) : payload_int(rc, "N", 1024);
  if (name == "arc") {
    const Fixture fx = make_circular_arc(param(p, "r"), param(p, "l"), N);
    write_curve_files(rc, "curve", fx.curve);
    write_json(out_path(rc, "certificate.json"), to_json(fx.certificate));
    std::cout << "minimiser certified: " << (fx.minimiser_certified ? "yes" : "no") << "\n";
  } else if (name == "helix") {
    HelixSpec h;
    h.r = param(p, "r");
    h.omega = param(p, "omega");
    h.length = param(p, "l");
    const Fixture fx = make_helix(h, N);
    write_curve_files(rc, "curve", fx.curve);
    write_json(out_path(rc, "certificate.json"), to_json(fx.certificate));
  } else if (name == "semicircle-triple") {
    const TripleFixture fx = make_semicircle_triple(N - N % 3);
    Line l{Vector::Zero(2), Vector::Unit(2, 0)};
    write_curve_files(rc, "curve", fx.curve, l);
    write_json(out_path(rc, "boundary.json"), {{"a1", to_json(fx.boundary.a1)},
                                               {"a2", to_json(fx.boundary.a2)},
                                               {"T1", to_json(fx.boundary.T1)},
                                               {"T2", to_json(fx.boundary.T2)},
                                               {"length", fx.curve.length()}});
  } else if (name == "comparison") {
    const double r = param(p, "r");
    write_curve_files(rc, "curve", make_comparison_curve(r, N));
    std::cout << "length = " << format_double(comparison_length(r)) << "\n";
  } else if (name == "type-i") {
    if (!rc.payload.contains("blueprint")) throw Error(ErrorKind::Parse, "field 'blueprint': missing");
    const TypeIBlueprint bp = blueprint_from_json(rc.payload["blueprint"]);
    write_curve_files(rc, "curve", make_type_i_concat(bp, N), Line{bp.line_point, normalized(bp.line_dir)});
  } else {
    throw Error(ErrorKind::Parse, "family '" + name + "': unknown (arc, helix, semicircle-triple, comparison, type-i)");
  }
  return kOk;
}

int cmd_dubins(const Flags& f) {
  RunConfig rc = resolve(f, "dubins");
  if (!rc.payload.contains("boundary")) throw Error(ErrorKind::Parse, "field 'boundary': missing");
  const BoundaryData b = boundary_from_json(rc.payload["boundary"]);
  if (b.a1.size() != 2) throw Error(ErrorKind::Dimension, "Dubins enumeration needs n = 2");
  const double R = payload_number(rc, "R", 1.0);
  const auto cands = make_dubins_candidates(b, R);
  Json out = {{"candidates", to_json(cands)}};
  std::cout << std::left << std::setw(8) << "word" << std::setw(26) << "length" << "shortest\n";
  const DubinsCandidate* best = nullptr;
  for (const auto& c : cands) {
    std::cout << std::setw(8) << c.word << std::setw(26) << format_double(c.length) << (c.shortest ? "*" : "")
              << "\n";
    if (c.shortest) best = &c;
  }
  int code = kOk;
  if (best && rc.payload.value("cross_check", false)) {
    const ProblemSpec spec = problem_from(b, best->length);
    ContinuationOptions opts;
    opts.solver = rc.solver;
    opts.anchor = rc.anchor;
    const auto res = continuation_solve(spec, rc.mu, rc.schedule, initial_field(spec, rc.N, rc.seed), opts);
    const double ratio = std::abs(res.k_inf_estimate * R - 1.0);
    out["cross_check"] = {{"k", res.k_inf_estimate}, {"deviation", ratio}};
    std::cout << "cross-check |k R - 1| = " << format_double(ratio) << "\n";
    if (!res.stages.back().converged) code = kNoConvergence;
  }
  write_json(out_path(rc, "dubins.json"), out);
  if (best) write_curve_files(rc, "shortest", best->path.sample(payload_int(rc, "N", 1024)));
  return code;
}

int cmd_shoot(const Flags& f) {
  RunConfig rc = resolve(f, "shoot");
  if (!rc.problem) throw Error(ErrorKind::Parse, "field 'problem': missing");
  if (!rc.payload.contains("guess")) throw Error(ErrorKind::Parse, "field 'guess': missing");
  const Json& g = rc.payload["guess"];
  ShootGuess guess;
  guess.lambda = vector_from_json(g.contains("lambda") ? g["lambda"] : Json(), "guess.lambda");
  guess.tau1 = vector_from_json(g.contains("tau1") ? g["tau1"] : Json(), "guess.tau1");
  if (g.contains("f0")) {
    if (!g["f0"].is_number()) throw Error(ErrorKind::Parse, "field 'guess.f0': expected a number");
    guess.f0 = g["f0"].get<double>();
  }
  ShootOptions so;
  so.seed = rc.seed;
  so.starts = payload_int(rc, "starts", so.starts);
  const ShootResult res = shoot_boundary(*rc.problem, guess, so);
  write_json(out_path(rc, "shoot.json"), to_json(res));
  std::ostringstream csv;
  write_trajectory_csv(csv, res.trajectory, res.lambda);
  write_text(out_path(rc, "trajectory.csv"), csv.str());
  std::cout << res.report;
  return res.converged ? kOk : kNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver, verifier and classifier for curves of least weighted maximal curvature"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON run configuration");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_flag("--trace", flags.trace, "write the per-iteration trace CSV");
    sub->add_flag("--svg", flags.svg, "write SVG plots");
    sub->add_option("args", flags.args, "positional arguments");
  };
  std::map<std::string, int (*)(const Flags&)> commands = {
      {"solve", cmd_solve},   {"verify", cmd_verify}, {"classify", cmd_classify},
      {"family", cmd_family}, {"dubins", cmd_dubins}, {"shoot", cmd_shoot},
  };
  std::map<std::string, CLI::App*> subs;
  subs["solve"] = app.add_subcommand("solve", "run the continuation solver");
  subs["verify"] = app.add_subcommand("verify", "check a curve against a certificate: verify CURVE CERT");
  subs["classify"] = app.add_subcommand("classify", "structural classification: classify CURVE");
  subs["family"] = app.add_subcommand("family", "write an analytic fixture: family NAME key=value...");
  subs["dubins"] = app.add_subcommand("dubins", "enumerate Dubins words");
  subs["shoot"] = app.add_subcommand("shoot", "shooting for helicoidal boundary data");
  for (auto& [name, sub] : subs) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  for (auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    try {
      return commands[name](flags);
    } catch (const Error& e) {
      std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
      switch (e.kind()) {
        case ErrorKind::Infeasible: return kInfeasible;
        case ErrorKind::StepSizeFailure:
        case ErrorKind::SingularState:
        case ErrorKind::CoordinateBreakdown: return kNoConvergence;
        default: return kUsage;
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  return kUsage;
}
