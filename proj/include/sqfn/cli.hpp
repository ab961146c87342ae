#pragma once

// Command-line front end: argument parsing and dispatch, kept in a header so
// tests can drive it without spawning processes.
//
//   sqfn compute  --input f.csv [--input g.csv ...] [cone/class flags] --out DIR
//   sqfn norm     --kind lp|weak_l1|morrey|weak_morrey|gen|weak_gen --input f.csv ...
//   sqfn weights  --weight SPEC (--input grid.csv | file weight) --balls SPEC ...
//   sqfn verify thm --id ID --scenario FILE --out DIR
//   sqfn report   --input report.json [...] --out DIR
//
// Shared flags belong to the top-level command and may follow the subcommand.
// `--config FILE` reads "flag = value" lines; flags on the command line win.
// Exit status: 0 success, 1 usage or domain error, 2 I/O error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqfn/errors.hpp"
#include "sqfn/format.hpp"
#include "sqfn/grid.hpp"
#include "sqfn/intrinsic.hpp"
#include "sqfn/log.hpp"
#include "sqfn/morrey.hpp"
#include "sqfn/scenario.hpp"
#include "sqfn/verifier.hpp"
#include "sqfn/weights.hpp"

namespace sqfn::cli {

struct RunConfig {
  std::string command;  // compute | norm | weights | verify | report
  std::vector<std::string> inputs;
  std::optional<std::string> weight, phi, balls, scenario;
  std::optional<double> alpha, p, kappa, tmin, tmax, rho, weight_floor;
  std::optional<int> class_res;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned jobs = 0;
  std::string out = ".";
  bool out_given = false;
  std::string kind;     // norm
  std::string theorem;  // verify
};

struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = 0;  // meaningful when config is empty
};

namespace detail {

inline void error_record(std::ostream& err, const char* kind, int code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["exit"] = code;
  j["message"] = message;
  err << j.dump() << '\n';
}

}  // namespace detail

/// Parses argv. On --help the usage text goes to `out` and exit_code is 0; on
/// a usage error a record and the usage text go to `err` and exit_code is 1
/// (2 when the --config file cannot be read).
inline ParseResult parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Intrinsic square functions, Morrey norms and weight diagnostics on grids", "sqfn"};
  app.set_config("--config", "", "Read flag = value lines from FILE (command-line flags take precedence)");
  app.require_subcommand(1);

  auto number_check = [](double lo, bool lo_open, double hi, const char* msg) {
    return [=](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (const std::logic_error&) {
        return "'" + s + "' is not a number";
      }
      const bool ok = (lo_open ? v > lo : v >= lo) && v <= hi;
      return ok ? std::string() : std::string(msg);
    };
  };
  const double inf = std::numeric_limits<double>::infinity();
  auto positive = CLI::Validator(number_check(0.0, true, inf, "must be positive"), "POSITIVE");
  auto alpha_range = CLI::Validator(number_check(0.0, true, 1.0, "alpha must satisfy 0 < alpha <= 1"), "(0,1]");

  app.add_option("--input", c.inputs, "Input grid CSV (repeatable: family members) or report JSON");
  app.add_option("--weight", c.weight, "Weight: const | power:<a> | file:<csv>");
  app.add_option("--phi", c.phi, "Growth function: power:<lambda> | table:<path>");
  app.add_option("--alpha", c.alpha, "Hoelder order, 0 < alpha <= 1")->check(alpha_range);
  app.add_option("--p", c.p, "Norm exponent p >= 1");
  app.add_option("--kappa", c.kappa, "Morrey exponent, 0 < kappa < 1");
  app.add_option("--tmin", c.tmin, "Smallest cone scale")->check(positive);
  app.add_option("--tmax", c.tmax, "Largest cone scale")->check(positive);
  app.add_option("--rho", c.rho, "Cone ladder ratio > 1");
  app.add_option("--class-res", c.class_res, "Class nodes per axis")->check(CLI::Range(1, 64));
  app.add_option("--balls", c.balls, "Ball family: centered:<x>[,<y>]:<r0>:<levels> | lattice:<spacing>:<r0>:<levels>");
  app.add_option("--weight-floor", c.weight_floor, "Lower bound applied to weights")->check(positive);
  auto* seed = app.add_option("--seed", c.seed, "Seed for every random choice (default 0)");
  app.add_option("--jobs", c.jobs, "Worker threads (0 = all cores)");
  auto* out_opt = app.add_option("--out", c.out, "Output directory");

  auto* compute = app.add_subcommand("compute", "Square-function field of one function or a family");
  compute->fallthrough();
  compute->add_subcommand("sqfn", "Same as compute")->fallthrough();
  auto* norm = app.add_subcommand("norm", "One norm functional of a function (or family aggregate)");
  norm->fallthrough();
  norm->add_option("--kind", c.kind, "lp | weak_l1 | morrey | weak_morrey | gen | weak_gen")
      ->required()
      ->check(CLI::IsMember({"lp", "weak_l1", "morrey", "weak_morrey", "gen", "weak_gen"}));
  auto* weights = app.add_subcommand("weights", "Per-ball A_p, A_1 and doubling terms of a weight");
  weights->fallthrough();
  auto* verify = app.add_subcommand("verify", "Theorem ratio checks on a scenario");
  verify->fallthrough();
  verify->require_subcommand(1);
  auto* thm = verify->add_subcommand("thm", "One theorem check");
  thm->fallthrough();
  thm->add_option("--id", c.theorem, "A | B | Bbar | C | D | T1 | T2 | T3 | T4 | KEY")
      ->required()
      ->check(CLI::IsMember({"A", "B", "Bbar", "C", "D", "T1", "T2", "T3", "T4", "KEY"}));
  thm->add_option("--scenario", c.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  auto* report = app.add_subcommand("report", "Merge report JSON files");
  report->fallthrough();

  if (argc <= 1) {
    err << app.help();
    detail::error_record(err, "usage", 1, "no subcommand given");
    return {std::nullopt, 1};
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {std::nullopt, 0};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return {std::nullopt, 0};
  } catch (const CLI::FileError& e) {
    detail::error_record(err, "io", 2, e.what());
    return {std::nullopt, 2};
  } catch (const CLI::ParseError& e) {
    detail::error_record(err, "usage", 1, e.what());
    err << app.help();
    return {std::nullopt, 1};
  }

  if (compute->parsed()) c.command = "compute";
  if (norm->parsed()) c.command = "norm";
  if (weights->parsed()) c.command = "weights";
  if (verify->parsed()) c.command = "verify";
  if (report->parsed()) c.command = "report";
  c.seed_given = seed->count() > 0;
  c.out_given = out_opt->count() > 0;

  std::string missing;
  if ((c.command == "compute" || c.command == "norm" || c.command == "report") && c.inputs.empty())
    missing = "--input";
  if (c.command == "weights" && !c.weight) missing = "--weight";
  if (c.command == "weights" && c.weight && c.weight->rfind("file:", 0) != 0 && c.inputs.empty())
    missing = "--input (grid for the weight)";
  if (!missing.empty()) {
    detail::error_record(err, "usage", 1, "missing required flag " + missing + " for " + c.command);
    return {std::nullopt, 1};
  }
  return {std::move(c), 0};
}

// ---------------------------------------------------------------------------

namespace detail {

inline FunctionFamily load_family(const std::vector<std::string>& paths) {
  std::vector<GridFunction> members;
  for (const auto& p : paths) members.push_back(load_csv(p));
  return FunctionFamily(std::move(members));
}

inline std::filesystem::path prepare_out(const RunConfig& c) {
  const std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + c.out + ": " + ec.message());
  return dir;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot write " + p.string());
  return os;
}

inline void close_out(std::ofstream& os, const std::filesystem::path& p) {
  os.flush();
  if (!os) throw IoError("write failed for " + p.string());
}

inline IntrinsicParams intrinsic_params(const RunConfig& c, const Grid& g) {
  const int res = c.class_res.value_or(g.dim() == 1 ? 8 : 4);
  const double tmin = c.tmin.value_or(g.spacing());
  const double tmax = c.tmax.value_or(4.0 * g.window_radius());
  return {HoelderClassSpec::midpoint(g.dim(), c.alpha.value_or(1.0), res), ConeQuadrature(tmin, tmax, c.rho.value_or(1.25)),
          c.jobs};
}

inline Weight weight_for(const RunConfig& c, const Grid& g) {
  return make_weight(c.weight.value_or("const"), g, c.weight_floor.value_or(kDefaultWeightFloor));
}

inline BallFamily balls_for(const RunConfig& c, const Grid& g) {
  return parse_ball_family(g, c.balls.value_or("lattice:0.5:0.25:4"));
}

/// Polyline (1-D) or gray-level cells (2-D) of a nonnegative field.
inline void write_field_svg(std::ostream& os, const GridFunction& f) {
  const Grid& g = f.grid();
  double mx = 0.0;
  for (double v : f.values()) mx = std::max(mx, v);
  const double scale = mx > 0.0 ? 1.0 / mx : 0.0;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"" << (g.dim() == 1 ? 320 : 640) << "\">\n";
  if (g.dim() == 1) {
    const double lo = g.window_lo(0), hi = g.window_hi(0);
    os << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double px = 640.0 * (g.node(i)[0] - lo) / (hi - lo);
      const double py = 310.0 - 300.0 * f[i] * scale;
      os << (i ? " " : "") << format_double(px) << ',' << format_double(py);
    }
    os << "\"/>\n";
  } else {
    const double w0 = 640.0 / static_cast<double>(g.counts()[0]);
    const double w1 = 640.0 / static_cast<double>(g.counts()[1]);
    for (std::size_t i0 = 0; i0 < g.counts()[0]; ++i0) {
      for (std::size_t i1 = 0; i1 < g.counts()[1]; ++i1) {
        const int gray = static_cast<int>(std::lround(255.0 * (1.0 - f[g.index(i0, i1)] * scale)));
        os << "<rect x=\"" << format_double(w0 * static_cast<double>(i0)) << "\" y=\""
           << format_double(640.0 - w1 * static_cast<double>(i1 + 1)) << "\" width=\"" << format_double(w0)
           << "\" height=\"" << format_double(w1) << "\" fill=\"rgb(" << gray << ',' << gray << ',' << gray
           << ")\"/>\n";
      }
    }
  }
  os << "</svg>\n";
}

inline int run_compute(const RunConfig& c, std::ostream& out) {
  const FunctionFamily fam = load_family(c.inputs);
  const Grid& g = fam.grid();
  const IntrinsicParams params = intrinsic_params(c, g);
  log::info("compute: " + describe(g) + ", " + std::to_string(fam.size()) + " member(s), " +
            std::to_string(params.class_spec.size()) + " class nodes, " +
            std::to_string(params.cone.levels().size()) + " cone levels");
  const GridFunction field = FamilyField(fam, params).field(c.jobs);
  const auto dir = prepare_out(c);
  const auto csv = dir / "sqfn.csv";
  auto os = open_out(csv);
  os << (g.dim() == 1 ? "x,s_alpha\n" : "x,y,s_alpha\n");
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Point x = g.node(i);
    os << format_double(x[0]) << ',';
    if (g.dim() == 2) os << format_double(x[1]) << ',';
    os << format_double(field[i]) << '\n';
  }
  close_out(os, csv);
  const auto svg = dir / "sqfn.svg";
  auto vs = open_out(svg);
  write_field_svg(vs, field);
  close_out(vs, svg);
  double mx = 0.0;
  for (double v : field.values()) mx = std::max(mx, v);
  nlohmann::ordered_json j;
  j["nodes"] = field.size();
  j["max_s_alpha"] = mx;
  j["tail_bound"] = [&] {
    double b = 0.0;
    for (const auto& f : fam) b += cone_tail_bound(f, params.cone);
    return b;
  }();
  j["csv"] = csv.string();
  out << j.dump() << '\n';
  return 0;
}

inline int run_norm(const RunConfig& c, std::ostream& out) {
  const FunctionFamily fam = load_family(c.inputs);
  const GridFunction f = fam.size() == 1 ? fam[0] : l2_aggregate(fam);
  const Grid& g = f.grid();
  const double p = c.p.value_or(c.kind == "lp" || c.kind == "morrey" || c.kind == "gen" ? 2.0 : 1.0);
  const double kappa = c.kappa.value_or(0.3);
  NormReport r;
  std::optional<BallFamily> balls;
  if (c.kind == "lp") {
    r.value = lp_norm(f, p, weight_for(c, g));
  } else if (c.kind == "weak_l1") {
    const LevelSup ls = weak_l1(f, weight_for(c, g));
    r.value = ls.value;
    r.maximizing_lambda = ls.lambda;
  } else {
    balls = balls_for(c, g);
    if (c.kind == "morrey") {
      r = weighted_morrey_norm(f, MorreyParams(p, kappa), weight_for(c, g), *balls);
    } else if (c.kind == "weak_morrey") {
      r = weak_weighted_morrey_norm(f, kappa, weight_for(c, g), *balls);
    } else {
      if (!c.phi) throw std::invalid_argument("norm --kind " + c.kind + " needs --phi");
      const GrowthFunction phi = parse_growth(*c.phi);
      r = c.kind == "gen" ? generalized_morrey_norm(f, p, phi, *balls) : weak_generalized_morrey_norm(f, phi, *balls);
    }
  }
  nlohmann::ordered_json j;
  j["kind"] = c.kind;
  j["value"] = r.value;
  if (r.maximizing_ball) j["maximizing_ball"] = *r.maximizing_ball;
  if (r.maximizing_lambda) j["maximizing_lambda"] = *r.maximizing_lambda;
  if (r.vanishes_on_family) j["vanishes_on_family"] = true;
  out << j.dump() << '\n';
  if (c.out_given && balls) {
    const auto path = prepare_out(c) / "norm.csv";
    auto os = open_out(path);
    os << "ball_index,center,radius,term\n";
    for (std::size_t i = 0; i < balls->size(); ++i)
      os << i << ",\"" << to_string((*balls)[i].center) << "\"," << format_double((*balls)[i].radius) << ','
         << format_double(r.terms[i]) << '\n';
    close_out(os, path);
  }
  return 0;
}

inline int run_weights(const RunConfig& c, std::ostream& out) {
  const double floor = c.weight_floor.value_or(kDefaultWeightFloor);
  const Weight w = c.inputs.empty() ? make_weight(*c.weight, load_csv(c.weight->substr(5)).grid(), floor)
                                    : make_weight(*c.weight, load_csv(c.inputs.front()).grid(), floor);
  const Grid& g = w.grid();
  const BallFamily balls = balls_for(c, g);
  const double p = c.p.value_or(2.0);
  const auto path = prepare_out(c) / "weights.csv";
  auto os = open_out(path);
  os << "ball_index,center,radius,ap_term,a1_term,doubling_term\n";
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const Ball& b = balls[i];
    const auto d = doubling_term(w, b);
    os << i << ",\"" << to_string(b.center) << "\"," << format_double(b.radius) << ','
       << format_double(ap_term(w, p, b)) << ',' << format_double(a1_term(w, b)) << ','
       << (d ? format_double(*d) : std::string()) << '\n';
  }
  close_out(os, path);
  const Characteristic ap = ap_characteristic(w, p, balls);
  const Characteristic a1 = a1_characteristic(w, balls);
  const DoublingReport dr = doubling_ratio(w, balls);
  nlohmann::ordered_json j;
  j["p"] = p;
  j["ap_characteristic"] = ap.value;
  j["ap_ball"] = ap.ball_index;
  j["a1_characteristic"] = a1.value;
  j["a1_ball"] = a1.ball_index;
  j["doubling_ratio"] = dr.value;
  j["doubling_ball"] = dr.ball_index;
  j["balls"] = balls.size();
  out << j.dump() << '\n';
  return 0;
}

inline ScenarioConfig scenario_config(const RunConfig& c) {
  ScenarioConfig sc = ScenarioConfig::load(*c.scenario);
  if (c.seed_given) sc.set("seed", std::to_string(c.seed));
  if (c.weight) sc.set("weight", *c.weight);
  if (c.phi) sc.set("phi", *c.phi);
  if (c.balls) sc.set("balls", *c.balls);
  const std::pair<const char*, const std::optional<double>*> numbers[] = {
      {"alpha", &c.alpha}, {"p", &c.p},       {"kappa", &c.kappa},
      {"tmin", &c.tmin},   {"tmax", &c.tmax}, {"rho", &c.rho}, {"weight_floor", &c.weight_floor}};
  for (const auto& [key, v] : numbers)
    if (*v) sc.set(key, format_double(**v));
  if (c.class_res) sc.set("class_res", std::to_string(*c.class_res));
  if (!c.inputs.empty()) {
    std::string fam;
    for (const auto& s : c.inputs) fam += (fam.empty() ? "" : ",") + s;
    sc.set("family", fam);
  }
  return sc;
}

inline int run_verify(const RunConfig& c, std::ostream& out) {
  Scenario s = build_scenario(scenario_config(c));
  s.intrinsic.jobs = c.jobs;
  log::info("verify " + c.theorem + ": " + s.fingerprint);
  const auto reports = verify_theorem(parse_theorem_id(c.theorem), s);
  emit_report(c.out, reports);
  nlohmann::ordered_json j;
  j["theorem_id"] = c.theorem;
  j["ratio"] = reports.front().ratio;
  j["degenerate"] = reports.front().degenerate;
  j["out"] = c.out;
  out << j.dump() << '\n';
  return 0;
}

inline int run_report(const RunConfig& c, std::ostream& out) {
  std::vector<RatioReport> all;
  for (const auto& path : c.inputs) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("report " + path + ": " + e.what());
    }
    for (const auto& r : read_reports(j)) all.push_back(r);
  }
  emit_report(c.out, all);
  std::map<std::string, double> max_ratio;
  std::size_t degenerate = 0, anomalies = 0;
  for (const auto& r : all) {
    auto& m = max_ratio[to_string(r.id)];
    m = std::max(m, r.ratio);
    degenerate += r.degenerate;
    anomalies += r.anomaly;
  }
  nlohmann::ordered_json j;
  j["reports"] = all.size();
  j["max_ratio"] = max_ratio;
  j["degenerate"] = degenerate;
  j["anomalies"] = anomalies;
  out << j.dump() << '\n';
  return 0;
}

}  // namespace detail

/// Runs a parsed configuration; errors become a one-line JSON record on `err`
/// and exit status 1 (domain or argument) or 2 (I/O).
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "compute") return detail::run_compute(c, out);
    if (c.command == "norm") return detail::run_norm(c, out);
    if (c.command == "weights") return detail::run_weights(c, out);
    if (c.command == "verify") return detail::run_verify(c, out);
    if (c.command == "report") return detail::run_report(c, out);
    detail::error_record(err, "usage", 1, "unknown command '" + c.command + "'");
    return 1;
  } catch (const IoError& e) {
    detail::error_record(err, "io", 2, e.what());
    return 2;
  } catch (const DomainError& e) {
    detail::error_record(err, "domain", 1, e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    detail::error_record(err, "invalid-argument", 1, e.what());
    return 1;
  } catch (const std::exception& e) {
    detail::error_record(err, "error", 1, e.what());
    return 1;
  }
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = parse_args(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  return run(*parsed.config, out, err);
}

}  // namespace sqfn::cli
