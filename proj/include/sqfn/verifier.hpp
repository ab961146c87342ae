#pragma once

// Empirical ratio harness for the boundedness theorems of the vector-valued
// intrinsic square function.
//
// Each check computes lhs (a norm of the square-function field) and rhs (the
// matching norm of the l2 aggregate of the family) on one scenario and records
// ratio = lhs / rhs. A theorem asserts that the ratio is bounded independently
// of the family; here that becomes "finite, invariant under scaling, stable
// under refinement". When rhs = 0 the report is flagged degenerate and the
// ratio is recorded as 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sqfn/errors.hpp"
#include "sqfn/format.hpp"
#include "sqfn/grid.hpp"
#include "sqfn/intrinsic.hpp"
#include "sqfn/morrey.hpp"
#include "sqfn/scenario.hpp"
#include "sqfn/weights.hpp"

namespace sqfn {

enum class TheoremId { A, B, Bbar, C, D, T1, T2, T3, T4, KEY };

inline const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::A: return "A";
    case TheoremId::B: return "B";
    case TheoremId::Bbar: return "Bbar";
    case TheoremId::C: return "C";
    case TheoremId::D: return "D";
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::T3: return "T3";
    case TheoremId::T4: return "T4";
    case TheoremId::KEY: return "KEY";
  }
  return "?";
}

inline TheoremId parse_theorem_id(const std::string& s) {
  for (auto id : {TheoremId::A, TheoremId::B, TheoremId::Bbar, TheoremId::C, TheoremId::D, TheoremId::T1,
                  TheoremId::T2, TheoremId::T3, TheoremId::T4, TheoremId::KEY})
    if (s == to_string(id)) return id;
  throw std::invalid_argument("unknown theorem id '" + s + "' (expected A, B, Bbar, C, D, T1, T2, T3, T4, KEY)");
}

struct RatioReport {
  TheoremId id = TheoremId::A;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool degenerate = false;  // rhs == 0
  bool anomaly = false;     // rhs == 0 while lhs > 0
  std::vector<std::size_t> maximizers;
  std::string fingerprint;
  std::vector<std::pair<std::string, double>> diagnostics;

  double diagnostic(const std::string& key) const {
    for (const auto& [k, v] : diagnostics)
      if (k == key) return v;
    throw std::out_of_range("no diagnostic '" + key + "'");
  }
};

namespace detail {

inline RatioReport make_report(TheoremId id, double lhs, double rhs, const Scenario& s) {
  RatioReport r;
  r.id = id;
  r.lhs = lhs;
  r.rhs = rhs;
  r.degenerate = !(rhs > 0.0);
  r.anomaly = r.degenerate && lhs > 0.0;
  r.ratio = r.degenerate ? 0.0 : lhs / rhs;
  r.fingerprint = s.fingerprint;
  return r;
}

inline GridFunction square_field(const FunctionFamily& fam, const IntrinsicParams& params) {
  return FamilyField(fam, params).field(params.jobs);
}

inline const Weight& require_weight(const Scenario& s, const char* what) {
  if (!s.weight) throw std::invalid_argument(std::string(what) + ": scenario has no weight");
  return *s.weight;
}

inline const GrowthFunction& require_growth(const Scenario& s, const char* what) {
  if (!s.growth) throw std::invalid_argument(std::string(what) + ": scenario has no growth function");
  return *s.growth;
}

inline double total_tail_bound(const Scenario& s) {
  double b = 0.0;
  for (const auto& f : s.family) b += cone_tail_bound(f, s.intrinsic.cone);
  return b;
}

/// Measured D(phi) on the scenario's radii; refuses when D >= 2^dim.
inline double doubling_gate(const GrowthFunction& phi, const Scenario& s, const char* what) {
  const double d = doubling_constant(phi, radii_of(s.balls));
  const double limit = std::ldexp(1.0, s.grid.dim());
  if (!(d < limit))
    throw DomainError(std::string(what) + ": hypothesis 1 <= D(phi) < 2^n violated: measured D(phi) = " +
                      format_double(d) + " >= " + format_double(limit) + " for " + phi.describe());
  return d;
}

}  // namespace detail

/// Weighted (A, B) or unweighted (C, D) Lebesgue-space ratio. The weight is
/// the scenario's weight if it has one, otherwise w = 1.
inline RatioReport lebesgue_ratio(const Scenario& s, double p, bool weak) {
  const bool weighted = s.weight.has_value();
  if (weak && p != 1.0) throw std::invalid_argument("lebesgue_ratio: weak mode requires p = 1");
  if (!weak && !(p > 1.0)) throw std::invalid_argument("lebesgue_ratio: strong mode requires p > 1");
  const Weight w = s.weight_or_unit();
  const GridFunction field = detail::square_field(s.family, s.intrinsic);
  const GridFunction agg = l2_aggregate(s.family);
  const double lhs = weak ? weak_l1_norm(field, w) : lp_norm(field, p, w);
  const double rhs = lp_norm(agg, weak ? 1.0 : p, w);
  const TheoremId id = weighted ? (weak ? TheoremId::B : TheoremId::A) : (weak ? TheoremId::D : TheoremId::C);
  RatioReport r = detail::make_report(id, lhs, rhs, s);
  r.diagnostics.push_back({"p", p});
  if (weighted && !weak) r.diagnostics.push_back({"ap_characteristic", ap_characteristic(w, p, s.balls).value});
  if (weighted && weak) r.diagnostics.push_back({"a1_characteristic", a1_characteristic(w, s.balls).value});
  r.diagnostics.push_back({"cone_tail_bound", detail::total_tail_bound(s)});
  return r;
}

/// lambda w({S > lambda}) against the integral of the aggregate times Mw,
/// for an arbitrary weight.
inline RatioReport maximal_weak_check(const Scenario& s) {
  const Weight w = s.weight_or_unit();
  const GridFunction field = detail::square_field(s.family, s.intrinsic);
  const GridFunction agg = l2_aggregate(s.family);
  const GridFunction mw = hl_maximal_field(w, s.maximal_radii);
  const LevelSup lhs = weak_l1(field, w);
  double rhs = 0.0;
  for (std::size_t i = 0; i < agg.size(); ++i) rhs += agg[i] * mw[i];
  rhs *= s.grid.cell_volume();
  RatioReport r = detail::make_report(TheoremId::Bbar, lhs.value, rhs, s);
  r.diagnostics.push_back({"lambda", lhs.lambda});
  const double plain = lp_norm(agg, 1.0, w);
  r.diagnostics.push_back({"plain_weighted_ratio", plain > 0.0 ? lhs.value / plain : 0.0});
  r.diagnostics.push_back({"a1_characteristic", a1_characteristic(w, s.balls).value});
  return r;
}

/// T1: strong weighted Morrey, p > 1. T2: weak weighted Morrey against the
/// strong p = 1 norm.
inline RatioReport morrey_ratio(const Scenario& s, TheoremId theorem) {
  if (theorem != TheoremId::T1 && theorem != TheoremId::T2)
    throw std::invalid_argument("morrey_ratio: theorem must be T1 or T2");
  const Weight& w = detail::require_weight(s, "morrey_ratio");
  const double kappa = s.params.kappa;
  const GridFunction field = detail::square_field(s.family, s.intrinsic);
  const GridFunction agg = l2_aggregate(s.family);
  NormReport lhs, rhs;
  RatioReport r;
  if (theorem == TheoremId::T1) {
    if (!(s.params.p > 1.0)) throw std::invalid_argument("morrey_ratio: T1 requires p > 1");
    lhs = weighted_morrey_norm(field, s.params, w, s.balls);
    rhs = weighted_morrey_norm(agg, s.params, w, s.balls);
    r = detail::make_report(theorem, lhs.value, rhs.value, s);
    r.diagnostics.push_back({"p", s.params.p});
    r.diagnostics.push_back({"ap_characteristic", ap_characteristic(w, s.params.p, s.balls).value});
  } else {
    lhs = weak_weighted_morrey_norm(field, kappa, w, s.balls);
    rhs = weighted_morrey_norm(agg, MorreyParams(1.0, kappa), w, s.balls);
    r = detail::make_report(theorem, lhs.value, rhs.value, s);
    r.diagnostics.push_back({"p", 1.0});
    r.diagnostics.push_back({"a1_characteristic", a1_characteristic(w, s.balls).value});
  }
  r.diagnostics.push_back({"kappa", kappa});
  if (lhs.maximizing_ball) r.maximizers.push_back(*lhs.maximizing_ball);
  if (rhs.maximizing_ball) r.maximizers.push_back(*rhs.maximizing_ball);
  return r;
}

/// T3: strong generalized Morrey, T4: weak against strong p = 1. Refuses with
/// DomainError unless the measured doubling constant is below 2^dim.
inline RatioReport generalized_ratio(const Scenario& s, TheoremId theorem) {
  if (theorem != TheoremId::T3 && theorem != TheoremId::T4)
    throw std::invalid_argument("generalized_ratio: theorem must be T3 or T4");
  const GrowthFunction& phi = detail::require_growth(s, "generalized_ratio");
  const double d = detail::doubling_gate(phi, s, "generalized_ratio");
  const GridFunction field = detail::square_field(s.family, s.intrinsic);
  const GridFunction agg = l2_aggregate(s.family);
  NormReport lhs, rhs;
  double p = 1.0;
  if (theorem == TheoremId::T3) {
    p = s.params.p;
    if (!(p > 1.0)) throw std::invalid_argument("generalized_ratio: T3 requires p > 1");
    lhs = generalized_morrey_norm(field, p, phi, s.balls);
    rhs = generalized_morrey_norm(agg, p, phi, s.balls);
  } else {
    lhs = weak_generalized_morrey_norm(field, phi, s.balls);
    rhs = generalized_morrey_norm(agg, 1.0, phi, s.balls);
  }
  RatioReport r = detail::make_report(theorem, lhs.value, rhs.value, s);
  if (lhs.maximizing_ball) r.maximizers.push_back(*lhs.maximizing_ball);
  if (rhs.maximizing_ball) r.maximizers.push_back(*rhs.maximizing_ball);
  r.diagnostics.push_back({"p", p});
  r.diagnostics.push_back({"doubling_constant", d});
  return r;
}

struct KeyEstimate {
  double c_emp = 0.0;
  bool degenerate = true;  // every rhs was 0
  std::vector<RatioReport> reports;
};

/// Far part of the family at the sample points against the shell majorant;
/// C_emp is the largest ratio over all scenarios and sample points.
inline KeyEstimate key_estimate_constant(std::span<const Scenario> scenarios) {
  KeyEstimate out;
  for (const auto& s : scenarios) {
    for (const auto& x : s.sample_points)
      if (!membership(x, s.ball)) throw std::invalid_argument("key_estimate_constant: sample point outside B");
    const LocalFarSplit split = split_local_far(s.family, s.ball);
    const int ell_max = default_ell_max(s.grid, s.ball);
    const MajorantReport maj = far_field_majorant(s.family, s.ball, ell_max);
    const auto lhs = FamilyField(split.far, s.intrinsic).values_at(s.sample_points);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < lhs.size(); ++i)
      if (lhs[i] > lhs[arg]) arg = i;
    RatioReport r = detail::make_report(TheoremId::KEY, lhs[arg], maj.value, s);
    r.maximizers.push_back(arg);
    r.diagnostics.push_back({"ell_max", static_cast<double>(ell_max)});
    r.diagnostics.push_back({"window_escaped", maj.window_escaped ? 1.0 : 0.0});
    r.diagnostics.push_back({"samples", static_cast<double>(lhs.size())});
    if (!r.degenerate) {
      out.degenerate = false;
      out.c_emp = std::max(out.c_emp, r.ratio);
    }
    out.reports.push_back(std::move(r));
  }
  return out;
}

enum class PointwiseMode { Weighted, Generalized };

/// max over sample x in B of S(far part)(x) against
///   weighted:    ||aggregate||_{L^{1,kappa}(w)} w(B)^{kappa - 1}
///   generalized: ||aggregate||_{L^{1,phi}} phi(r_B) / |B|
inline RatioReport pointwise_estimate_check(const Scenario& s, PointwiseMode mode) {
  const GridFunction agg = l2_aggregate(s.family);
  const double kappa = s.params.kappa;
  double rhs = 0.0;
  std::vector<std::pair<std::string, double>> diag;
  if (mode == PointwiseMode::Weighted) {
    const Weight& w = detail::require_weight(s, "pointwise_estimate_check");
    const double wb = weighted_measure(w, s.ball);
    rhs = weighted_morrey_norm(agg, MorreyParams(1.0, kappa), w, s.balls).value * std::pow(wb, kappa - 1.0);
    diag.push_back({"a1_characteristic", a1_characteristic(w, s.balls).value});
    diag.push_back({"kappa", kappa});
  } else {
    const GrowthFunction& phi = detail::require_growth(s, "pointwise_estimate_check");
    diag.push_back({"doubling_constant", detail::doubling_gate(phi, s, "pointwise_estimate_check")});
    rhs = generalized_morrey_norm(agg, 1.0, phi, s.balls).value * phi(s.ball.radius) / node_measure(s.grid, s.ball);
  }
  const LocalFarSplit split = split_local_far(s.family, s.ball);
  const auto lhs = FamilyField(split.far, s.intrinsic).values_at(s.sample_points);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < lhs.size(); ++i)
    if (lhs[i] > lhs[arg]) arg = i;
  RatioReport r = detail::make_report(mode == PointwiseMode::Weighted ? TheoremId::T2 : TheoremId::T4, lhs[arg], rhs, s);
  r.maximizers.push_back(arg);
  r.diagnostics = std::move(diag);
  r.diagnostics.push_back({"pointwise", 1.0});
  return r;
}

struct SeriesTail {
  double sum = 0.0;
  std::vector<double> terms;    // l = 1..L
  std::vector<double> partial;  // running sums
  double doubling = 0.0;        // measured D(phi)
  double q = 0.0;               // (D / 2^n)^{1/p}
  double tail_bound = 0.0;      // bound on the terms beyond L; +inf when diverging
  bool diverging = false;       // D >= 2^n
};

/// Radii on which D(phi) is measured: 2^k, k = -8..8, for a power law; the
/// table radii whose double is still tabulated otherwise.
inline std::vector<double> doubling_radii(const GrowthFunction& phi) {
  std::vector<double> r;
  if (const auto* t = std::get_if<Tabulated>(&phi.form())) {
    for (double v : t->radii)
      if (2.0 * v <= t->radii.back()) r.push_back(v);
    if (r.empty()) throw std::invalid_argument("doubling_radii: table does not span a factor of 2");
    return r;
  }
  for (int k = -8; k <= 8; ++k) r.push_back(std::ldexp(1.0, k));
  return r;
}

/// sum_{l=1}^{L} (D / 2^n)^{(l+1)/p}.
inline SeriesTail series_tail(double doubling, double p, int dim, int L) {
  if (!(p >= 1.0)) throw std::invalid_argument("series_tail: p must be >= 1");
  if (L < 1) throw std::invalid_argument("series_tail: L must be >= 1");
  if (dim != 1 && dim != 2) throw std::invalid_argument("series_tail: dim must be 1 or 2");
  SeriesTail s;
  s.doubling = doubling;
  const double base = doubling / std::ldexp(1.0, dim);
  s.q = std::pow(base, 1.0 / p);
  s.diverging = !(base < 1.0);
  for (int ell = 1; ell <= L; ++ell) {
    s.terms.push_back(std::pow(base, (ell + 1) / p));
    s.sum += s.terms.back();
    s.partial.push_back(s.sum);
  }
  s.tail_bound = s.diverging ? std::numeric_limits<double>::infinity() : std::pow(base, (L + 2) / p) / (1.0 - s.q);
  return s;
}

inline SeriesTail series_tail(const GrowthFunction& phi, double p, int dim, int L) {
  return series_tail(doubling_constant(phi, doubling_radii(phi)), p, dim, L);
}

/// Dispatches a theorem id to its check.
inline std::vector<RatioReport> verify_theorem(TheoremId id, const Scenario& s) {
  switch (id) {
    case TheoremId::A:
      detail::require_weight(s, "theorem A");
      return {lebesgue_ratio(s, s.params.p, false)};
    case TheoremId::B:
      detail::require_weight(s, "theorem B");
      return {lebesgue_ratio(s, 1.0, true)};
    case TheoremId::C: {
      Scenario u = s;
      u.weight.reset();
      return {lebesgue_ratio(u, s.params.p, false)};
    }
    case TheoremId::D: {
      Scenario u = s;
      u.weight.reset();
      return {lebesgue_ratio(u, 1.0, true)};
    }
    case TheoremId::Bbar: return {maximal_weak_check(s)};
    case TheoremId::T1:
    case TheoremId::T2: return {morrey_ratio(s, id)};
    case TheoremId::T3:
    case TheoremId::T4: return {generalized_ratio(s, id)};
    case TheoremId::KEY: return key_estimate_constant(std::span<const Scenario>(&s, 1)).reports;
  }
  throw std::invalid_argument("verify_theorem: bad id");
}

/// The twelve key-estimate scenarios: ten 1-D, two coarse 2-D, seeded bump
/// families of varying size around balls of varying center and radius.
inline std::vector<ScenarioConfig> standard_key_suite() {
  std::vector<ScenarioConfig> suite;
  const char* balls_1d[] = {"0,0.5", "0.5,0.5", "-1,0.5", "0,0.25", "1,0.25",
                            "0,0.75", "-0.5,0.5", "0.25,0.4", "0,0.5", "-1.5,0.3"};
  for (int k = 0; k < 10; ++k) {
    suite.push_back({{"seed", std::to_string(101 + k)},
                     {"window", "4"},
                     {"h", "0.05"},
                     {"members", k == 8 ? "random" : std::to_string(1 + k % 5)},
                     {"class_res", "8"},
                     {"ball", balls_1d[k]}});
  }
  const char* balls_2d[] = {"0,0,0.5", "0.4,-0.2,0.6"};
  for (int k = 0; k < 2; ++k) {
    suite.push_back({{"seed", std::to_string(201 + k)},
                     {"dim", "2"},
                     {"window", "2"},
                     {"h", "0.1"},
                     {"members", std::to_string(1 + k)},
                     {"support", "1.5"},
                     {"class_res", "4"},
                     {"ball", balls_2d[k]}});
  }
  return suite;
}

// ---------------------------------------------------------------------------
// Cone geometry

struct GeometryCheck {
  std::size_t tuples = 0;
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();  // min of 2t - 2^{l-1} r_B
};

/// Draws x in B, l in 1..6, z in 2^{l+1}B \ 2^l B, y and t with |x - y| < t and
/// |y - z| <= t, and checks 2t >= 2^{l-1} r_B with no tolerance.
inline GeometryCheck cone_geometry_check(std::uint64_t seed, std::size_t count, int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("cone_geometry_check: dim must be 1 or 2");
  SeededRng rng(seed);
  GeometryCheck out;
  auto draw = [&](const Ball& box, const Region& region) {
    for (;;) {
      double c[2] = {0.0, 0.0};
      for (int k = 0; k < dim; ++k) c[k] = box.center[k] + box.radius * rng.uniform(-1.0, 1.0);
      const Point p = Point::from_coords(dim, c);
      if (membership(p, region)) return p;
    }
  };
  for (std::size_t i = 0; i < count; ++i) {
    const double cx = rng.uniform(-2.0, 2.0), cy = rng.uniform(-2.0, 2.0);
    const Ball b(dim == 1 ? Point(cx) : Point(cx, cy), rng.uniform(0.1, 2.0));
    const int ell = 1 + static_cast<int>(rng.below(6));
    const Point x = draw(b, b);
    const Annulus shell(b, ell);
    const Point z = draw(shell.outer(), shell);
    const Ball around(z, shell.outer().radius);
    const Point y = draw(around, around);
    const double t = std::max(distance(x, y), distance(y, z)) * (1.0 + rng.uniform(1e-9, 1.0));
    if (!(distance(x, y) < t) || !(distance(y, z) <= t)) continue;
    ++out.tuples;
    const double slack = 2.0 * t - std::ldexp(b.radius, ell - 1);
    out.min_slack = std::min(out.min_slack, slack);
    if (slack < 0.0) ++out.violations;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report output

namespace detail {

inline std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

}  // namespace detail

inline void write_report_csv(std::ostream& os, std::span<const RatioReport> reports) {
  os << "theorem_id,lhs,rhs,ratio,degenerate,anomaly,maximizers,diagnostics,fingerprint\n";
  for (const auto& r : reports) {
    std::string diag;
    for (const auto& [k, v] : r.diagnostics) diag += (diag.empty() ? "" : ";") + k + "=" + format_double(v);
    os << to_string(r.id) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
       << format_double(r.ratio) << ',' << (r.degenerate ? 1 : 0) << ',' << (r.anomaly ? 1 : 0) << ','
       << detail::csv_quote(detail::join_indices(r.maximizers)) << ',' << detail::csv_quote(diag) << ','
       << detail::csv_quote(r.fingerprint) << '\n';
  }
}

inline nlohmann::ordered_json report_json(const RatioReport& r) {
  nlohmann::ordered_json j;
  j["theorem_id"] = to_string(r.id);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["ratio"] = r.ratio;
  j["degenerate"] = r.degenerate;
  j["anomaly"] = r.anomaly;
  j["maximizers"] = r.maximizers;
  nlohmann::ordered_json d = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = v;
  j["diagnostics"] = d;
  j["fingerprint"] = r.fingerprint;
  return j;
}

inline void write_report_json(std::ostream& os, std::span<const RatioReport> reports) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : reports) j.push_back(report_json(r));
  os << j.dump(2) << '\n';
}

/// Reports from a JSON array written by write_report_json.
inline std::vector<RatioReport> read_reports(const nlohmann::ordered_json& j) {
  if (!j.is_array()) throw std::invalid_argument("report JSON: expected an array");
  std::vector<RatioReport> out;
  for (const auto& e : j) {
    RatioReport r;
    try {
      r.id = parse_theorem_id(e.at("theorem_id").get<std::string>());
      auto number = [&](const char* key) { return e.at(key).is_null() ? std::nan("") : e.at(key).get<double>(); };
      r.lhs = number("lhs");
      r.rhs = number("rhs");
      r.ratio = number("ratio");
      r.degenerate = e.at("degenerate").get<bool>();
      r.anomaly = e.at("anomaly").get<bool>();
      r.maximizers = e.at("maximizers").get<std::vector<std::size_t>>();
      for (const auto& [k, v] : e.at("diagnostics").items())
        r.diagnostics.push_back({k, v.is_null() ? std::nan("") : v.get<double>()});
      r.fingerprint = e.at("fingerprint").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw std::invalid_argument(std::string("report JSON: ") + ex.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Writes report.csv and report.json under dir (created if missing).
inline void emit_report(const std::filesystem::path& dir, std::span<const RatioReport> reports) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto write = [&](const std::filesystem::path& p, auto&& fn) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write " + p.string());
    fn(os);
    os.flush();
    if (!os) throw IoError("write failed for " + p.string());
  };
  write(dir / "report.csv", [&](std::ostream& os) { write_report_csv(os, reports); });
  write(dir / "report.json", [&](std::ostream& os) { write_report_json(os, reports); });
}

}  // namespace sqfn
