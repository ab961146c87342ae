#pragma once

// Reproducible verification scenarios.
//
// A scenario file is plain "key = value" text; '#' starts a comment. Keys:
//
//   seed          integer; drives every random choice (default 0)
//   dim           1 or 2 (default 1)
//   window        half-width W of the window [-W, W]^dim (default 4)
//   h             grid spacing (default 0.05)
//   refine        number of refinement steps; each halves h and rho - 1 (default 0)
//   members       family size 1..5, or "random" (default random)
//   support       bump centers are drawn from [-support, support]^dim (default 3)
//   family        "random" (seeded bumps) or a comma list of grid CSV files
//   weight        "const", "power:<a>" or "file:<csv>" (default const)
//   weight_floor  lower bound applied to the weight (default 1e-12)
//   phi           "power:<lambda>" or "table:<path>" (optional)
//   p, kappa      norm exponents (defaults 2 and 0.3)
//   alpha         Hölder order in (0,1] (default 1)
//   class_res     class nodes per axis on [-1,1] (default 8 in 1-D, 4 in 2-D)
//   rho           cone ladder ratio (default 1.25)
//   tmin, tmax    cone truncation (defaults h and 4 W)
//   balls         ball family spec (default lattice:0.5:0.25:4)
//   ball          "<x>[,<y>],<r>": the fixed ball of the local/far split
//                 (default: window center, radius 0.5)
//   samples       "ball" (nodes of the fixed ball; 256-node seeded subsample
//                 in 2-D) or "all" (default ball)
//
// Random families: each member is a sum of 1..3 truncated quadratic bumps
// a * max(0, 1 - |x - c|^2 / s^2) with c uniform in the support box,
// s uniform in [0.3, 1] and a uniform in [-1, 1].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqfn/errors.hpp"
#include "sqfn/grid.hpp"
#include "sqfn/intrinsic.hpp"
#include "sqfn/morrey.hpp"
#include "sqfn/weights.hpp"

namespace sqfn {

/// Ordered key-value configuration.
class ScenarioConfig {
 public:
  ScenarioConfig() = default;
  ScenarioConfig(std::initializer_list<std::pair<const std::string, std::string>> kv) : kv_(kv) {}

  static ScenarioConfig parse(std::istream& is) {
    ScenarioConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (trim(line).empty()) continue;
      if (eq == std::string::npos)
        throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      if (!known(key)) throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      c.kv_[key] = trim(line.substr(eq + 1));
    }
    return c;
  }

  static ScenarioConfig load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open scenario " + path);
    return parse(is);
  }

  void set(const std::string& key, const std::string& value) {
    if (!known(key)) throw std::invalid_argument("scenario: unknown key '" + key + "'");
    kv_[key] = value;
  }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }
  double number(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::logic_error&) {
      throw std::invalid_argument("scenario: '" + key + "' is not a number: " + it->second);
    }
  }

  /// Canonical "key=value;..." rendering (sorted keys).
  std::string canonical() const {
    std::string s;
    for (const auto& [k, v] : kv_) s += (s.empty() ? "" : ";") + k + "=" + v;
    return s;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }
  static bool known(const std::string& key) {
    static const char* keys[] = {"seed", "dim", "window", "h", "refine", "members", "support", "family",
                                 "weight", "weight_floor", "phi", "p", "kappa", "alpha", "class_res", "rho",
                                 "tmin", "tmax", "balls", "ball", "samples"};
    for (const char* k : keys)
      if (key == k) return true;
    return false;
  }

  std::map<std::string, std::string> kv_;
};

/// Uniform doubles from a standard-specified engine, independent of the
/// library's distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

struct Bump {
  Point center;
  double width;
  double amplitude;

  double operator()(const Point& x) const {
    const double d = distance(x, center) / width;
    return d < 1.0 ? amplitude * (1.0 - d * d) : 0.0;
  }
};

/// Seeded bump lists for a random family: `members` of them (0 = draw 1..5).
inline std::vector<std::vector<Bump>> random_bumps(std::uint64_t seed, int dim, int members, double support) {
  SeededRng rng(seed);
  if (members == 0) members = 1 + static_cast<int>(rng.below(5));
  std::vector<std::vector<Bump>> fam(static_cast<std::size_t>(members));
  for (auto& m : fam) {
    const int count = 1 + static_cast<int>(rng.below(3));
    for (int k = 0; k < count; ++k) {
      const double cx = rng.uniform(-support, support);
      const double cy = dim == 2 ? rng.uniform(-support, support) : 0.0;
      const double width = rng.uniform(0.3, 1.0);
      const double amp = rng.uniform(-1.0, 1.0);
      m.push_back({dim == 1 ? Point(cx) : Point(cx, cy), width, amp});
    }
  }
  return fam;
}

inline FunctionFamily sample_bumps(const Grid& g, const std::vector<std::vector<Bump>>& bumps) {
  std::vector<GridFunction> members;
  for (const auto& m : bumps) {
    members.push_back(GridFunction::sample(g, [&](const Point& x) {
      double s = 0.0;
      for (const auto& b : m) s += b(x);
      return s;
    }));
  }
  return FunctionFamily(std::move(members));
}

struct Scenario {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  int refine = 0;
  Grid grid;
  FunctionFamily family;
  std::optional<Weight> weight;
  std::optional<GrowthFunction> growth;
  MorreyParams params;
  IntrinsicParams intrinsic;
  BallFamily balls;
  Ball ball;
  std::vector<Point> sample_points;
  std::vector<double> maximal_radii;
  std::string fingerprint;

  Weight weight_or_unit() const { return weight ? *weight : Weight::constant(grid); }

  /// The same scenario with every member multiplied by c.
  Scenario scaled(double c) const {
    Scenario s = *this;
    s.family = family.scaled(c);
    return s;
  }

  /// The same scenario with a different family.
  Scenario with_family(FunctionFamily fam) const {
    Scenario s = *this;
    s.family = std::move(fam);
    return s;
  }
};

namespace detail {

inline std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("scenario: bad number in " + what + ": '" + tok + "'");
    }
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace detail

inline Weight make_weight(const std::string& spec, const Grid& g, double floor) {
  if (spec == "const") return Weight::constant(g);
  if (spec.rfind("power:", 0) == 0) {
    try {
      return power_weight(std::stod(spec.substr(6)), g, floor);
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("weight '" + spec + "': " + e.what());
    }
  }
  if (spec.rfind("file:", 0) == 0) {
    const GridFunction d = load_csv(spec.substr(5));
    if (!(d.grid() == g)) throw std::invalid_argument("weight file " + spec.substr(5) + " is on a different grid");
    return Weight(d, floor);
  }
  throw std::invalid_argument("weight '" + spec + "': expected const, power:<a> or file:<csv>");
}

/// Builds the scenario at refinement level `config.refine + extra_refine`.
inline Scenario build_scenario(const ScenarioConfig& config, int extra_refine = 0) {
  const auto seed = static_cast<std::uint64_t>(config.number("seed", 0));
  const int dim = static_cast<int>(config.number("dim", 1));
  if (dim != 1 && dim != 2) throw std::invalid_argument("scenario: dim must be 1 or 2");
  const int refine = static_cast<int>(config.number("refine", 0)) + extra_refine;
  if (refine < 0) throw std::invalid_argument("scenario: refine must be >= 0");
  const double half = config.number("window", 4.0);
  const double h = std::ldexp(config.number("h", 0.05), -refine);
  double rho = config.number("rho", 1.25);
  if (!(rho > 1.0)) throw std::invalid_argument("scenario: rho must exceed 1");
  rho = 1.0 + std::ldexp(rho - 1.0, -refine);

  Grid grid = Grid::cell_centered(dim, -half, half, h);

  std::optional<FunctionFamily> family;
  const std::string fam_spec = config.get("family", "random");
  if (fam_spec == "random") {
    const std::string m = config.get("members", "random");
    const int members = m == "random" ? 0 : static_cast<int>(config.number("members", 0));
    if (m != "random" && (members < 1 || members > 5)) throw std::invalid_argument("scenario: members must be 1..5");
    family = sample_bumps(grid, random_bumps(seed, dim, members, config.number("support", 3.0)));
  } else {
    std::vector<GridFunction> members;
    for (const auto& path : detail::split_list(fam_spec)) members.push_back(load_csv(path));
    family = FunctionFamily(std::move(members));
    grid = family->grid();
  }

  std::optional<Weight> weight;
  if (config.has("weight")) weight = make_weight(config.get("weight", "const"), grid, config.number("weight_floor", kDefaultWeightFloor));
  std::optional<GrowthFunction> growth;
  if (config.has("phi")) growth = parse_growth(config.get("phi", ""));

  const double alpha = config.number("alpha", 1.0);
  const int class_res = static_cast<int>(config.number("class_res", dim == 1 ? 8 : 4));
  const double tmin = config.has("tmin") ? config.number("tmin", h) : grid.spacing();
  const double tmax = config.number("tmax", 4.0 * grid.window_radius());
  IntrinsicParams intrinsic{HoelderClassSpec::midpoint(dim, alpha, class_res), ConeQuadrature(tmin, tmax, rho), 0};

  const BallFamily balls = parse_ball_family(grid, config.get("balls", "lattice:0.5:0.25:4"));

  const Point wc = grid.window_center();
  Ball ball(wc, 0.5);
  if (config.has("ball")) {
    const auto v = detail::split_numbers(config.get("ball", ""), "ball");
    if (static_cast<int>(v.size()) != dim + 1) throw std::invalid_argument("scenario: ball needs dim + 1 numbers");
    ball = Ball(dim == 1 ? Point(v[0]) : Point(v[0], v[1]), v[static_cast<std::size_t>(dim)]);
  }

  std::vector<Point> samples;
  const std::string sample_rule = config.get("samples", "ball");
  if (sample_rule == "all") {
    for (std::size_t i = 0; i < grid.size(); ++i) samples.push_back(grid.node(i));
  } else if (sample_rule == "ball") {
    auto nodes = nodes_in(grid, ball);
    if (dim == 2 && nodes.size() > 256) {
      SeededRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      for (std::size_t i = 0; i < 256; ++i) std::swap(nodes[i], nodes[i + rng.below(nodes.size() - i)]);
      nodes.resize(256);
      std::sort(nodes.begin(), nodes.end());
    }
    for (std::size_t i : nodes) samples.push_back(grid.node(i));
  } else {
    throw std::invalid_argument("scenario: samples must be 'ball' or 'all'");
  }
  if (samples.empty()) throw std::invalid_argument("scenario: no sample points");

  const MorreyParams params(config.number("p", 2.0), config.number("kappa", 0.3));

  std::ostringstream fp;
  fp << config.canonical() << ";effective_refine=" << refine << ";grid=" << describe(grid)
     << ";cone=" << format_double(tmin) << "/" << format_double(tmax) << "/" << format_double(rho)
     << ";class_nodes=" << intrinsic.class_spec.size() << ";balls=" << balls.provenance() << "(" << balls.size()
     << ");ball=" << to_string(ball.center) << "/" << format_double(ball.radius) << ";samples=" << sample_rule << "("
     << samples.size() << ")";

  return Scenario{config,
                  seed,
                  refine,
                  grid,
                  *family,
                  std::move(weight),
                  std::move(growth),
                  params,
                  std::move(intrinsic),
                  balls,
                  ball,
                  std::move(samples),
                  default_maximal_radii(grid),
                  fp.str()};
}

}  // namespace sqfn
