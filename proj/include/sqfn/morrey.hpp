#pragma once

// Weighted Lebesgue, weighted Morrey and generalized Morrey functionals, strong
// and weak, on sampled functions.
//
// Weak-type functionals sup_{lambda>0} lambda * mu({|f| > lambda}) are computed
// exactly: the map lambda -> lambda * mu({|f| > lambda}) is piecewise linear
// and increasing between consecutive distinct values of |f|, so the supremum is
// the largest v * mu({|f| >= v}) over those values v (approached from below).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sqfn/errors.hpp"
#include "sqfn/grid.hpp"
#include "sqfn/weights.hpp"

namespace sqfn {

// ---------------------------------------------------------------------------
// Growth functions

struct PowerLaw {
  double lambda;
};

/// Values at increasing radii, interpolated linearly in log r.
struct Tabulated {
  std::vector<double> radii;
  std::vector<double> values;
};

class GrowthFunction {
 public:
  explicit GrowthFunction(PowerLaw p) : form_(p) {
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
      throw std::invalid_argument("GrowthFunction: power-law exponent must be positive");
  }

  explicit GrowthFunction(Tabulated t) : form_(std::move(t)) {
    const auto& tab = std::get<Tabulated>(form_);
    if (tab.radii.size() != tab.values.size() || tab.radii.size() < 2)
      throw std::invalid_argument("GrowthFunction: table needs >= 2 matching (r, value) rows");
    for (std::size_t k = 0; k < tab.radii.size(); ++k) {
      if (!(tab.radii[k] > 0.0) || !(tab.values[k] > 0.0))
        throw std::invalid_argument("GrowthFunction: table radii and values must be positive");
      if (k > 0 && !(tab.radii[k] > tab.radii[k - 1]))
        throw std::invalid_argument("GrowthFunction: table radii must increase");
      if (k > 0 && tab.values[k] < tab.values[k - 1])
        throw std::invalid_argument("GrowthFunction: table values must be nondecreasing");
    }
  }

  double operator()(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("GrowthFunction: radius must be positive");
    if (const auto* p = std::get_if<PowerLaw>(&form_)) return std::pow(r, p->lambda);
    const auto& t = std::get<Tabulated>(form_);
    if (r < t.radii.front() || r > t.radii.back())
      throw std::invalid_argument("GrowthFunction: radius " + format_double(r) + " outside the table");
    const auto it = std::upper_bound(t.radii.begin(), t.radii.end(), r);
    const std::size_t k = it == t.radii.end() ? t.radii.size() - 2 : static_cast<std::size_t>(it - t.radii.begin()) - 1;
    const double s = (std::log(r) - std::log(t.radii[k])) / (std::log(t.radii[k + 1]) - std::log(t.radii[k]));
    return t.values[k] + s * (t.values[k + 1] - t.values[k]);
  }

  const std::variant<PowerLaw, Tabulated>& form() const { return form_; }

  std::string describe() const {
    if (const auto* p = std::get_if<PowerLaw>(&form_)) return "power:" + format_double(p->lambda);
    return "table:" + std::to_string(std::get<Tabulated>(form_).radii.size()) + "rows";
  }

 private:
  std::variant<PowerLaw, Tabulated> form_;
};

/// Reads "r,value" rows ('#' lines ignored).
inline GrowthFunction load_growth_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  Tabulated t;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double r = 0.0, v = 0.0;
    if (!(ss >> r >> v)) throw std::invalid_argument("growth table " + path + ": malformed row '" + line + "'");
    t.radii.push_back(r);
    t.values.push_back(v);
  }
  return GrowthFunction(std::move(t));
}

/// "power:<lambda>" or "table:<path>".
inline GrowthFunction parse_growth(const std::string& spec) {
  if (spec.rfind("power:", 0) == 0) {
    try {
      return GrowthFunction(PowerLaw{std::stod(spec.substr(6))});
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("phi '" + spec + "': " + e.what());
    }
  }
  if (spec.rfind("table:", 0) == 0) return load_growth_table(spec.substr(6));
  throw std::invalid_argument("phi '" + spec + "': expected power:<lambda> or table:<path>");
}

/// max over the ladder of phi(2r) / phi(r).
inline double doubling_constant(const GrowthFunction& phi, std::span<const double> radii) {
  if (radii.empty()) throw std::invalid_argument("doubling_constant: empty radius ladder");
  double d = 0.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("doubling_constant: radii must be positive");
    const double a = phi(r), b = phi(2.0 * r);
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("doubling_constant: phi must be positive");
    d = std::max(d, b / a);
  }
  return d;
}

inline std::vector<double> radii_of(const BallFamily& balls) {
  std::vector<double> r;
  for (const auto& b : balls) r.push_back(b.radius);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

// ---------------------------------------------------------------------------
// Norms

struct MorreyParams {
  double p;
  double kappa;

  MorreyParams(double p_, double kappa_) : p(p_), kappa(kappa_) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("MorreyParams: need 1 <= p < inf");
    if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("MorreyParams: need 0 < kappa < 1");
  }
};

struct NormReport {
  double value = 0.0;
  std::optional<std::size_t> maximizing_ball;
  std::optional<double> maximizing_lambda;  // weak norms only
  std::vector<double> terms;                // per-ball terms, family order
  bool vanishes_on_family = false;          // value 0 although f is not identically 0
};

struct LevelSup {
  double value = 0.0;
  double lambda = 0.0;
};

/// sup_lambda lambda * sum_{i : a_i > lambda} mass_i, for a_i >= 0.
inline LevelSup weak_level_sup(std::span<const double> a, std::span<const double> mass) {
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] > a[j]; });
  LevelSup best;
  double cum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cum += mass[order[k]];
    const double v = a[order[k]];
    if (v <= 0.0) break;
    if (k + 1 < order.size() && a[order[k + 1]] == v) continue;
    if (v * cum > best.value) best = {v * cum, v};
  }
  return best;
}

namespace detail {

inline void check_grid(const GridFunction& f, const Weight& w) {
  if (!(f.grid() == w.grid())) throw std::invalid_argument("norm: function and weight live on different grids");
}

inline void finish(NormReport& r, const GridFunction& f) {
  r.value = -1.0;
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    if (r.terms[i] > r.value) {
      r.value = r.terms[i];
      r.maximizing_ball = i;
    }
  }
  r.vanishes_on_family = r.value == 0.0 && !f.is_zero();
}

inline double ball_power_integral(const GridFunction& f, double p, const GridFunction* w, const Ball& b) {
  const auto v = f.values();
  double s = 0.0;
  for_each_node(f.grid(), b, [&](std::size_t i) {
    const double a = std::pow(std::abs(v[i]), p);
    s += w ? a * (*w)[i] : a;
  });
  return s * f.grid().cell_volume();
}

inline LevelSup ball_weak(const GridFunction& f, const GridFunction* w, const Ball& b) {
  std::vector<double> a, m;
  const auto v = f.values();
  const double vol = f.grid().cell_volume();
  for_each_node(f.grid(), b, [&](std::size_t i) {
    a.push_back(std::abs(v[i]));
    m.push_back(w ? (*w)[i] * vol : vol);
  });
  return weak_level_sup(a, m);
}

}  // namespace detail

/// (integral |f|^p w)^{1/p} over the whole grid.
inline double lp_norm(const GridFunction& f, double p, const Weight& w) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  detail::check_grid(f, w);
  const auto v = f.values();
  const auto d = w.density().values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p) * d[i];
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

inline double lp_norm(const GridFunction& f, double p) { return lp_norm(f, p, Weight::constant(f.grid())); }

inline LevelSup weak_l1(const GridFunction& f, const Weight& w) {
  detail::check_grid(f, w);
  std::vector<double> a(f.size()), m(f.size());
  const auto d = w.density().values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::abs(f[i]);
    m[i] = d[i] * f.grid().cell_volume();
  }
  return weak_level_sup(a, m);
}

/// sup_lambda lambda * w({|f| > lambda}).
inline double weak_l1_norm(const GridFunction& f, const Weight& w) { return weak_l1(f, w).value; }
inline double weak_l1_norm(const GridFunction& f) { return weak_l1_norm(f, Weight::constant(f.grid())); }

/// sup_B (w(B)^{-kappa} integral_B |f|^p w)^{1/p}.
inline NormReport weighted_morrey_norm(const GridFunction& f, const MorreyParams& params, const Weight& w,
                                       const BallFamily& balls) {
  detail::check_grid(f, w);
  NormReport r;
  for (const auto& b : balls) {
    const double wb = weighted_measure(w, b);
    const double integral = detail::ball_power_integral(f, params.p, &w.density(), b);
    r.terms.push_back(std::pow(integral / std::pow(wb, params.kappa), 1.0 / params.p));
  }
  detail::finish(r, f);
  return r;
}

/// sup_B sup_lambda w(B)^{-kappa} lambda w({x in B : |f| > lambda}).
inline NormReport weak_weighted_morrey_norm(const GridFunction& f, double kappa, const Weight& w,
                                            const BallFamily& balls) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("weak_weighted_morrey_norm: need 0 < kappa < 1");
  detail::check_grid(f, w);
  NormReport r;
  std::vector<double> lambdas;
  for (const auto& b : balls) {
    const auto ls = detail::ball_weak(f, &w.density(), b);
    r.terms.push_back(ls.value / std::pow(weighted_measure(w, b), kappa));
    lambdas.push_back(ls.lambda);
  }
  detail::finish(r, f);
  if (r.maximizing_ball) r.maximizing_lambda = lambdas[*r.maximizing_ball];
  return r;
}

/// sup_{B(x0,r)} (phi(r)^{-1} integral_B |f|^p)^{1/p}.
inline NormReport generalized_morrey_norm(const GridFunction& f, double p, const GrowthFunction& phi,
                                          const BallFamily& balls) {
  if (!(p >= 1.0)) throw std::invalid_argument("generalized_morrey_norm: p must be >= 1");
  NormReport r;
  for (const auto& b : balls) {
    const double integral = detail::ball_power_integral(f, p, nullptr, b);
    r.terms.push_back(std::pow(integral / phi(b.radius), 1.0 / p));
  }
  detail::finish(r, f);
  return r;
}

/// sup_{B(x0,r)} phi(r)^{-1} sup_lambda lambda |{x in B : |f| > lambda}|.
inline NormReport weak_generalized_morrey_norm(const GridFunction& f, const GrowthFunction& phi,
                                               const BallFamily& balls) {
  NormReport r;
  std::vector<double> lambdas;
  for (const auto& b : balls) {
    const auto ls = detail::ball_weak(f, nullptr, b);
    r.terms.push_back(ls.value / phi(b.radius));
    lambdas.push_back(ls.lambda);
  }
  detail::finish(r, f);
  if (r.maximizing_ball) r.maximizing_lambda = lambdas[*r.maximizing_ball];
  return r;
}

}  // namespace sqfn
