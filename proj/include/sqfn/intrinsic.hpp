#pragma once

// Intrinsic square functions on sampled functions.
//
//   A(f)(y,t) = sup_{phi in class} | integral phi_t(y - z) f(z) dz |
//   S(f)(x)   = ( integral over the cone |x - y| < t of A(f)(y,t)^2 dy dt / t^{n+1} )^{1/2}
//
// Substituting z = y - t u turns the pairing into integral phi(u) f(y - t u) du,
// so with class nodes u_i and class cell volume v the pairing vector is
// c_i = f(y - t u_i) * v, and A is the |.|-maximum of c . phi over the class
// polytope. f between grid nodes is multilinear, with f = 0 at every lattice
// node outside the window.
//
// The cone is discretized with y on grid nodes and t on the geometric ladder
// t_min * rho^k; a cell (y, t) carries weight h^n * t (rho - 1) / t^{n+1}.
// A(f)(y,t) does not depend on the apex x, so a ConeField tabulates it once per
// function and every S(f)(x) is a weighted sum over that table.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sqfn/grid.hpp"
#include "sqfn/lipopt.hpp"
#include "sqfn/parallel.hpp"

namespace sqfn {

class ConeQuadrature {
 public:
  ConeQuadrature(double t_min, double t_max, double rho) : t_min_(t_min), t_max_(t_max), rho_(rho) {
    if (!(t_min > 0.0) || !(t_max > t_min)) throw std::invalid_argument("ConeQuadrature: need 0 < t_min < t_max");
    if (!(rho > 1.0) || !std::isfinite(rho)) throw std::invalid_argument("ConeQuadrature: need rho > 1");
  }

  /// t_min = h, t_max = 4 * window radius.
  static ConeQuadrature for_grid(const Grid& g, double rho = 1.25) {
    return ConeQuadrature(g.spacing(), 4.0 * g.window_radius(), rho);
  }

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double rho() const { return rho_; }

  std::vector<double> levels() const {
    std::vector<double> t;
    for (int k = 0;; ++k) {
      const double v = t_min_ * std::pow(rho_, k);
      if (v > t_max_ * (1.0 + 1e-12)) break;
      t.push_back(v);
    }
    return t;
  }

  /// dy dt / t^{n+1} for one (y, t) cell.
  double cell_weight(double t, const Grid& g) const {
    return g.cell_volume() * t * (rho_ - 1.0) / std::pow(t, g.dim() + 1);
  }

  /// Halves rho - 1; t_min and t_max unchanged.
  ConeQuadrature refined() const { return ConeQuadrature(t_min_, t_max_, 1.0 + 0.5 * (rho_ - 1.0)); }

 private:
  double t_min_, t_max_, rho_;
};

struct IntrinsicParams {
  HoelderClassSpec class_spec;
  ConeQuadrature cone;
  unsigned jobs = 0;  // worker threads, 0 = all cores

  double alpha() const { return class_spec.alpha; }
};

/// Multilinear interpolation of f extended by zero off the window.
inline double interpolate(const GridFunction& f, const double* x) {
  const Grid& g = f.grid();
  const auto v = f.values();
  const double h = g.spacing();
  long base[2] = {0, 0};
  double frac[2] = {0.0, 0.0};
  for (int k = 0; k < g.dim(); ++k) {
    const double s = (x[k] - g.origin()[k]) / h;
    const double fl = std::floor(s);
    if (fl < -1.0 || fl > static_cast<double>(g.counts()[k])) return 0.0;
    base[k] = static_cast<long>(fl);
    frac[k] = s - fl;
  }
  auto value = [&](long i0, long i1) -> double {
    if (i0 < 0 || i1 < 0 || i0 >= static_cast<long>(g.counts()[0]) || i1 >= static_cast<long>(g.counts()[1]))
      return 0.0;
    return v[g.index(static_cast<std::size_t>(i0), static_cast<std::size_t>(i1))];
  };
  if (g.dim() == 1) {
    const double a = value(base[0], 0), b = value(base[0] + 1, 0);
    if (frac[0] == 0.0) return a;
    return a + frac[0] * (b - a);
  }
  const double a00 = value(base[0], base[1]), a01 = value(base[0], base[1] + 1);
  const double a10 = value(base[0] + 1, base[1]), a11 = value(base[0] + 1, base[1] + 1);
  const double lo = a00 + frac[1] * (a01 - a00);
  const double hi = a10 + frac[1] * (a11 - a10);
  return lo + frac[0] * (hi - lo);
}

namespace detail {

inline std::vector<double> pairing_vector(const GridFunction& f, const double* y, double t,
                                          const HoelderClassSpec& spec) {
  std::vector<double> c(spec.size());
  double z[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Point& u = spec.nodes[i];
    for (int k = 0; k < spec.dim; ++k) z[k] = y[k] - t * u[k];
    c[i] = interpolate(f, z) * spec.cell_volume;
  }
  return c;
}

}  // namespace detail

inline double a_alpha(const GridFunction& f, const Point& y, double t, const PairingMaximizer& pm) {
  if (!(t > 0.0)) throw std::invalid_argument("a_alpha: t must be positive");
  if (y.dim() != f.grid().dim()) throw std::invalid_argument("a_alpha: dimension mismatch");
  return pm.maximize_abs(detail::pairing_vector(f, y.data(), t, pm.spec()));
}

inline double a_alpha(const GridFunction& f, const Point& y, double t, const IntrinsicParams& params) {
  return a_alpha(f, y, t, PairingMaximizer(params.class_spec));
}

/// A(f) tabulated on (grid node, cone level).
class ConeField {
 public:
  ConeField(const GridFunction& f, const PairingMaximizer& pm, const ConeQuadrature& cone, unsigned jobs = 0)
      : grid_(f.grid()), cone_(cone), levels_(cone.levels()), a_(levels_.size() * f.size(), 0.0) {
    if (pm.spec().dim != grid_.dim()) throw std::invalid_argument("ConeField: class dimension does not match grid");
    const std::size_t n = f.size();
    if (f.is_zero()) return;
    parallel_for(a_.size(), jobs, [&](std::size_t cell) {
      const std::size_t k = cell / n, node = cell % n;
      double y[2];
      grid_.node_coords(node, y);
      a_[cell] = pm.maximize_abs(detail::pairing_vector(f, y, levels_[k], pm.spec()));
    });
  }

  ConeField(const GridFunction& f, const IntrinsicParams& params)
      : ConeField(f, PairingMaximizer(params.class_spec), params.cone, params.jobs) {}

  const Grid& grid() const { return grid_; }
  const std::vector<double>& levels() const { return levels_; }
  double a(std::size_t level, std::size_t node) const { return a_[level * grid_.size() + node]; }

  /// S(f)(x)^2 over the discretized cone at x.
  double s_squared(const Point& x) const {
    if (x.dim() != grid_.dim()) throw std::invalid_argument("s_alpha: dimension mismatch");
    const std::size_t n = grid_.size();
    double total = 0.0;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
      const double t = levels_[k];
      double level_sum = 0.0;
      for_each_node(grid_, Ball(x, t), [&](std::size_t i) {
        const double v = a_[k * n + i];
        level_sum += v * v;
      });
      total += level_sum * cone_.cell_weight(t, grid_);
    }
    return total;
  }

  double s_alpha(const Point& x) const { return std::sqrt(s_squared(x)); }

 private:
  Grid grid_;
  ConeQuadrature cone_;
  std::vector<double> levels_;
  std::vector<double> a_;
};

/// S(f)(x) evaluated directly over the cells of the cone at x.
inline double s_alpha(const GridFunction& f, const Point& x, const IntrinsicParams& params) {
  if (x.dim() != f.grid().dim()) throw std::invalid_argument("s_alpha: dimension mismatch");
  const PairingMaximizer pm(params.class_spec);
  const Grid& g = f.grid();
  double total = 0.0;
  if (f.is_zero()) return 0.0;
  for (double t : params.cone.levels()) {
    const auto cells = nodes_in(g, Ball(x, t));
    std::vector<double> sq(cells.size());
    parallel_for(cells.size(), params.jobs, [&](std::size_t k) {
      double y[2];
      g.node_coords(cells[k], y);
      const double a = pm.maximize_abs(detail::pairing_vector(f, y, t, pm.spec()));
      sq[k] = a * a;
    });
    double level_sum = 0.0;
    for (double v : sq) level_sum += v;
    total += level_sum * params.cone.cell_weight(t, g);
  }
  return std::sqrt(total);
}

/// The vector-valued square function of a family, tabulated member by member.
class FamilyField {
 public:
  FamilyField(const FunctionFamily& fam, const IntrinsicParams& params) : grid_(fam.grid()) {
    const PairingMaximizer pm(params.class_spec);
    members_.reserve(fam.size());
    for (const auto& f : fam) members_.emplace_back(f, pm, params.cone, params.jobs);
  }

  const Grid& grid() const { return grid_; }
  const std::vector<ConeField>& members() const { return members_; }

  double value_at(const Point& x) const {
    if (members_.size() == 1) return members_.front().s_alpha(x);
    double s = 0.0;
    for (const auto& m : members_) s += m.s_squared(x);
    return std::sqrt(s);
  }

  /// The field sampled at every grid node.
  GridFunction field(unsigned jobs = 0) const {
    std::vector<double> v(grid_.size());
    parallel_for(v.size(), jobs, [&](std::size_t i) { v[i] = value_at(grid_.node(i)); });
    return GridFunction(grid_, std::move(v));
  }

  std::vector<double> values_at(std::span<const Point> xs) const {
    std::vector<double> v;
    v.reserve(xs.size());
    for (const auto& x : xs) v.push_back(value_at(x));
    return v;
  }

 private:
  Grid grid_;
  std::vector<ConeField> members_;
};

/// (sum_j S(f_j)(x)^2)^{1/2}.
inline double s_alpha_family(const FunctionFamily& fam, const Point& x, const IntrinsicParams& params) {
  if (fam.size() == 1) return s_alpha(fam[0], x, params);
  double s = 0.0;
  for (const auto& f : fam) {
    const double v = s_alpha(f, x, params);
    s += v * v;
  }
  return std::sqrt(s);
}

/// Analytic bound on the part of S(f)(x)^2 from t > t_max: since
/// |phi| <= 1 on the class, A(f)(y,t) <= t^{-n} ||f||_1, and integrating over
/// the cone gives v_n ||f||_1^2 t_max^{-2n} / (2n).
inline double cone_tail_bound(const GridFunction& f, const ConeQuadrature& cone) {
  const int n = f.grid().dim();
  double l1 = 0.0;
  for (double v : f.values()) l1 += std::abs(v);
  l1 *= f.grid().cell_volume();
  const double unit_ball = n == 1 ? 2.0 : std::numbers::pi;
  return unit_ball * l1 * l1 * std::pow(cone.t_max(), -2.0 * n) / (2.0 * n);
}

// ---------------------------------------------------------------------------
// Local / far decomposition around a ball

struct LocalFarSplit {
  FunctionFamily local;  // f_j restricted to 2B
  FunctionFamily far;    // f_j - local_j
};

inline LocalFarSplit split_local_far(const FunctionFamily& fam, const Ball& b) {
  const Ball twice = ball_dilate(b, 2.0);
  std::vector<GridFunction> local, far;
  for (const auto& f : fam) {
    local.push_back(restrict(f, twice));
    far.push_back(f - local.back());
  }
  return {FunctionFamily(std::move(local)), FunctionFamily(std::move(far))};
}

/// Smallest l >= 1 with 2^{l+1} B covering the whole window.
inline int default_ell_max(const Grid& g, const Ball& b) {
  double reach = 0.0;
  for (int c0 = 0; c0 < 2; ++c0) {
    for (int c1 = 0; c1 < (g.dim() == 2 ? 2 : 1); ++c1) {
      const double corner[2] = {c0 ? g.window_hi(0) : g.window_lo(0), c1 ? g.window_hi(1) : g.window_lo(1)};
      reach = std::max(reach, detail::distance(g.dim(), corner, b.center.data()));
    }
  }
  int ell = 1;
  while (std::ldexp(b.radius, ell + 1) <= reach) ++ell;
  return ell;
}

struct MajorantReport {
  double value = 0.0;
  std::vector<double> terms;  // per shell l = 1..ell_max
  bool window_escaped = false;  // some 2^{l+1} B left the window; its term used the intersection
};

/// sum_{l=1}^{ell_max} |2^{l+1}B|^{-1} integral_{2^{l+1}B} (sum_j |f_j|^2)^{1/2},
/// with |.| the node measure of the ball's intersection with the window.
inline MajorantReport far_field_majorant(const FunctionFamily& fam, const Ball& b, int ell_max) {
  if (ell_max < 1) throw std::invalid_argument("far_field_majorant: ell_max must be >= 1");
  const GridFunction agg = l2_aggregate(fam);
  const Grid& g = fam.grid();
  MajorantReport r;
  for (int ell = 1; ell <= ell_max; ++ell) {
    const Ball big = ball_dilate(b, std::ldexp(1.0, ell + 1));
    for (int k = 0; k < g.dim(); ++k)
      if (big.center[k] - big.radius < g.window_lo(k) || big.center[k] + big.radius > g.window_hi(k))
        r.window_escaped = true;
    const double m = node_measure(g, big);
    const double term = m > 0.0 ? integrate(agg, big) / m : 0.0;
    r.terms.push_back(term);
    r.value += term;
  }
  return r;
}

}  // namespace sqfn
