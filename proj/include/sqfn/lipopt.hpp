#pragma once

// The discretized Hölder test class and the dense simplex used to maximize a
// linear pairing over it.
//
// A test function is represented by its values phi_i at the class nodes u_i
// (cell centers of a uniform grid on [-1,1]^dim that lie in the closed unit
// ball). The class is the polytope
//
//     sum_i phi_i * vol       = 0
//     phi_i - phi_j          <= |u_i - u_j|^alpha     for every ordered pair,
//
// i.e. mean zero under the same midpoint rule the grid module integrates with,
// and the Hölder bound imposed on all pairs (neighbor-only bounds would chain
// to k*h^alpha > (k*h)^alpha and define a strictly larger set when alpha < 1).
// Support is structural: there are no variables outside the unit ball.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqfn/format.hpp"
#include "sqfn/grid.hpp"

namespace sqfn {

struct HoelderClassSpec {
  double alpha;
  int dim;
  std::vector<Point> nodes;
  double cell_volume;  // quadrature weight of each node in the mean-zero row

  HoelderClassSpec(double alpha_, int dim_, std::vector<Point> nodes_, double cell_volume_)
      : alpha(alpha_), dim(dim_), nodes(std::move(nodes_)), cell_volume(cell_volume_) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("HoelderClassSpec: alpha must lie in (0,1]");
    if (dim != 1 && dim != 2) throw std::invalid_argument("HoelderClassSpec: dim must be 1 or 2");
    if (nodes.size() < 2) throw std::invalid_argument("HoelderClassSpec: need at least 2 nodes");
    if (!(cell_volume > 0.0)) throw std::invalid_argument("HoelderClassSpec: cell volume must be positive");
    const Point origin = dim == 1 ? Point(0.0) : Point(0.0, 0.0);
    for (const auto& u : nodes) {
      if (u.dim() != dim) throw std::invalid_argument("HoelderClassSpec: node dimension mismatch");
      if (distance(u, origin) > 1.0 + 1e-12)
        throw std::invalid_argument("HoelderClassSpec: node outside the unit ball");
    }
  }

  /// Cell centers of a resolution^dim grid on [-1,1]^dim, kept if |u| <= 1.
  static HoelderClassSpec midpoint(int dim, double alpha, int resolution) {
    if (resolution < 2) throw std::invalid_argument("HoelderClassSpec: resolution must be >= 2");
    const double h = 2.0 / resolution;
    std::vector<Point> nodes;
    for (int i = 0; i < resolution; ++i) {
      const double a = -1.0 + (i + 0.5) * h;
      if (dim == 1) {
        nodes.emplace_back(a);
        continue;
      }
      for (int j = 0; j < resolution; ++j) {
        const double b = -1.0 + (j + 0.5) * h;
        if (std::sqrt(a * a + b * b) <= 1.0) nodes.emplace_back(a, b);
      }
    }
    return HoelderClassSpec(alpha, dim, std::move(nodes), dim == 1 ? h : h * h);
  }

  std::size_t size() const { return nodes.size(); }
};

/// max objective . x  subject to  ineq rows (a . x <= b) and eq rows (e . x = d);
/// variables are free.
struct LinearProgram {
  struct Row {
    std::vector<double> coeffs;
    double bound;
  };

  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> inequalities;
  std::vector<Row> equalities;

  void validate() const {
    if (objective.size() != num_vars) throw std::invalid_argument("LinearProgram: objective size mismatch");
    auto check = [&](const Row& r) {
      if (r.coeffs.size() != num_vars) throw std::invalid_argument("LinearProgram: row size mismatch");
      if (!std::isfinite(r.bound)) throw std::invalid_argument("LinearProgram: non-finite bound");
      for (double a : r.coeffs)
        if (!std::isfinite(a)) throw std::invalid_argument("LinearProgram: non-finite coefficient");
    };
    for (const auto& r : inequalities) check(r);
    for (const auto& r : equalities) check(r);
    for (double c : objective)
      if (!std::isfinite(c)) throw std::invalid_argument("LinearProgram: non-finite objective");
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  double optimum = 0.0;
  std::vector<double> argument;
};

/// Constraint rows of the discretized Hölder class (objective left zero).
inline LinearProgram calpha_constraints(const HoelderClassSpec& spec) {
  const std::size_t m = spec.size();
  LinearProgram lp;
  lp.num_vars = m;
  lp.objective.assign(m, 0.0);
  lp.equalities.push_back({std::vector<double>(m, spec.cell_volume), 0.0});
  lp.inequalities.reserve(m * (m - 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double bound = std::pow(distance(spec.nodes[i], spec.nodes[j]), spec.alpha);
      std::vector<double> a(m, 0.0);
      a[i] = 1.0;
      a[j] = -1.0;
      lp.inequalities.push_back({a, bound});
      a[i] = -1.0;
      a[j] = 1.0;
      lp.inequalities.push_back({std::move(a), bound});
    }
  }
  return lp;
}

namespace detail {

/// Power of two closest below max|v|, or 1 for a zero vector. Dividing by it is
/// exact, so pivot decisions are invariant under power-of-two rescaling.
inline double pow2_scale(std::span<const double> v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  if (mx == 0.0) return 1.0;
  int e = 0;
  std::frexp(mx, &e);
  return std::ldexp(1.0, e - 1);
}

/// Dense two-phase simplex on the dictionary
///     max c.x  s.t.  A x <= b,  x >= 0
/// stored as an (m+2) x (n+2) tableau: row m is the objective, row m+1 the
/// phase-one objective, column n the phase-one artificial, column n+1 the
/// right-hand side.
class Simplex {
 public:
  static constexpr double kEps = 1e-11;

  Simplex(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), stride_(cols + 2), d_((rows + 2) * (cols + 2), 0.0), basic_(rows), nonbasic_(cols + 1) {
    for (std::size_t j = 0; j < n_; ++j) nonbasic_[j] = static_cast<long>(j);
    nonbasic_[n_] = -1;
    for (std::size_t i = 0; i < m_; ++i) {
      basic_[i] = static_cast<long>(n_ + i);
      at(i, n_) = -1.0;
    }
    at(m_ + 1, n_) = 1.0;
  }

  void set_row(std::size_t i, std::span<const double> a, double b) {
    for (std::size_t j = 0; j < n_; ++j) at(i, j) = a[j];
    at(i, n_ + 1) = b;
  }
  void set_objective(std::span<const double> c) {
    for (std::size_t j = 0; j < n_; ++j) at(m_, j) = -c[j];
  }

  LPStatus run() {
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    if (m_ > 0 && at(r, n_ + 1) < -kEps) {
      pivot(r, n_);
      if (!iterate(2) || at(m_ + 1, n_ + 1) < -kEps) return LPStatus::Infeasible;
      for (std::size_t i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        std::size_t s = n_ + 1;
        for (std::size_t j = 0; j <= n_; ++j) {
          if (nonbasic_[j] == -1 || std::abs(at(i, j)) <= kEps) continue;
          if (s == n_ + 1 || nonbasic_[j] < nonbasic_[s]) s = j;
        }
        if (s != n_ + 1) pivot(i, s);
      }
    }
    return iterate(1) ? LPStatus::Optimal : LPStatus::Unbounded;
  }

  double optimum() const { return at(m_, n_ + 1); }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) x[static_cast<std::size_t>(basic_[i])] = at(i, n_ + 1);
    return x;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return d_[i * stride_ + j]; }
  double at(std::size_t i, std::size_t j) const { return d_[i * stride_ + j]; }

  void pivot(std::size_t r, std::size_t s) {
    double* a = &d_[r * stride_];
    const double inv = 1.0 / a[s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* b = &d_[i * stride_];
      if (b[s] == 0.0) continue;
      const double f = b[s] * inv;
      for (std::size_t j = 0; j < stride_; ++j) b[j] -= a[j] * f;
      b[s] = a[s] * f;
    }
    for (std::size_t j = 0; j < stride_; ++j)
      if (j != s) a[j] *= inv;
    for (std::size_t i = 0; i < m_ + 2; ++i)
      if (i != r) at(i, s) *= -inv;
    a[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // Dantzig's rule (most negative reduced cost, lowest index on ties) while
  // the objective strictly improves; after kDegenerateLimit consecutive
  // degenerate pivots switch to Bland's rule until the next strict
  // improvement. Both choices are deterministic and the combination cannot
  // cycle.
  bool iterate(int phase) {
    static constexpr int kDegenerateLimit = 8;
    const std::size_t obj = m_ + static_cast<std::size_t>(phase) - 1;
    int degenerate = 0;
    for (;;) {
      const bool bland = degenerate >= kDegenerateLimit;
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        const double rc = at(obj, j);
        if (!(rc < -kEps)) continue;
        if (s == n_ + 1) {
          s = j;
        } else if (bland) {
          if (nonbasic_[j] < nonbasic_[s]) s = j;
        } else if (rc < at(obj, s) || (rc == at(obj, s) && nonbasic_[j] < nonbasic_[s])) {
          s = j;
        }
      }
      if (s == n_ + 1) return true;
      std::size_t r = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (at(i, s) <= kEps) continue;
        const double ratio = at(i, n_ + 1) / at(i, s);
        if (r == m_ || ratio < best || (ratio == best && basic_[i] < basic_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == m_) return false;
      degenerate = best <= kEps ? degenerate + 1 : 0;
      pivot(r, s);
    }
  }

  std::size_t m_, n_, stride_;
  std::vector<double> d_;
  std::vector<long> basic_, nonbasic_;
};

/// A LinearProgram in split-variable standard form (x = x+ - x-, equalities as
/// two inequalities, every row scaled by a power of two), ready to be solved
/// against any number of objectives.
class StandardForm {
 public:
  explicit StandardForm(const LinearProgram& lp) : lp_(lp), prototype_(rows(lp), 2 * lp.num_vars) {
    lp.validate();
    const std::size_t nv = lp.num_vars;
    std::vector<double> a(2 * nv);
    std::size_t r = 0;
    auto add = [&](const LinearProgram::Row& row, double sign) {
      const double s = pow2_scale(row.coeffs);
      for (std::size_t j = 0; j < nv; ++j) {
        a[j] = sign * row.coeffs[j] / s;
        a[nv + j] = -a[j];
      }
      prototype_.set_row(r++, a, sign * row.bound / s);
    };
    for (const auto& row : lp.inequalities) add(row, 1.0);
    for (const auto& row : lp.equalities) {
      add(row, 1.0);
      add(row, -1.0);
    }
  }

  LPSolution solve(std::span<const double> objective) const {
    const std::size_t nv = lp_.num_vars;
    if (objective.size() != nv) throw std::invalid_argument("solve_lp: objective size mismatch");
    const double scale = pow2_scale(objective);
    std::vector<double> c(2 * nv);
    for (std::size_t j = 0; j < nv; ++j) {
      c[j] = objective[j] / scale;
      c[nv + j] = -c[j];
    }
    Simplex sx = prototype_;
    sx.set_objective(c);
    LPSolution sol;
    sol.status = sx.run();
    if (sol.status != LPStatus::Optimal) return sol;
    const auto x = sx.primal();
    sol.argument.resize(nv);
    for (std::size_t j = 0; j < nv; ++j) sol.argument[j] = x[j] - x[nv + j];
    sol.optimum = sx.optimum() * scale;
    return sol;
  }

 private:
  static std::size_t rows(const LinearProgram& lp) { return lp.inequalities.size() + 2 * lp.equalities.size(); }

  LinearProgram lp_;
  Simplex prototype_;
};

}  // namespace detail

/// Exact optimum of a small dense LP (deterministic pivoting).
inline LPSolution solve_lp(const LinearProgram& lp) {
  return detail::StandardForm(lp).solve(lp.objective);
}

/// Maximizes |sum_i c_i phi_i| over the discretized Hölder class. The
/// constraint tableau is built once; solves are const and thread-safe.
class PairingMaximizer {
 public:
  explicit PairingMaximizer(HoelderClassSpec spec)
      : spec_(std::move(spec)), program_(calpha_constraints(spec_)), form_(program_) {}

  const HoelderClassSpec& spec() const { return spec_; }
  const LinearProgram& program() const { return program_; }

  LPSolution solve(std::span<const double> objective) const { return form_.solve(objective); }

  double maximize_abs(std::span<const double> c) const {
    if (c.size() != spec_.size()) throw std::invalid_argument("maximize_abs_pairing: size mismatch");
    // Constant vectors (zero included) are annihilated by the mean-zero row.
    if (std::all_of(c.begin(), c.end(), [&](double v) { return v == c.front(); })) return 0.0;
    std::vector<double> neg(c.begin(), c.end());
    for (double& v : neg) v = -v;
    const LPSolution up = form_.solve(c);
    const LPSolution down = form_.solve(neg);
    if (up.status != LPStatus::Optimal || down.status != LPStatus::Optimal)
      throw std::runtime_error(std::string("maximize_abs_pairing: LP not optimal (") +
                               to_string(up.status == LPStatus::Optimal ? down.status : up.status) + ")");
    return std::max({up.optimum, down.optimum, 0.0});
  }

 private:
  HoelderClassSpec spec_;
  LinearProgram program_;
  detail::StandardForm form_;
};

inline double maximize_abs_pairing(std::span<const double> c, const HoelderClassSpec& spec) {
  return PairingMaximizer(spec).maximize_abs(c);
}

/// Plain-text dump: "max: c..." then one row per line, "a... <= b" or "e... = d".
inline void write_lp(std::ostream& os, const LinearProgram& lp) {
  auto coeffs = [&](const std::vector<double>& v) {
    for (std::size_t j = 0; j < v.size(); ++j) os << (j ? " " : "") << format_double(v[j]);
  };
  os << "max: ";
  coeffs(lp.objective);
  os << '\n';
  for (const auto& r : lp.inequalities) {
    coeffs(r.coeffs);
    os << " <= " << format_double(r.bound) << '\n';
  }
  for (const auto& r : lp.equalities) {
    coeffs(r.coeffs);
    os << " = " << format_double(r.bound) << '\n';
  }
}

}  // namespace sqfn
