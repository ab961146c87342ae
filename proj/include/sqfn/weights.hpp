#pragma once

// Muckenhoupt-type diagnostics of a sampled weight over a finite, documented
// family of balls. Every supremum "over all balls" is replaced by a maximum
// over the family; ties resolve to the lowest ball index.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqfn/grid.hpp"

namespace sqfn {

inline constexpr double kDefaultWeightFloor = 1e-12;

/// A strictly positive density: values below the floor are lifted to it.
class Weight {
 public:
  Weight(const GridFunction& density, double floor = kDefaultWeightFloor)
      : density_(lift(density, floor)), floor_(floor) {}

  static Weight constant(const Grid& g, double c = 1.0) { return Weight(GridFunction::constant(g, c)); }

  const GridFunction& density() const { return density_; }
  const Grid& grid() const { return density_.grid(); }
  double floor() const { return floor_; }

  Weight scaled(double c) const { return Weight(density_.scaled(c), floor_ * c); }

 private:
  static GridFunction lift(const GridFunction& d, double floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("Weight: floor must be positive");
    std::vector<double> v(d.values().begin(), d.values().end());
    for (double& x : v) x = std::max(x, floor);
    return GridFunction(d.grid(), std::move(v));
  }

  GridFunction density_;
  double floor_;
};

/// density(x) = max(|x|^a, floor).
inline Weight power_weight(double a, const Grid& g, double floor = kDefaultWeightFloor) {
  const Point o = g.dim() == 1 ? Point(0.0) : Point(0.0, 0.0);
  return Weight(GridFunction::sample(g, [&](const Point& x) {
                  const double r = distance(x, o);
                  return r == 0.0 ? (a == 0.0 ? 1.0 : (a > 0.0 ? 0.0 : std::numeric_limits<double>::max())) : std::pow(r, a);
                }),
                floor);
}

/// A finite surrogate for "every ball", with a record of how it was built.
class BallFamily {
 public:
  BallFamily(const Grid& g, std::vector<Ball> balls, std::string provenance)
      : balls_(std::move(balls)), provenance_(std::move(provenance)) {
    if (balls_.empty()) throw std::invalid_argument("BallFamily: empty family");
    for (std::size_t i = 0; i < balls_.size(); ++i) {
      if (balls_[i].center.dim() != g.dim()) throw std::invalid_argument("BallFamily: ball dimension mismatch");
      if (node_measure(g, balls_[i]) == 0.0)
        throw std::invalid_argument("BallFamily: ball " + std::to_string(i) + " contains no grid node");
    }
  }

  /// Balls centered at `center` with radii r0 * 2^k, k = 0..levels-1.
  static BallFamily centered(const Grid& g, Point center, double r0, int levels) {
    std::vector<Ball> b;
    for (int k = 0; k < levels; ++k) b.emplace_back(center, std::ldexp(r0, k));
    return BallFamily(g, std::move(b),
                      "centered:" + to_string(center) + ":" + format_double(r0) + ":" + std::to_string(levels));
  }

  /// Centers at window_center + spacing * k (k integer per axis), radii
  /// r0 * 2^k for k = 0..levels-1; only balls inside the window are kept. The
  /// family depends on the window alone, not on the grid spacing.
  static BallFamily lattice(const Grid& g, double spacing, double r0, int levels) {
    if (!(spacing > 0.0)) throw std::invalid_argument("BallFamily: lattice spacing must be positive");
    const Point wc = g.window_center();
    std::vector<Ball> b;
    for (int k = 0; k < levels; ++k) {
      const double r = std::ldexp(r0, k);
      const long reach = static_cast<long>(std::floor(g.window_radius() / spacing));
      for (long i0 = -reach; i0 <= reach; ++i0) {
        for (long i1 = g.dim() == 2 ? -reach : 0; i1 <= (g.dim() == 2 ? reach : 0); ++i1) {
          // Snapped to multiples of 2^-40 so rounding in the window center does
          // not move the balls between refinement levels.
          const auto snap = [](double v) { return std::ldexp(std::nearbyint(std::ldexp(v, 40)), -40); };
          const double c[2] = {snap(wc[0] + spacing * static_cast<double>(i0)),
                               snap(wc[1] + spacing * static_cast<double>(i1))};
          bool inside = true;
          for (int a = 0; a < g.dim(); ++a)
            inside = inside && c[a] - r >= g.window_lo(a) - 1e-12 && c[a] + r <= g.window_hi(a) + 1e-12;
          if (inside) b.emplace_back(Point::from_coords(g.dim(), c), r);
        }
      }
    }
    return BallFamily(g, std::move(b),
                      "lattice:" + format_double(spacing) + ":" + format_double(r0) + ":" + std::to_string(levels));
  }

  std::size_t size() const { return balls_.size(); }
  const Ball& operator[](std::size_t i) const { return balls_[i]; }
  const std::vector<Ball>& balls() const { return balls_; }
  const std::string& provenance() const { return provenance_; }
  auto begin() const { return balls_.begin(); }
  auto end() const { return balls_.end(); }

 private:
  std::vector<Ball> balls_;
  std::string provenance_;
};

/// Parses "centered:<x>[,<y>]:<r0>:<levels>" or "lattice:<spacing>:<r0>:<levels>".
inline BallFamily parse_ball_family(const Grid& g, const std::string& spec) {
  std::vector<std::string> parts;
  {
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
  }
  try {
    if (parts.size() == 4 && parts[0] == "centered") {
      std::vector<double> c;
      std::stringstream ss(parts[1]);
      std::string tok;
      while (std::getline(ss, tok, ',')) c.push_back(std::stod(tok));
      if (static_cast<int>(c.size()) != g.dim()) throw std::invalid_argument("center dimension mismatch");
      const Point p = g.dim() == 1 ? Point(c[0]) : Point(c[0], c[1]);
      return BallFamily::centered(g, p, std::stod(parts[2]), std::stoi(parts[3]));
    }
    if (parts.size() == 4 && parts[0] == "lattice")
      return BallFamily::lattice(g, std::stod(parts[1]), std::stod(parts[2]), std::stoi(parts[3]));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("ball family '" + spec + "': " + e.what());
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument("ball family '" + spec + "': " + e.what());
  }
  throw std::invalid_argument("ball family '" + spec + "': expected centered:<x>[,<y>]:<r0>:<levels> or lattice:<spacing>:<r0>:<levels>");
}

/// w(E) = integral of the density over E.
inline double weighted_measure(const Weight& w, const Region& region) { return integrate(w.density(), region); }

struct Characteristic {
  double value = 0.0;
  std::size_t ball_index = 0;
};

namespace detail {

template <class Term>
Characteristic family_max(const BallFamily& balls, Term&& term) {
  Characteristic best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const double v = term(balls[i]);
    if (v > best.value) best = {v, i};
  }
  return best;
}

}  // namespace detail

/// The A_p product (avg_B w)(avg_B w^{-1/(p-1)})^{p-1} for one ball. The
/// density is normalized by its maximum on B first, so a constant weight gives
/// exactly 1.
inline double ap_term(const Weight& w, double p, const Ball& b) {
  if (!(p > 1.0)) throw std::invalid_argument("ap_characteristic: p must exceed 1");
  const auto d = w.density().values();
  const auto nodes = nodes_in(w.grid(), b);
  if (nodes.empty()) throw std::invalid_argument("ap_characteristic: ball contains no node");
  double mx = 0.0;
  for (std::size_t i : nodes) mx = std::max(mx, d[i]);
  const double e = -1.0 / (p - 1.0);
  double sw = 0.0, sd = 0.0;
  for (std::size_t i : nodes) {
    const double v = d[i] / mx;
    sw += v;
    sd += std::pow(v, e);
  }
  const double cnt = static_cast<double>(nodes.size());
  return (sw / cnt) * std::pow(sd / cnt, p - 1.0);
}

inline Characteristic ap_characteristic(const Weight& w, double p, const BallFamily& balls) {
  if (!(p > 1.0)) throw std::invalid_argument("ap_characteristic: p must exceed 1");
  return detail::family_max(balls, [&](const Ball& b) { return ap_term(w, p, b); });
}

/// avg_B w / min_B w (essential infimum realized as the node minimum).
inline double a1_term(const Weight& w, const Ball& b) {
  const auto d = w.density().values();
  const auto nodes = nodes_in(w.grid(), b);
  if (nodes.empty()) throw std::invalid_argument("a1_characteristic: ball contains no node");
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i : nodes) mn = std::min(mn, d[i]);
  double s = 0.0;
  for (std::size_t i : nodes) s += d[i] / mn;
  return s / static_cast<double>(nodes.size());
}

inline Characteristic a1_characteristic(const Weight& w, const BallFamily& balls) {
  return detail::family_max(balls, [&](const Ball& b) { return a1_term(w, b); });
}

struct DoublingReport {
  double value = 0.0;
  std::size_t ball_index = 0;
  std::vector<std::size_t> skipped;  // balls with zero weighted measure
};

/// w(2B) / w(B), or nullopt when B holds no node.
inline std::optional<double> doubling_term(const Weight& w, const Ball& b) {
  if (node_measure(w.grid(), b) == 0.0) return std::nullopt;
  return weighted_measure(w, ball_dilate(b, 2.0)) / weighted_measure(w, b);
}

inline DoublingReport doubling_ratio(const Weight& w, const BallFamily& balls) {
  DoublingReport r{-std::numeric_limits<double>::infinity(), 0, {}};
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const auto t = doubling_term(w, balls[i]);
    if (!t) {
      r.skipped.push_back(i);
      continue;
    }
    if (*t > r.value) {
      r.value = *t;
      r.ball_index = i;
    }
  }
  return r;
}

struct AInftyFit {
  double c_fit = 0.0;
  double delta_fit = 0.0;
  double residual = 0.0;  // min over pairs of c_fit (|E|/|B|)^delta - w(E)/w(B)
  bool capped = false;    // no ladder delta met the cap; smallest delta returned
};

struct SubsetPair {
  Ball ball;
  Region subset;
};

/// Largest delta on {0.05, 0.10, ..., 1.00} whose best constant
/// C = max_pairs (w(E)/w(B)) / (|E|/|B|)^delta stays within `cap`.
inline AInftyFit ainfty_fit(const Weight& w, std::span<const SubsetPair> pairs, double cap = 1e3) {
  if (pairs.empty()) throw std::invalid_argument("ainfty_fit: empty pair list");
  std::vector<double> wratio, mratio;
  for (const auto& pr : pairs) {
    const double mb = node_measure(w.grid(), pr.ball);
    double me = 0.0, we = 0.0;
    bool subset = true;
    const auto d = w.density().values();
    for_each_node(w.grid(), pr.subset, [&](std::size_t i) {
      double x[2];
      w.grid().node_coords(i, x);
      subset = subset && detail::member(pr.ball, w.grid().dim(), x);
      me += w.grid().cell_volume();
      we += d[i];
    });
    if (!subset) throw std::invalid_argument("ainfty_fit: E is not contained in B at node level");
    if (me == 0.0) throw std::invalid_argument("ainfty_fit: |E| = 0");
    wratio.push_back(we * w.grid().cell_volume() / weighted_measure(w, pr.ball));
    mratio.push_back(me / mb);
  }
  auto constant_for = [&](double delta) {
    double c = 0.0;
    for (std::size_t k = 0; k < wratio.size(); ++k) c = std::max(c, wratio[k] / std::pow(mratio[k], delta));
    return c;
  };
  AInftyFit fit;
  fit.capped = true;
  for (int step = 20; step >= 1; --step) {
    const double delta = 0.05 * step;
    const double c = constant_for(delta);
    if (c <= cap) {
      fit = {c, delta, 0.0, false};
      break;
    }
  }
  if (fit.capped) fit = {constant_for(0.05), 0.05, 0.0, true};
  fit.residual = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < wratio.size(); ++k)
    fit.residual = std::min(fit.residual, fit.c_fit * std::pow(mratio[k], fit.delta_fit) - wratio[k]);
  return fit;
}

/// max over radii of the node average of w over B(x, r); radii whose ball
/// holds no node are ignored.
inline double hl_maximal(const GridFunction& w, const Point& x, std::span<const double> radii) {
  if (radii.empty()) throw std::invalid_argument("hl_maximal: empty radius ladder");
  const auto d = w.values();
  double best = 0.0;
  for (double r : radii) {
    double s = 0.0;
    std::size_t n = 0;
    for_each_node(w.grid(), Ball(x, r), [&](std::size_t i) {
      s += d[i];
      ++n;
    });
    if (n > 0) best = std::max(best, s / static_cast<double>(n));
  }
  return best;
}

inline double hl_maximal(const Weight& w, const Point& x, std::span<const double> radii) {
  return hl_maximal(w.density(), x, radii);
}

/// Mw sampled at every grid node.
inline GridFunction hl_maximal_field(const Weight& w, std::span<const double> radii) {
  const Grid& g = w.grid();
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = hl_maximal(w, g.node(i), radii);
  return GridFunction(g, std::move(v));
}

/// h * 2^k for k = 0, 1, ... while below twice the window radius.
inline std::vector<double> default_maximal_radii(const Grid& g) {
  std::vector<double> r;
  for (double t = g.spacing(); t <= 2.0 * g.window_radius(); t *= 2.0) r.push_back(t);
  return r;
}

}  // namespace sqfn
