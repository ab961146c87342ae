#pragma once

// Uniform grids in one or two dimensions, functions sampled on them, and the
// node-resolved regions (balls, dyadic annuli, complements) every integral in
// the library is taken over.
//
// Quadrature is the node-indicator midpoint rule: a node contributes its full
// cell volume h^dim iff it is a member of the region. Regions are never
// clipped at sub-cell resolution, so a ball and the annuli around it partition
// the node set exactly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sqfn/errors.hpp"
#include "sqfn/format.hpp"

namespace sqfn {

/// A point of R^1 or R^2.
class Point {
 public:
  Point() = default;
  explicit Point(double x) : dim_(1), c_{x, 0.0} {}
  Point(double x, double y) : dim_(2), c_{x, y} {}

  static Point from_coords(int dim, const double* c) {
    return dim == 1 ? Point(c[0]) : Point(c[0], c[1]);
  }

  int dim() const { return dim_; }
  double operator[](int axis) const { return c_[static_cast<std::size_t>(axis)]; }
  const double* data() const { return c_.data(); }

  bool operator==(const Point&) const = default;

 private:
  int dim_ = 0;
  std::array<double, 2> c_{};
};

inline std::string to_string(const Point& p) {
  std::string s = format_double(p[0]);
  if (p.dim() == 2) s += " " + format_double(p[1]);
  return s;
}

namespace detail {

inline double distance(int dim, const double* a, const double* b) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace detail

inline double distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("distance: dimension mismatch");
  return detail::distance(a.dim(), a.data(), b.data());
}

/// Axis-aligned uniform grid. Node (i0, i1) sits at origin + h * (i0, i1) and
/// has flat index i0 * counts[1] + i1 (row-major, axis 0 slowest).
class Grid {
 public:
  Grid(int dim, std::array<double, 2> origin, double spacing,
       std::array<std::size_t, 2> counts)
      : dim_(dim), origin_(origin), h_(spacing), counts_(counts) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
      throw std::invalid_argument("Grid: spacing must be positive");
    if (dim == 1) {
      origin_[1] = 0.0;
      counts_[1] = 1;
    }
    for (int k = 0; k < dim; ++k) {
      if (counts_[k] < 2) throw std::invalid_argument("Grid: need at least 2 nodes per axis");
      if (!std::isfinite(origin_[k])) throw std::invalid_argument("Grid: origin must be finite");
    }
  }

  /// Nodes at cell centers of [lo, hi]^dim; no node falls on lo + k*h.
  static Grid cell_centered(int dim, double lo, double hi, double spacing) {
    if (!(hi > lo)) throw std::invalid_argument("Grid: empty window");
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / spacing));
    return Grid(dim, {lo + 0.5 * spacing, lo + 0.5 * spacing}, spacing, {n, n});
  }

  /// Nodes at lo, lo + h, ..., hi along every axis.
  static Grid nodal(int dim, double lo, double hi, double spacing) {
    if (!(hi > lo)) throw std::invalid_argument("Grid: empty window");
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / spacing)) + 1;
    return Grid(dim, {lo, lo}, spacing, {n, n});
  }

  int dim() const { return dim_; }
  double spacing() const { return h_; }
  double cell_volume() const { return dim_ == 1 ? h_ : h_ * h_; }
  const std::array<double, 2>& origin() const { return origin_; }
  const std::array<std::size_t, 2>& counts() const { return counts_; }
  std::size_t size() const { return counts_[0] * counts_[1]; }

  std::size_t index(std::size_t i0, std::size_t i1 = 0) const { return i0 * counts_[1] + i1; }

  void node_coords(std::size_t idx, double* out) const {
    out[0] = origin_[0] + h_ * static_cast<double>(idx / counts_[1]);
    out[1] = dim_ == 2 ? origin_[1] + h_ * static_cast<double>(idx % counts_[1]) : 0.0;
  }

  Point node(std::size_t idx) const {
    double c[2];
    node_coords(idx, c);
    return Point::from_coords(dim_, c);
  }

  /// The window covered by the node cells: node bounding box widened by h/2.
  double window_lo(int axis) const { return origin_[axis] - 0.5 * h_; }
  double window_hi(int axis) const {
    return origin_[axis] + h_ * (static_cast<double>(counts_[axis]) - 0.5);
  }
  Point window_center() const {
    double c[2] = {0.5 * (window_lo(0) + window_hi(0)), 0.0};
    if (dim_ == 2) c[1] = 0.5 * (window_lo(1) + window_hi(1));
    return Point::from_coords(dim_, c);
  }
  /// Largest half-width of the window.
  double window_radius() const {
    double r = 0.0;
    for (int k = 0; k < dim_; ++k) r = std::max(r, 0.5 * (window_hi(k) - window_lo(k)));
    return r;
  }

  /// Same window, half the spacing.
  Grid refined() const {
    const double h = 0.5 * h_;
    std::array<double, 2> o{window_lo(0) + 0.5 * h, window_lo(1) + 0.5 * h};
    return Grid(dim_, o, h, {2 * counts_[0], 2 * counts_[1]});
  }

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  std::array<double, 2> origin_;
  double h_;
  std::array<std::size_t, 2> counts_;
};

inline std::string describe(const Grid& g) {
  std::ostringstream os;
  os << "dim=" << g.dim() << " h=" << format_double(g.spacing()) << " origin=" << format_double(g.origin()[0]);
  if (g.dim() == 2) os << "," << format_double(g.origin()[1]);
  os << " counts=" << g.counts()[0];
  if (g.dim() == 2) os << "," << g.counts()[1];
  return os.str();
}

class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw std::invalid_argument("GridFunction: value count does not match grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
  }

  static GridFunction constant(const Grid& grid, double c) {
    return GridFunction(grid, std::vector<double>(grid.size(), c));
  }
  static GridFunction zeros(const Grid& grid) { return constant(grid, 0.0); }

  template <class F>
  static GridFunction sample(const Grid& grid, F&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
    return GridFunction(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  GridFunction scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return GridFunction(grid_, std::move(v));
  }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    return a.combine(b, +1.0);
  }
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    return a.combine(b, -1.0);
  }

 private:
  GridFunction combine(const GridFunction& b, double sign) const {
    if (!(grid_ == b.grid_)) throw std::invalid_argument("GridFunction: grids differ");
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * b.values_[i];
    return GridFunction(grid_, std::move(v));
  }

  Grid grid_;
  std::vector<double> values_;
};

/// A finite vector-valued function (f_1, ..., f_J) on one shared grid.
class FunctionFamily {
 public:
  explicit FunctionFamily(std::vector<GridFunction> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("FunctionFamily: empty family");
    for (const auto& m : members_)
      if (!(m.grid() == members_.front().grid()))
        throw std::invalid_argument("FunctionFamily: members live on different grids");
  }

  const Grid& grid() const { return members_.front().grid(); }
  std::size_t size() const { return members_.size(); }
  const GridFunction& operator[](std::size_t j) const { return members_[j]; }
  const std::vector<GridFunction>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  FunctionFamily scaled(double c) const {
    std::vector<GridFunction> m;
    m.reserve(members_.size());
    for (const auto& f : members_) m.push_back(f.scaled(c));
    return FunctionFamily(std::move(m));
  }

  bool is_zero() const {
    return std::all_of(members_.begin(), members_.end(), [](const auto& f) { return f.is_zero(); });
  }

 private:
  std::vector<GridFunction> members_;
};

// ---------------------------------------------------------------------------
// Regions

/// Open ball {x : |x - center| < radius}.
struct Ball {
  Point center;
  double radius;

  Ball(Point c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("Ball: radius must be positive");
  }
};

inline Ball ball_dilate(const Ball& b, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("ball_dilate: factor must be positive");
  return Ball(b.center, factor * b.radius);
}

/// The dyadic shell 2^{level+1} B \ 2^level B.
struct Annulus {
  Ball ball;
  int level;

  Annulus(Ball b, int l) : ball(b), level(l) {
    if (l < 1) throw std::invalid_argument("Annulus: level must be >= 1");
  }
  Ball inner() const { return ball_dilate(ball, std::ldexp(1.0, level)); }
  Ball outer() const { return ball_dilate(ball, std::ldexp(1.0, level + 1)); }
};

struct Complement {
  Ball ball;
};

struct WholeGrid {};

using Region = std::variant<Ball, Annulus, Complement, WholeGrid>;

namespace detail {

inline bool inside(const Ball& b, int dim, const double* x) {
  return detail::distance(dim, x, b.center.data()) < b.radius;
}

inline bool member(const Region& region, int dim, const double* x) {
  return std::visit(
      [&](const auto& r) -> bool {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Ball>) {
          return inside(r, dim, x);
        } else if constexpr (std::is_same_v<R, Annulus>) {
          return inside(r.outer(), dim, x) && !inside(r.inner(), dim, x);
        } else if constexpr (std::is_same_v<R, Complement>) {
          return !inside(r.ball, dim, x);
        } else {
          return true;
        }
      },
      region);
}

inline int region_dim(const Region& region) {
  return std::visit(
      [](const auto& r) -> int {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Ball>) return r.center.dim();
        else if constexpr (std::is_same_v<R, WholeGrid>) return 0;
        else return r.ball.center.dim();
      },
      region);
}

inline void check_dim(const Grid& g, const Region& region) {
  const int d = region_dim(region);
  if (d != 0 && d != g.dim()) throw std::invalid_argument("region dimension does not match grid");
}

/// Bounding ball of a bounded region, if any.
inline const Ball* bounding_ball(const Region& region, Ball& storage) {
  if (const auto* b = std::get_if<Ball>(&region)) return b;
  if (const auto* a = std::get_if<Annulus>(&region)) {
    storage = a->outer();
    return &storage;
  }
  return nullptr;
}

}  // namespace detail

inline bool membership(const Point& x, const Region& region) {
  const int d = detail::region_dim(region);
  if (d != 0 && d != x.dim()) throw std::invalid_argument("membership: dimension mismatch");
  return detail::member(region, x.dim(), x.data());
}

/// Calls fn(flat_index) for every grid node inside the region, in increasing
/// index order. Bounded regions only visit their bounding box.
template <class F>
void for_each_node(const Grid& g, const Region& region, F&& fn) {
  detail::check_dim(g, region);
  const int dim = g.dim();
  const double h = g.spacing();
  std::array<std::size_t, 2> lo{0, 0};
  std::array<std::size_t, 2> hi{g.counts()[0], g.counts()[1]};
  Ball storage(Point(0.0), 1.0);
  if (const Ball* bb = detail::bounding_ball(region, storage)) {
    for (int k = 0; k < dim; ++k) {
      const double a = (bb->center[k] - bb->radius - g.origin()[k]) / h - 1.0;
      const double b = (bb->center[k] + bb->radius - g.origin()[k]) / h + 2.0;
      const double n = static_cast<double>(g.counts()[k]);
      lo[k] = static_cast<std::size_t>(std::clamp(std::floor(a), 0.0, n));
      hi[k] = static_cast<std::size_t>(std::clamp(std::ceil(b), 0.0, n));
    }
  }
  double x[2];
  for (std::size_t i0 = lo[0]; i0 < hi[0]; ++i0) {
    for (std::size_t i1 = lo[1]; i1 < hi[1]; ++i1) {
      const std::size_t idx = g.index(i0, i1);
      g.node_coords(idx, x);
      if (detail::member(region, dim, x)) fn(idx);
    }
  }
}

inline std::vector<std::size_t> nodes_in(const Grid& g, const Region& region) {
  std::vector<std::size_t> out;
  for_each_node(g, region, [&](std::size_t i) { out.push_back(i); });
  return out;
}

/// Node count of the region times h^dim.
inline double node_measure(const Grid& g, const Region& region) {
  std::size_t n = 0;
  for_each_node(g, region, [&](std::size_t) { ++n; });
  return static_cast<double>(n) * g.cell_volume();
}

/// Midpoint-rule integral of f over the nodes of the region.
inline double integrate(const GridFunction& f, const Region& region) {
  double s = 0.0;
  const auto v = f.values();
  for_each_node(f.grid(), region, [&](std::size_t i) { s += v[i]; });
  return s * f.grid().cell_volume();
}

/// f on the region, zero elsewhere.
inline GridFunction restrict(const GridFunction& f, const Region& region) {
  std::vector<double> v(f.size(), 0.0);
  const auto src = f.values();
  for_each_node(f.grid(), region, [&](std::size_t i) { v[i] = src[i]; });
  return GridFunction(f.grid(), std::move(v));
}

/// Pointwise (sum_j |f_j|^2)^{1/2}.
inline GridFunction l2_aggregate(const FunctionFamily& fam) {
  std::vector<double> v(fam.grid().size(), 0.0);
  for (const auto& f : fam) {
    const auto fv = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += fv[i] * fv[i];
  }
  for (double& x : v) x = std::sqrt(x);
  return GridFunction(fam.grid(), std::move(v));
}

// ---------------------------------------------------------------------------
// CSV serialization
//
//   # dim,h,origin_0[,origin_1],count_0[,count_1]
//   value            (one per node, row-major)

inline void write_csv(std::ostream& os, const GridFunction& f) {
  const Grid& g = f.grid();
  os << "# " << g.dim() << ',' << format_double(g.spacing());
  for (int k = 0; k < g.dim(); ++k) os << ',' << format_double(g.origin()[k]);
  for (int k = 0; k < g.dim(); ++k) os << ',' << g.counts()[k];
  os << '\n';
  for (double v : f.values()) os << format_double(v) << '\n';
}

inline GridFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
    throw std::invalid_argument("grid csv: missing '# dim,h,origin...,counts...' header");
  std::vector<std::string> fields;
  {
    std::stringstream ss(line.substr(2));
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
  }
  try {
    const int dim = std::stoi(fields.at(0));
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid csv: dim must be 1 or 2");
    if (fields.size() != static_cast<std::size_t>(2 + 2 * dim))
      throw std::invalid_argument("grid csv: malformed header");
    const double h = std::stod(fields[1]);
    std::array<double, 2> origin{0.0, 0.0};
    std::array<std::size_t, 2> counts{1, 1};
    for (int k = 0; k < dim; ++k) {
      origin[k] = std::stod(fields[2 + k]);
      counts[k] = std::stoul(fields[2 + dim + k]);
    }
    Grid g(dim, origin, h, counts);
    std::vector<double> v;
    v.reserve(g.size());
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      v.push_back(std::stod(line));
    }
    return GridFunction(g, std::move(v));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const std::invalid_argument*>(&e) && std::string(e.what()).rfind("grid csv", 0) == 0)
      throw;
    throw std::invalid_argument(std::string("grid csv: ") + e.what());
  }
}

inline void save_csv(const std::string& path, const GridFunction& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_csv(os, f);
  if (!os) throw IoError("write failed: " + path);
}

inline GridFunction load_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_csv(is);
}

}  // namespace sqfn
