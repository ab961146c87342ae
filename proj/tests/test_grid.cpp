#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sqfn/grid.hpp"

using namespace sqfn;

namespace {

GridFunction random_function(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(g.size());
  for (double& x : v) x = u(rng);
  return GridFunction(g, std::move(v));
}

}  // namespace

TEST(Grid, RejectsBadShape) {
  EXPECT_THROW(Grid(3, {0, 0}, 0.1, {4, 4}), std::invalid_argument);
  EXPECT_THROW(Grid(1, {0, 0}, 0.0, {4, 1}), std::invalid_argument);
  EXPECT_THROW(Grid(1, {0, 0}, 0.1, {1, 1}), std::invalid_argument);
  EXPECT_THROW(Grid(2, {0, 0}, 0.1, {4, 1}), std::invalid_argument);
}

TEST(Grid, CellCenteredWindow) {
  const Grid g = Grid::cell_centered(1, -4.0, 4.0, 0.05);
  EXPECT_EQ(g.size(), 160u);
  EXPECT_DOUBLE_EQ(g.node(0)[0], -3.975);
  EXPECT_NEAR(g.window_lo(0), -4.0, 1e-12);
  EXPECT_NEAR(g.window_hi(0), 4.0, 1e-12);
  EXPECT_NEAR(g.window_radius(), 4.0, 1e-12);
  const Grid r = g.refined();
  EXPECT_EQ(r.size(), 320u);
  EXPECT_NEAR(r.window_lo(0), -4.0, 1e-12);
  EXPECT_NEAR(r.window_hi(0), 4.0, 1e-12);
}

TEST(Grid, FunctionValuesMustBeFinite) {
  const Grid g = Grid::nodal(1, 0.0, 1.0, 0.5);
  EXPECT_THROW(GridFunction(g, {0.0, NAN, 1.0}), std::invalid_argument);
  EXPECT_THROW(GridFunction(g, {0.0, 1.0}), std::invalid_argument);
}

TEST(Grid, FamilyNeedsSharedGrid) {
  const Grid a = Grid::nodal(1, 0.0, 1.0, 0.5), b = Grid::nodal(1, 0.0, 1.0, 0.25);
  EXPECT_THROW(FunctionFamily({}), std::invalid_argument);
  EXPECT_THROW(FunctionFamily({GridFunction::zeros(a), GridFunction::zeros(b)}), std::invalid_argument);
}

TEST(BallDilate, Examples) {
  const Ball b(Point(0.0), 1.0);
  EXPECT_EQ(ball_dilate(b, 2.0).radius, 2.0);
  EXPECT_EQ(ball_dilate(b, 1.0).radius, 1.0);
  EXPECT_EQ(ball_dilate(b, 1.0).center, b.center);
  const Ball c = ball_dilate(Ball(Point(3.0), 0.5), std::ldexp(1.0, 3));
  EXPECT_EQ(c.center[0], 3.0);
  EXPECT_EQ(c.radius, 4.0);
  EXPECT_THROW(ball_dilate(b, 0.0), std::invalid_argument);
  EXPECT_THROW(ball_dilate(b, -1.0), std::invalid_argument);
}

TEST(BallDilate, ComposesMultiplicatively) {
  const Ball b(Point(0.3, -0.2), 0.75);
  for (double a : {0.5, 2.0, 3.0})
    for (double c : {0.25, 2.0, 4.0})
      EXPECT_DOUBLE_EQ(ball_dilate(ball_dilate(b, a), c).radius, ball_dilate(b, a * c).radius);
}

TEST(Membership, Examples) {
  EXPECT_TRUE(membership(Point(0.0), Ball(Point(0.0), 1.0)));
  EXPECT_FALSE(membership(Point(1.0), Ball(Point(0.0), 1.0)));
  EXPECT_FALSE(membership(Point(0.6, 0.8), Ball(Point(0.0, 0.0), 1.0)));
  const Ball b(Point(1.0), 0.5);
  EXPECT_TRUE(membership(Point(1.0 + 3 * 0.5), Annulus(b, 1)));
  EXPECT_FALSE(membership(Point(1.0 + 0.9), Annulus(b, 1)));
  EXPECT_FALSE(membership(Point(1.0 + 2.0), Annulus(b, 1)));
  EXPECT_TRUE(membership(Point(5.0), Complement{b}));
  EXPECT_TRUE(membership(Point(5.0), WholeGrid{}));
  EXPECT_THROW(membership(Point(0.0, 0.0), Ball(Point(0.0), 1.0)), std::invalid_argument);
}

TEST(Integrate, Examples) {
  const Grid g = Grid::nodal(1, -2.0, 2.0, 0.1);
  const GridFunction one = GridFunction::constant(g, 1.0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i) count += std::abs(g.node(i)[0]) < 1.0;
  EXPECT_DOUBLE_EQ(integrate(one, Ball(Point(0.0), 1.0)), static_cast<double>(count) * 0.1);
  EXPECT_NEAR(integrate(one, Ball(Point(0.0), 1.0)), 2.0, 0.1);
  EXPECT_EQ(integrate(GridFunction::zeros(g), Ball(Point(0.5), 0.7)), 0.0);

  const Grid f = Grid::cell_centered(1, -1.0, 1.0, 0.01);
  const GridFunction sq = GridFunction::sample(f, [](const Point& x) { return x[0] * x[0]; });
  EXPECT_NEAR(integrate(sq, Ball(Point(0.0), 1.0)), 2.0 / 3.0, 1e-3);
}

TEST(Integrate, AdditiveOverDyadicShells) {
  std::mt19937_64 rng(3);
  for (int dim : {1, 2}) {
    const Grid g = Grid::cell_centered(dim, -4.0, 4.0, dim == 1 ? 0.01 : 0.1);
    const GridFunction f = random_function(g, rng);
    const Ball b(dim == 1 ? Point(0.13) : Point(0.13, -0.2), 0.4);
    for (int ell = 1; ell <= 3; ++ell) {
      const double outer = integrate(f, ball_dilate(b, std::ldexp(1.0, ell + 1)));
      const double inner = integrate(f, ball_dilate(b, std::ldexp(1.0, ell)));
      const double shell = integrate(f, Annulus(b, ell));
      // Same node partition, so the sums agree up to the order of additions.
      EXPECT_NEAR(outer, inner + shell, 1e-12 * (std::abs(outer) + 1.0));
    }
  }
}

TEST(Restrict, Examples) {
  const Grid g = Grid::cell_centered(1, -4.0, 4.0, 0.01);
  const GridFunction one = GridFunction::constant(g, 1.0);
  const auto same = restrict(one, WholeGrid{});
  EXPECT_TRUE(std::equal(same.values().begin(), same.values().end(), one.values().begin()));
  EXPECT_TRUE(restrict(one, Ball(Point(10.0), 1.0)).is_zero());
  EXPECT_NEAR(integrate(restrict(one, Ball(Point(0.0), 1.0)), WholeGrid{}), 2.0, 1e-9);
}

TEST(Restrict, PartitionAndIdempotence) {
  std::mt19937_64 rng(4);
  const Grid g = Grid::cell_centered(2, -2.0, 2.0, 0.1);
  const GridFunction f = random_function(g, rng);
  const Ball b(Point(0.3, 0.1), 0.9);
  const GridFunction in = restrict(f, b), out = restrict(f, Complement{b});
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(in[i] + out[i], f[i]);
  const GridFunction twice = restrict(in, b);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(twice[i], in[i]);
}

TEST(L2Aggregate, Examples) {
  std::mt19937_64 rng(5);
  const Grid g = Grid::cell_centered(1, -1.0, 1.0, 0.05);
  const GridFunction f = random_function(g, rng);
  const GridFunction single = l2_aggregate(FunctionFamily({f}));
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(single[i], std::abs(f[i]));

  const GridFunction pos = GridFunction::sample(g, [](const Point& x) { return 1.0 + x[0] * x[0]; });
  const GridFunction five = l2_aggregate(FunctionFamily({pos.scaled(3.0), pos.scaled(4.0)}));
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(five[i], 5.0 * pos[i], 1e-15 * pos[i] * 5.0);

  std::vector<GridFunction> members;
  for (int j = 0; j < 5; ++j) members.push_back(random_function(g, rng));
  const FunctionFamily fam(members);
  const GridFunction agg = l2_aggregate(fam);
  for (std::size_t i = 0; i < agg.size(); ++i)
    for (const auto& m : fam) EXPECT_GE(agg[i], std::abs(m[i]));

  for (double c : {-3.0, 0.5, 2.0}) {
    const GridFunction scaled = l2_aggregate(fam.scaled(c));
    for (std::size_t i = 0; i < agg.size(); ++i) EXPECT_NEAR(scaled[i], std::abs(c) * agg[i], 1e-15 * scaled[i]);
  }
}

TEST(Csv, RoundTripIsExact) {
  std::mt19937_64 rng(6);
  for (int dim : {1, 2}) {
    const Grid g = Grid::cell_centered(dim, -1.0, 1.0, 0.1);
    const GridFunction f = random_function(g, rng);
    std::stringstream ss;
    write_csv(ss, f);
    const GridFunction back = read_csv(ss);
    EXPECT_TRUE(back.grid() == g);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(back[i], f[i]);
  }
}

TEST(Csv, RejectsMalformedInput) {
  std::stringstream no_header("1\n2\n");
  EXPECT_THROW(read_csv(no_header), std::invalid_argument);
  std::stringstream short_body("# 1,0.5,0,3\n1\n2\n");
  EXPECT_THROW(read_csv(short_body), std::invalid_argument);
  EXPECT_THROW(load_csv("/nonexistent/f.csv"), IoError);
}
