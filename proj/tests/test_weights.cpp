#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sqfn/weights.hpp"

using namespace sqfn;

namespace {

Weight random_weight(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::vector<double> v(g.size());
  for (double& x : v) x = u(rng);
  return Weight(GridFunction(g, std::move(v)));
}

}  // namespace

TEST(Weight, FloorIsApplied) {
  const Grid g = Grid::nodal(1, -1.0, 1.0, 0.5);
  const Weight w(GridFunction(g, {0.0, -1.0, 2.0, 1e-20, 3.0}), 1e-6);
  EXPECT_EQ(w.density()[0], 1e-6);
  EXPECT_EQ(w.density()[1], 1e-6);
  EXPECT_EQ(w.density()[2], 2.0);
  EXPECT_EQ(w.density()[3], 1e-6);
  EXPECT_THROW(Weight(GridFunction::zeros(g), 0.0), std::invalid_argument);
}

TEST(PowerWeight, Examples) {
  const Grid g = Grid::nodal(1, -4.0, 4.0, 0.5);
  const Weight flat = power_weight(0.0, g);
  for (double v : flat.density().values()) EXPECT_EQ(v, 1.0);
  const Weight sq = power_weight(0.5, g);
  EXPECT_EQ(sq.density()[g.size() - 1], 2.0);  // x = 4
  EXPECT_EQ(sq.density()[g.size() / 2], kDefaultWeightFloor);  // x = 0
}

TEST(WeightedMeasure, Examples) {
  const Grid g = Grid::cell_centered(1, -2.0, 2.0, 0.01);
  const Weight one = Weight::constant(g);
  EXPECT_DOUBLE_EQ(weighted_measure(one, Ball(Point(0.3), 0.5)), node_measure(g, Ball(Point(0.3), 0.5)));
  EXPECT_EQ(weighted_measure(one, Ball(Point(10.0), 0.5)), 0.0);

  const Grid h = Grid::cell_centered(1, 0.0, 2.0, 0.001);
  EXPECT_NEAR(weighted_measure(power_weight(0.5, h), Ball(Point(1.0), 1.0)), 2.0 / 3.0 * std::pow(2.0, 1.5), 1e-2);
}

TEST(WeightedMeasure, MonotoneInRegion) {
  std::mt19937_64 rng(11);
  const Grid g = Grid::cell_centered(2, -2.0, 2.0, 0.1);
  const Weight w = random_weight(g, rng);
  double prev = 0.0;
  for (double r : {0.1, 0.3, 0.7, 1.2, 1.9}) {
    const double m = weighted_measure(w, Ball(Point(0.1, 0.2), r));
    EXPECT_GE(m, prev);
    prev = m;
  }
}

TEST(BallFamily, Construction) {
  const Grid g = Grid::cell_centered(1, -4.0, 4.0, 0.05);
  EXPECT_THROW(BallFamily(g, {}, "none"), std::invalid_argument);
  EXPECT_THROW(BallFamily(g, {Ball(Point(10.0), 0.1)}, "outside"), std::invalid_argument);
  const BallFamily c = BallFamily::centered(g, Point(0.0), 0.25, 4);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[3].radius, 2.0);
  const BallFamily l = parse_ball_family(g, "lattice:0.5:0.25:4");
  for (const auto& b : l) {
    EXPECT_GE(b.center[0] - b.radius, -4.0 - 1e-12);
    EXPECT_LE(b.center[0] + b.radius, 4.0 + 1e-12);
  }
  const BallFamily lr = parse_ball_family(g.refined(), "lattice:0.5:0.25:4");
  ASSERT_EQ(lr.size(), l.size());
  for (std::size_t i = 0; i < l.size(); ++i) EXPECT_EQ(lr[i].center, l[i].center);
  EXPECT_THROW(parse_ball_family(g, "spiral:1"), std::invalid_argument);
  EXPECT_THROW(parse_ball_family(g, "centered:0,0:1:2"), std::invalid_argument);
}

TEST(ApCharacteristic, ConstantWeightIsExactlyOne) {
  for (int dim : {1, 2}) {
    const Grid g = Grid::cell_centered(dim, -2.0, 2.0, dim == 1 ? 0.01 : 0.1);
    const BallFamily balls = parse_ball_family(g, "lattice:0.5:0.25:3");
    for (double c : {1.0, 0.37, 12.5}) {
      for (double p : {1.5, 2.0, 3.0}) {
        const Characteristic ch = ap_characteristic(Weight::constant(g, c), p, balls);
        EXPECT_EQ(ch.value, 1.0);
        EXPECT_EQ(ch.ball_index, 0u);
      }
    }
  }
}

TEST(ApCharacteristic, ScaleInvariant) {
  std::mt19937_64 rng(12);
  const Grid g = Grid::cell_centered(1, -2.0, 2.0, 0.05);
  const BallFamily balls = parse_ball_family(g, "lattice:0.5:0.25:3");
  const Weight w = random_weight(g, rng);
  const double base = ap_characteristic(w, 2.0, balls).value;
  // Scaling by a power of two leaves every normalized value bit-identical.
  EXPECT_EQ(ap_characteristic(w.scaled(8.0), 2.0, balls).value, base);
  EXPECT_NEAR(ap_characteristic(w.scaled(3.7), 2.0, balls).value, base, 1e-12 * base);
  EXPECT_THROW(ap_characteristic(w, 1.0, balls), std::invalid_argument);
}

TEST(ApCharacteristic, PowerWeightRefinementStable) {
  const Grid g = Grid::cell_centered(1, -4.0, 4.0, 0.01);
  const double coarse =
      ap_characteristic(power_weight(0.5, g), 2.0, BallFamily::centered(g, Point(0.0), 0.125, 5)).value;
  const Grid r = g.refined();
  const double fine =
      ap_characteristic(power_weight(0.5, r), 2.0, BallFamily::centered(r, Point(0.0), 0.125, 5)).value;
  EXPECT_TRUE(std::isfinite(coarse));
  EXPECT_GE(coarse, 1.0);
  EXPECT_NEAR(fine, coarse, 0.1 * coarse);
}

TEST(A1Characteristic, Examples) {
  const Grid g = Grid::cell_centered(1, -1.0, 1.0, 0.1);
  const BallFamily whole(g, {Ball(Point(0.0), 1.0)}, "one");
  EXPECT_EQ(a1_characteristic(Weight::constant(g), whole).value, 1.0);
  const Weight two(GridFunction::sample(g, [](const Point& x) { return x[0] < 0.0 ? 1.0 : 2.0; }));
  EXPECT_DOUBLE_EQ(a1_characteristic(two, whole).value, 1.5);
}

TEST(A1Characteristic, DominatesA2AndIsAtLeastOne) {
  std::mt19937_64 rng(13);
  const Grid g = Grid::cell_centered(1, -2.0, 2.0, 0.05);
  const BallFamily balls = parse_ball_family(g, "lattice:0.5:0.25:3");
  for (int k = 0; k < 20; ++k) {
    const Weight w = random_weight(g, rng);
    const double a1 = a1_characteristic(w, balls).value;
    EXPECT_GE(a1, 1.0);
    EXPECT_GE(a1, ap_characteristic(w, 2.0, balls).value);
  }
}

TEST(DoublingRatio, LebesgueAndPower) {
  const Grid g1 = Grid::cell_centered(1, -4.0, 4.0, 0.01);
  EXPECT_NEAR(doubling_ratio(Weight::constant(g1), BallFamily(g1, {Ball(Point(0.1), 0.5)}, "b")).value, 2.0, 0.04);
  const Grid g2 = Grid::cell_centered(2, -4.0, 4.0, 0.05);
  EXPECT_NEAR(doubling_ratio(Weight::constant(g2), BallFamily(g2, {Ball(Point(0.0, 0.0), 1.0)}, "b")).value, 4.0,
              0.08);
  const BallFamily centered = BallFamily::centered(g1, Point(0.0), 0.25, 3);
  EXPECT_NEAR(doubling_ratio(power_weight(0.5, g1), centered).value, std::pow(2.0, 1.5), 0.02 * std::pow(2.0, 1.5));
}

TEST(AInftyFit, Examples) {
  const Grid g = Grid::cell_centered(1, -2.0, 2.0, 0.01);
  const Ball b(Point(0.0), 1.0);
  std::vector<SubsetPair> pairs{{b, Ball(Point(0.0), 0.5)}, {b, Ball(Point(0.5), 0.25)}, {b, Ball(Point(-0.2), 0.1)}};
  const AInftyFit flat = ainfty_fit(Weight::constant(g), pairs);
  EXPECT_EQ(flat.delta_fit, 1.0);
  EXPECT_NEAR(flat.c_fit, 1.0, 1e-12);

  const std::vector<SubsetPair> self{{b, b}};
  const AInftyFit same = ainfty_fit(power_weight(0.5, g), self);
  EXPECT_EQ(same.delta_fit, 1.0);
  EXPECT_NEAR(same.c_fit, 1.0, 1e-12);

  EXPECT_THROW(ainfty_fit(Weight::constant(g), std::vector<SubsetPair>{}), std::invalid_argument);
  const std::vector<SubsetPair> bad{{Ball(Point(0.0), 0.2), Ball(Point(0.5), 0.2)}};
  EXPECT_THROW(ainfty_fit(Weight::constant(g), bad), std::invalid_argument);
}

TEST(AInftyFit, SatisfiesItsOwnInequality) {
  const Grid g = Grid::cell_centered(1, -2.0, 2.0, 0.01);
  const Weight w = power_weight(0.5, g);
  std::vector<SubsetPair> pairs;
  for (double r : {1.0, 0.5, 0.25})
    for (double s : {0.5, 0.25, 0.125}) pairs.push_back({Ball(Point(0.0), r), Ball(Point(0.0), r * s)});
  const AInftyFit fit = ainfty_fit(w, pairs);
  EXPECT_GT(fit.delta_fit, 0.0);
  EXPECT_LE(fit.delta_fit, 1.0);
  EXPECT_FALSE(fit.capped);
  EXPECT_GE(fit.residual, -1e-12);
  for (const auto& pr : pairs) {
    const double lhs = weighted_measure(w, pr.subset) / weighted_measure(w, pr.ball);
    const double ratio = node_measure(g, pr.subset) / node_measure(g, pr.ball);
    EXPECT_LE(lhs, fit.c_fit * std::pow(ratio, fit.delta_fit) * (1.0 + 1e-12));
  }
}

TEST(HlMaximal, Examples) {
  const Grid g = Grid::cell_centered(1, -2.0, 2.0, 0.1);
  const auto radii = default_maximal_radii(g);
  const Weight c = Weight::constant(g, 2.5);
  for (std::size_t i = 0; i < g.size(); i += 7) EXPECT_EQ(hl_maximal(c, g.node(i), radii), 2.5);
  const Weight one = Weight::constant(g);
  const GridFunction m = hl_maximal_field(one, radii);
  for (double v : m.values()) EXPECT_EQ(v, 1.0);
}

TEST(HlMaximal, SpikeDecaysWithDistance) {
  const Grid g = Grid::nodal(1, 0.0, 4.0, 1.0);  // 5 nodes
  const Weight spike(GridFunction(g, {0.0, 0.0, 10.0, 0.0, 0.0}), 1e-12);
  const std::vector<double> radii{0.5, 1.5, 2.5, 3.5, 4.5};
  // Smallest ball around node 2 holds only the spike.
  EXPECT_NEAR(hl_maximal(spike, Point(2.0), radii), 10.0, 1e-9);
  // From node 1: B(1,1.5) holds nodes 0..2, average 10/3.
  EXPECT_NEAR(hl_maximal(spike, Point(1.0), radii), 10.0 / 3.0, 1e-9);
  // From node 0: B(0,2.5) holds nodes 0..2 (10/3); B(0,3.5) 0..3 (2.5).
  EXPECT_NEAR(hl_maximal(spike, Point(0.0), radii), 10.0 / 3.0, 1e-9);
  EXPECT_GT(hl_maximal(spike, Point(1.0), radii), hl_maximal(spike, Point(0.0), std::vector<double>{0.5, 1.5}));
}

TEST(HlMaximal, MonotoneInLadder) {
  std::mt19937_64 rng(14);
  const Grid g = Grid::cell_centered(2, -1.0, 1.0, 0.1);
  const Weight w = random_weight(g, rng);
  const std::vector<double> small{0.1, 0.2}, big{0.1, 0.2, 0.4, 0.8};
  for (std::size_t i = 0; i < g.size(); i += 13)
    EXPECT_GE(hl_maximal(w, g.node(i), big), hl_maximal(w, g.node(i), small));
}
