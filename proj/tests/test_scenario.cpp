#include <gtest/gtest.h>

#include <sstream>

#include "sqfn/scenario.hpp"

using namespace sqfn;

TEST(ScenarioConfig, ParsesKeyValueLines) {
  std::istringstream is("# comment\nseed = 42\n\n  dim=1  # trailing\nweight = power:0.5\n");
  const ScenarioConfig c = ScenarioConfig::parse(is);
  EXPECT_EQ(c.get("seed", ""), "42");
  EXPECT_EQ(c.number("dim", 0), 1.0);
  EXPECT_EQ(c.get("weight", ""), "power:0.5");
  EXPECT_FALSE(c.has("phi"));
  EXPECT_EQ(c.get("phi", "none"), "none");
  EXPECT_EQ(c.canonical(), "dim=1;seed=42;weight=power:0.5");
}

TEST(ScenarioConfig, RejectsBadInput) {
  std::istringstream unknown("colour = red\n");
  EXPECT_THROW(ScenarioConfig::parse(unknown), std::invalid_argument);
  std::istringstream no_eq("seed 42\n");
  EXPECT_THROW(ScenarioConfig::parse(no_eq), std::invalid_argument);
  ScenarioConfig c;
  EXPECT_THROW(c.set("colour", "red"), std::invalid_argument);
  c.set("p", "2x");
  EXPECT_THROW(c.number("p", 0.0), std::invalid_argument);
  EXPECT_THROW(ScenarioConfig::load("/nonexistent/x.scn"), IoError);
}

TEST(SeededRng, ReproducibleAndInRange) {
  SeededRng a(7), b(7);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_LT(a.below(5), 5u);
    b.below(5);
  }
}

TEST(RandomBumps, RespectsMemberBounds) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto fam = random_bumps(seed, 1, 0, 3.0);
    EXPECT_GE(fam.size(), 1u);
    EXPECT_LE(fam.size(), 5u);
    for (const auto& m : fam) {
      EXPECT_GE(m.size(), 1u);
      EXPECT_LE(m.size(), 3u);
    }
  }
  EXPECT_EQ(random_bumps(1, 2, 4, 1.5).size(), 4u);
}

TEST(BuildScenario, DefaultsAndFingerprint) {
  const ScenarioConfig c{{"seed", "42"}, {"members", "3"}, {"weight", "power:0.5"}, {"phi", "power:0.5"}};
  const Scenario s = build_scenario(c);
  EXPECT_EQ(s.grid.size(), 160u);
  EXPECT_EQ(s.family.size(), 3u);
  ASSERT_TRUE(s.weight.has_value());
  ASSERT_TRUE(s.growth.has_value());
  EXPECT_DOUBLE_EQ(s.intrinsic.cone.t_min(), 0.05);
  EXPECT_NEAR(s.intrinsic.cone.t_max(), 16.0, 1e-12);
  EXPECT_EQ(s.params.p, 2.0);
  EXPECT_EQ(s.params.kappa, 0.3);
  for (const auto& x : s.sample_points) EXPECT_TRUE(membership(x, s.ball));
  EXPECT_EQ(s.fingerprint, build_scenario(c).fingerprint);
  EXPECT_NE(s.fingerprint.find("seed=42"), std::string::npos);
  for (std::size_t j = 0; j < s.family.size(); ++j)
    for (std::size_t i = 0; i < s.grid.size(); ++i) EXPECT_EQ(s.family[j][i], build_scenario(c).family[j][i]);
}

TEST(BuildScenario, RefinementLadder) {
  const ScenarioConfig c{{"seed", "3"}, {"members", "2"}};
  const Scenario a = build_scenario(c), b = build_scenario(c, 1);
  EXPECT_EQ(b.grid.size(), 2 * a.grid.size());
  EXPECT_DOUBLE_EQ(b.grid.spacing(), 0.5 * a.grid.spacing());
  EXPECT_DOUBLE_EQ(b.intrinsic.cone.rho() - 1.0, 0.5 * (a.intrinsic.cone.rho() - 1.0));
  EXPECT_EQ(a.balls.size(), b.balls.size());
  EXPECT_NE(a.fingerprint, b.fingerprint);
}

TEST(BuildScenario, TwoDimensionalSampling) {
  const ScenarioConfig c{{"seed", "9"}, {"dim", "2"}, {"window", "2"}, {"h", "0.05"}, {"ball", "0,0,1"}, {"members", "1"}};
  const Scenario s = build_scenario(c);
  EXPECT_EQ(s.sample_points.size(), 256u);
  for (const auto& x : s.sample_points) EXPECT_TRUE(membership(x, s.ball));
}

TEST(BuildScenario, RejectsBadValues) {
  EXPECT_THROW(build_scenario({{"dim", "3"}}), std::invalid_argument);
  EXPECT_THROW(build_scenario({{"members", "9"}}), std::invalid_argument);
  EXPECT_THROW(build_scenario({{"weight", "bogus"}}), std::invalid_argument);
  EXPECT_THROW(build_scenario({{"ball", "0"}}), std::invalid_argument);
  EXPECT_THROW(build_scenario({{"samples", "some"}}), std::invalid_argument);
  EXPECT_THROW(build_scenario({{"family", "/nonexistent/f.csv"}}), IoError);
}

TEST(Scenario, ScaledAndWithFamily) {
  const Scenario s = build_scenario({{"seed", "5"}, {"members", "2"}});
  const Scenario t = s.scaled(10.0);
  for (std::size_t i = 0; i < s.grid.size(); ++i) EXPECT_EQ(t.family[1][i], 10.0 * s.family[1][i]);
  const Scenario z = s.with_family(FunctionFamily({GridFunction::zeros(s.grid)}));
  EXPECT_TRUE(z.family.is_zero());
  EXPECT_EQ(z.fingerprint, s.fingerprint);
}
