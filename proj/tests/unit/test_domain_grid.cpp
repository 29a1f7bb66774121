#include "common.hpp"

using namespace fsgrowth;
using fsgrowth::testing::strip;

TEST(DomainGrid, CountsCellsAndInterfaceFaces) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  EXPECT_EQ(d.num_cells(), 256);
  EXPECT_EQ(d.interface_row.size(), 16u);
  EXPECT_EQ(d.outer_row.size(), 16u);
  EXPECT_DOUBLE_EQ(d.height(), 2.0);
  EXPECT_DOUBLE_EQ(d.dy, 0.125);
}

TEST(DomainGrid, DegenerateLayerIsRejected) {
  GeometryConfig g;
  g.h_f = 0.0;
  try {
    build_strip_domain(g);
    FAIL() << "expected a ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("h_f"), std::string::npos);
  }
  g = GeometryConfig{};
  g.ny_s = 2;
  EXPECT_THROW(build_strip_domain(g), ConfigError);
  g = GeometryConfig{};
  g.h_s = 2.0;  // spacing mismatch
  EXPECT_THROW(build_strip_domain(g), ConfigError);
}

TEST(DomainGrid, RefinedInterfaceFacesSitOnTheInterface) {
  const TwoPhaseDomain d = strip(32, 16, 16);
  int on_gamma = 0;
  for (int j = 0; j <= d.ny(); ++j)
    for (int i = 0; i < d.nx; ++i)
      if (std::abs(d.y_face(j) - d.h_f) < 1e-14) ++on_gamma;
  EXPECT_EQ(on_gamma, 32);
  for (int i : d.interface_row) EXPECT_NEAR(d.y_face(d.ny_f), d.h_f, 1e-14) << i;
  for (const Vec2& n : d.n_gamma) EXPECT_EQ(n, Vec2(0.0, 1.0));
}

TEST(DomainGrid, FieldRowsArePhaseRanged) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  ScalarField s(d, Staggering::Cell, Phase::Solid, 2.0);
  EXPECT_EQ(s.row_begin(), 4);
  EXPECT_EQ(s.row_end(), 8);
  EXPECT_THROW(s(0, 0), std::out_of_range);
  ScalarField uy(d, Staggering::YFace, Phase::Fluid);
  EXPECT_EQ(uy.row_end(), 5);
  s(-1, 5) = 7.0;
  EXPECT_EQ(s(7, 5), 7.0);
  ScalarField f(d, Staggering::Cell, Phase::Fluid);
  EXPECT_THROW(s += f, std::invalid_argument);
}

TEST(JumpAtInterface, ContinuousAndPiecewiseConstantFields) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  ScalarField f(d, Staggering::Cell, Phase::Both, 5.0);
  for (double j : jump_at_interface(d, f)) EXPECT_NEAR(j, 0.0, 1e-14);
  f.for_each([&](int, int j, double& v) { v = d.is_fluid_row(j) ? 1.0 : 3.0; });
  for (double j : jump_at_interface(d, f)) EXPECT_NEAR(j, 2.0, 1e-14);
  ScalarField fluid_only(d, Staggering::Cell, Phase::Fluid);
  EXPECT_THROW(jump_at_interface(d, fluid_only), ConfigError);
}

TEST(JumpAtInterface, LinearProfilesAreExact) {
  const TwoPhaseDomain d = strip(8, 8, 8);
  ScalarField f(d, Staggering::Cell, Phase::Both);
  sample(d, f, [&](double, double y) { return y < d.h_f ? y : 2.0 * y; });
  for (double j : jump_at_interface(d, f)) EXPECT_NEAR(j, 1.0, 1e-12);
}

TEST(JumpAtInterface, ExtrapolationOrderUnderRefinement) {
  const double exact = std::cos(1.0) + 1.0 - std::sin(1.0);
  std::vector<double> h, err;
  for (int n : {8, 16, 32}) {
    const TwoPhaseDomain d = strip(8, n, n);
    ScalarField f(d, Staggering::Cell, Phase::Both);
    sample(d, f, [&](double, double y) { return y < d.h_f ? std::sin(y) : std::cos(y) + 1.0; });
    h.push_back(d.dy);
    err.push_back(max_abs(jump_at_interface(d, f)) - exact);
    err.back() = std::abs(err.back());
  }
  EXPECT_GE(diag::loglog_slope(h, err), 1.8);
}

TEST(Compatibility, TrivialDataHaveZeroResiduals) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const PhysParams p;
  MacVelocity v(d);
  ScalarField c(d, Staggering::Cell, Phase::Both, 0.7);
  const CompatibilityReport r = check_compatibility(v, c, p, d);
  EXPECT_TRUE(r.pass());
  for (const auto& it : r.items) EXPECT_NEAR(it.residual, 0.0, 1e-13) << it.name;
}

TEST(Compatibility, RigidTranslationHasZeroResiduals) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const MacVelocity v = sample_velocity(d, [](double, double) { return 0.4; }, [](double, double) { return 0.0; });
  const ScalarField c(d, Staggering::Cell, Phase::Both);
  const CompatibilityReport r = check_compatibility(v, c, PhysParams{}, d);
  EXPECT_TRUE(r.pass());
  for (const auto& it : r.items) EXPECT_NEAR(it.residual, 0.0, 1e-13) << it.name;
}

TEST(Compatibility, ShearDiscontinuityIsMeasured) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const double a = 0.3;
  const MacVelocity v =
      sample_velocity(d, [&](double, double y) { return y < d.h_f ? 0.0 : a; }, [](double, double) { return 0.0; });
  const CompatibilityReport r = check_compatibility(v, ScalarField(d, Staggering::Cell, Phase::Both), PhysParams{}, d);
  EXPECT_NEAR(r.at("velocity_jump").residual, a, 1e-13);
  EXPECT_FALSE(r.pass());
  EXPECT_THROW(r.at("no_such_item"), ConfigError);
}

TEST(Compatibility, ConcentrationJumpViolatesRobinCondition) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  ScalarField c(d, Staggering::Cell, Phase::Both);
  c.for_each([&](int, int j, double& v) { v = d.is_fluid_row(j) ? 1.0 : 0.0; });
  PhysParams p;
  p.zeta = 2.0;
  const CompatibilityReport r = check_compatibility(MacVelocity(d), c, p, d);
  EXPECT_NEAR(r.at("robin_interface").residual, 2.0, 1e-13);
  EXPECT_NEAR(r.at("flux_jump").residual, 0.0, 1e-13);
}

TEST(Compatibility, PresetBumpIsCompatibleWhenResolved) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  for (const auto& name : preset_names()) {
    const InitialData w0 = preset_initial_data(d, name);
    EXPECT_TRUE(check_compatibility(w0, PhysParams{}, d).pass()) << name;
  }
  EXPECT_THROW(preset_initial_data(d, "nope"), ConfigError);
}
