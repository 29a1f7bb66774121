#include "common.hpp"

using namespace fsgrowth;
using fsgrowth::testing::strip;

namespace {

DriverConfig small_config() {
  DriverConfig c;
  c.dt = 0.01;
  c.window = 0.1;
  c.M_q = 1.0;
  return c;
}

PhysParams small_params() {
  PhysParams p;
  p.zeta = 0.1;
  return p;
}

double max_level_diff(const LevelState& a, const LevelState& b) {
  LevelState d = a;
  d -= b;
  return max_abs(d);
}

}  // namespace

TEST(DriverConfig, Validation) {
  DriverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tol = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DriverConfig{};
  c.window = 0.001;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DriverConfig{};
  c.norms.q = 3.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(PicardStep, TrivialStateIsAFixedPoint) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const PhysParams p;
  const LinearBlock lin(d, p, 0.05);
  const WindowStart s = initial_window_start(d, InitialData(d));
  const StateW w = constant_extension(s, 4, 0.05);
  const StateW n = picard_step(w, s, lin, 1.0);
  ASSERT_EQ(n.size(), w.size());
  for (std::size_t m = 0; m < n.size(); ++m) EXPECT_LE(max_level_diff(n.levels[m], w.levels[m]), 1e-12) << m;
}

TEST(PicardStep, UniformConcentrationReducedModel) {
  // from the trivial iterate all nonlinear data vanish, so c stays c0, the
  // solid dilates at rate gamma beta c0 / rho_s and the ODEs step explicitly
  const TwoPhaseDomain d = strip(8, 4, 4);
  const PhysParams p = mms::contrast_params();
  const double c0 = 0.2, dt = 0.05;
  InitialData w0(d);
  w0.c0.for_each([&](int, int, double& v) { v = c0; });
  const WindowStart s = initial_window_start(d, w0);
  StateW trivial = constant_extension(initial_window_start(d, InitialData(d)), 4, dt);
  const LinearBlock lin(d, p, dt);
  const StateW n = picard_step(trivial, s, lin, 1.0);
  for (std::size_t m = 0; m < n.size(); ++m) {
    const LevelState& l = n.levels[m];
    l.c.for_each([&](int, int, const double& v) { EXPECT_NEAR(v, c0, 1e-12); });
    l.cstar.for_each([&](int, int, const double& v) { EXPECT_NEAR(v, m * dt * p.beta * c0, 1e-12); });
    l.g.for_each([&](int, int, const double& v) { EXPECT_NEAR(v, 1.0 + m * dt * p.metric_rate() * c0, 1e-12); });
    if (m == 0) continue;
    divergence(d, l.v).for_each([&](int, int j, const double& v) {
      EXPECT_NEAR(v, d.is_fluid_row(j) ? 0.0 : p.growth_rate() * c0, 1e-10);
    });
    // uniform in x
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 1; i < d.nx; ++i) EXPECT_NEAR(l.v.uy(i, j), l.v.uy(0, j), 1e-10);
  }
}

TEST(PicardStep, ResidualDecreasesFromRandomIterate) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  const PhysParams p = small_params();
  const InitialData w0 = preset_initial_data(d, "small-data");
  const WindowStart s = initial_window_start(d, w0);
  std::mt19937_64 rng(5);
  const StateW w = diag::random_smooth_iterate(d, w0, 0.05, 5, rng, 0.05);
  const LinearBlock lin(d, p, 0.01);
  const StateW a = picard_step(w, s, lin, 1.0);
  const StateW b = picard_step(a, s, lin, 1.0);
  const StateW c = picard_step(b, s, lin, 1.0);
  const NormSpec spec;
  const double r1 = picard_residual(a, w, spec, d), r2 = picard_residual(b, a, spec, d), r3 = picard_residual(c, b, spec, d);
  EXPECT_LT(r2, r1);
  EXPECT_LT(r3, r2);
}

TEST(PicardStep, RejectsMismatchedTimeStep) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const LinearBlock lin(d, PhysParams{}, 0.05);
  const WindowStart s = initial_window_start(d, InitialData(d));
  EXPECT_THROW(picard_step(constant_extension(s, 4, 0.1), s, lin, 1.0), ConfigError);
  EXPECT_THROW(picard_step(constant_extension(s, 0, 0.05), s, lin, 1.0), ConfigError);
}

TEST(RunWindow, ZeroDataConvergeInOneIteration) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const WindowResult r = run_window(InitialData(d), 0.1, small_config(), PhysParams{}, d);
  EXPECT_TRUE(r.report.accepted);
  EXPECT_EQ(r.report.iterates, 1);
  EXPECT_EQ(r.report.halvings, 0);
  for (const auto& l : r.w.levels) EXPECT_LE(max_level_diff(l, LevelState(d)), 1e-12);
}

TEST(RunWindow, SmallDataPresetConvergesQuickly) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  const PhysParams p = small_params();
  const DriverConfig cfg = small_config();
  const InitialData w0 = preset_initial_data(d, "small-data");
  const WindowResult r = run_window(w0, 0.1, cfg, p, d);
  EXPECT_TRUE(r.report.accepted);
  EXPECT_LE(r.report.iterates, 8);
  EXPECT_TRUE(r.report.monotone);
  EXPECT_LE(r.report.residual_history.back(), cfg.tol);
  EXPECT_LT(r.report.contraction_estimate, 1.0);
  const ConstraintAudit a = divergence_constraint_audit(r.w, identity_tensor_field(d), cfg.M_q, cfg, p, d);
  EXPECT_LE(a.fluid, 10.0 * cfg.tol);
  EXPECT_LE(a.solid, 10.0 * cfg.tol);
  // velocity continuity and the symmetry condition at the final level
  const MacVelocity& v = r.w.back().v;
  EXPECT_LE(max_abs(jump_at_interface(d, v.ux)), 1e-6);
  for (int i = 0; i < d.nx; ++i) EXPECT_EQ(v.uy(i, 0), 0.0);
}

TEST(RunWindow, GrowthFloorViolationHalvesTheWindow) {
  // c = -1 is a rest point of the solid reaction term, so g decays like
  // exp(-beta t / 2) and crosses the working floor before t = 0.4
  fsgrowth::testing::QuietWarnings quiet;
  const TwoPhaseDomain d = strip(8, 4, 4);
  PhysParams p;
  p.beta = 3.0;
  InitialData w0(d);
  w0.c0.for_each([](int, int, double& v) { v = -1.0; });
  DriverConfig cfg = small_config();
  cfg.window = 0.4;
  cfg.max_iter = 40;
  const LinearBlock lin(d, p, cfg.dt);
  const WindowStart s = initial_window_start(d, w0);
  WindowResult first;
  EXPECT_FALSE(detail::attempt_window(s, 40, lin, cfg, cfg.M_q, nullptr, first));
  EXPECT_NE(first.report.message.find("growth metric"), std::string::npos) << first.report.message;
  const WindowResult r = run_window(s, 0.4, lin, cfg, cfg.M_q);
  EXPECT_TRUE(r.report.accepted);
  EXPECT_GE(r.report.halvings, 1);
  EXPECT_LT(r.report.t_b, 0.4);
  for (const auto& l : r.w.levels)
    for (double g : l.g.values()) EXPECT_GE(g, kGrowthFloor);
}

TEST(RunWindow, ExhaustedHalvingsRaiseSolverError) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  DriverConfig cfg = small_config();
  cfg.max_iter = 1;
  cfg.max_halvings = 0;
  EXPECT_THROW(run_window(preset_initial_data(d, "small-data"), 0.1, cfg, small_params(), d), SolverError);
}

TEST(RunWindow, UniquenessSurrogate) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  const PhysParams p = small_params();
  const DriverConfig cfg = small_config();
  const InitialData w0 = preset_initial_data(d, "small-data");
  const LinearBlock lin(d, p, cfg.dt);
  const WindowStart s = initial_window_start(d, w0);
  const WindowResult a = run_window(s, 0.1, lin, cfg, cfg.M_q);
  StateW perturbed = constant_extension(s, 10, cfg.dt);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1e-6, 1e-6);
  for (std::size_t m = 1; m < perturbed.size(); ++m) {
    perturbed.levels[m].c.for_each([&](int, int, double& v) { v += U(rng); });
    perturbed.levels[m].v.ux.for_each([&](int, int, double& v) { v += U(rng); });
  }
  const WindowResult b = run_window(s, 0.1, lin, cfg, cfg.M_q, &perturbed);
  EXPECT_LE(picard_residual(a.w, b.w, cfg.norms, d), 10.0 * cfg.tol);
}

TEST(Continuation, ZeroDataGiveTrivialTrajectory) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const Trajectory tr = run_continuation(InitialData(d), 0.2, small_config(), PhysParams{}, d);
  EXPECT_EQ(tr.reports.size(), 2u);
  EXPECT_NEAR(tr.t.back(), 0.2, 1e-12);
  for (const auto& l : tr.levels) EXPECT_LE(max_level_diff(l, LevelState(d)), 1e-12);
  const NonnegativityReport n = nonnegativity_audit(tr);
  EXPECT_TRUE(n.pass());
  for (double m : n.min_per_level) EXPECT_EQ(m, 0.0);
}

TEST(Continuation, OneWindowMatchesTwoHalfWindows) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  const PhysParams p = small_params();
  const InitialData w0 = preset_initial_data(d, "small-data", 0.05);
  DriverConfig one = small_config();
  one.window = 0.2;
  DriverConfig two = small_config();
  two.window = 0.1;
  const Trajectory a = run_continuation(w0, 0.2, one, p, d);
  const Trajectory b = run_continuation(w0, 0.2, two, p, d);
  EXPECT_EQ(a.reports.size(), 1u);
  EXPECT_EQ(b.reports.size(), 2u);
  StateW ea, eb;
  ea.t = eb.t = {0.2};
  ea.levels = {a.levels.back()};
  eb.levels = {b.levels.back()};
  EXPECT_LE(picard_residual(ea, eb, one.norms, d), 5.0 * one.tol);
}

TEST(Continuation, GrowthMetricIsMonotoneForNonnegativeData) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  PhysParams p;
  p.D_s = 0.5;
  DriverConfig cfg = small_config();
  cfg.dt = 0.02;
  cfg.window = 0.2;
  const Trajectory tr = run_continuation(preset_initial_data(d, "growth", 2.0), 0.4, cfg, p, d);
  double gmax = 1.0;
  for (std::size_t m = 1; m < tr.levels.size(); ++m) {
    const auto& g1 = tr.levels[m].g.values();
    const auto& g0 = tr.levels[m - 1].g.values();
    for (std::size_t k = 0; k < g1.size(); ++k) {
      EXPECT_GE(g1[k], g0[k] - 1e-14);
      gmax = std::max(gmax, g1[k]);
    }
  }
  EXPECT_GT(gmax, 1.0);
  EXPECT_TRUE(nonnegativity_audit(tr).pass());
}

TEST(Continuation, IncompatibleDataAreRejected) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  InitialData w0(d);
  w0.c0.for_each([&](int, int j, double& v) { v = d.is_fluid_row(j) ? 1.0 : 0.0; });
  EXPECT_THROW(run_continuation(w0, 0.1, small_config(), PhysParams{}, d), ConfigError);
  DriverConfig lax = small_config();
  lax.require_compatibility = false;
  const Trajectory tr = run_continuation(w0, 0.1, lax, PhysParams{}, d);
  EXPECT_FALSE(tr.compatibility.pass());
  EXPECT_THROW(run_continuation(InitialData(d), 0.05, small_config(), PhysParams{}, d), ConfigError);
}

TEST(NonnegativityAudit, NegativeLobeIsFlagged) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  ScalarField c(d, Staggering::Cell, Phase::Both, 1.0);
  c(3, 1) = -0.5;
  const ScalarField ok(d, Staggering::Cell, Phase::Both, 1.0);
  const NonnegativityReport r = nonnegativity_audit({c, ok, ok});
  ASSERT_EQ(r.flagged.size(), 1u);
  EXPECT_EQ(r.flagged[0], 0);
  EXPECT_DOUBLE_EQ(r.min_per_level[0], -0.5);
  EXPECT_DOUBLE_EQ(r.tolerance, 1e-10);
  EXPECT_TRUE(nonnegativity_audit(std::vector<ScalarField>{}).pass());
}

TEST(NonnegativityAudit, RandomNonnegativeDataStayNonnegative) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  const PhysParams p = small_params();
  DriverConfig cfg = small_config();
  for (std::uint64_t seed : {1, 2}) {
    const Trajectory tr = run_continuation(preset_initial_data(d, "random", 0.5, seed), 0.1, cfg, p, d);
    EXPECT_TRUE(nonnegativity_audit(tr).pass()) << seed;
    for (const auto& l : tr.levels) {
      for (double v : l.cstar.values()) EXPECT_GE(v, -1e-12);
      for (double v : l.g.values()) EXPECT_GE(v, 1.0 - 1e-12);
    }
  }
}
