#include "common.hpp"

using namespace fsgrowth;
using fsgrowth::testing::strip;

namespace {

double divergence_defect(const TwoPhaseDomain& d, const MacVelocity& v, const ScalarField& g_div) {
  double worst = 0.0;
  divergence(d, v).for_each([&](int i, int j, const double& x) { worst = std::max(worst, std::abs(x - g_div(i, j))); });
  return worst;
}

}  // namespace

TEST(StokesNeumann, ZeroDataGiveZeroSolution) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const StokesSolution s = solve_two_phase_stokes_neumann(StokesRHS::zeros(d), 0.1, mms::contrast_params(), d);
  EXPECT_EQ(max_abs(s.v), 0.0);
  EXPECT_EQ(max_abs(s.pi), 0.0);
}

TEST(StokesNeumann, SolidGrowthSourceIsReproduced) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  const PhysParams p = mms::contrast_params();
  const double c0 = 0.3;
  StokesRHS r = StokesRHS::zeros(d);
  r.g_div.for_each([&](int, int j, double& v) { v = d.is_fluid_row(j) ? 0.0 : p.growth_rate() * c0; });
  const StokesSolution s = solve_two_phase_stokes_neumann(r, 0.05, p, d);
  EXPECT_LT(divergence_defect(d, s.v, r.g_div), 1e-10);
  EXPECT_LT(s.residual.max_abs(), 1e-9);
  EXPECT_GT(max_abs(s.v), 0.0);
}

TEST(StokesNeumann, ResidualsVanishForRandomData) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  StokesRHS r = StokesRHS::zeros(d);
  r.k.ux.for_each([&](int, int, double& v) { v = U(rng); });
  r.k.uy.for_each([&](int, int j, double& v) { v = j == 0 ? 0.0 : U(rng); });
  r.g_div.for_each([&](int, int, double& v) { v = U(rng); });
  for (int i = 0; i < d.nx; ++i) {
    r.h1.x[i] = U(rng);
    r.h1.y[i] = U(rng);
    r.h2.x[i] = U(rng);
    r.h2.y[i] = U(rng);
  }
  const StokesSolution s = StokesSolver(d, mms::contrast_params(), 0.1).solve(r);
  EXPECT_LT(s.residual.relative, 1e-12);
  EXPECT_LT(divergence_defect(d, s.v, r.g_div), 1e-9);
}

TEST(StokesDirichlet, ZeroDataGiveMeanFreeZero) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const StokesSolution s = solve_two_phase_stokes_dirichlet(StokesRHS::zeros(d), 0.1, PhysParams{}, d);
  EXPECT_LT(max_abs(s.v), 1e-14);
  double mean = 0.0;
  for (double v : s.pi.values()) mean += v;
  EXPECT_LT(std::abs(mean), 1e-13);
}

TEST(StokesDirichlet, HiddenConditionIsEnforced) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  StokesRHS r = StokesRHS::zeros(d);
  r.g_div.for_each([](int, int, double& v) { v = 1e-3; });
  const StokesSolver solver(d, PhysParams{}, 0.1, OuterBoundary::Dirichlet);
  EXPECT_GT(std::abs(solver.hidden_condition_defect(r)), 0.0);
  EXPECT_THROW(solver.solve(r), HiddenConditionViolation);
  // an outflow through the top that balances the source restores solvability
  const double total = 1e-3 * d.period * d.height();
  for (int i = 0; i < d.nx; ++i) r.g_b.y[i] = total / d.period;
  EXPECT_NEAR(solver.hidden_condition_defect(r), 0.0, 1e-15);
  const StokesSolution s = solver.solve(r);
  EXPECT_LT(divergence_defect(d, s.v, r.g_div), 1e-10);
}

TEST(StokesMms, VelocityConvergesAtSecondOrder) {
  for (OuterBoundary bc : {OuterBoundary::Neumann, OuterBoundary::Dirichlet}) {
    const mms::Table t = mms::stokes_suite(bc, {16, 32});
    EXPECT_GE(t.min_slope(), 1.8) << t.suite;
  }
}

TEST(HeatNeumann, ConstantStateIsStationary) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  for (Phase ph : {Phase::Fluid, Phase::Solid}) {
    HeatRHS r = HeatRHS::zeros(d, ph);
    r.c_init.for_each([](int, int, double& v) { v = 0.8; });
    ScalarField c = r.c_init;
    for (int k = 0; k < 5; ++k) {
      r.c_init = c;
      c = solve_heat_neumann(r, ph, 0.1, PhysParams{}, d);
    }
    c.for_each([](int, int, const double& v) { EXPECT_NEAR(v, 0.8, 1e-13); });
  }
}

TEST(HeatNeumann, UniformForcingGrowsLinearly) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const double s0 = 0.4, c0 = 0.1, dt = 0.05;
  const HeatSolver solver(d, Phase::Solid, 0.5, dt);
  HeatRHS r = HeatRHS::zeros(d, Phase::Solid);
  r.f_bulk.for_each([&](int, int, double& v) { v = s0; });
  ScalarField c(d, Staggering::Cell, Phase::Solid, c0);
  for (int k = 1; k <= 10; ++k) {
    r.c_init = c;
    c = solver.solve(r);
    c.for_each([&](int, int, const double& v) { EXPECT_NEAR(v, c0 + s0 * k * dt, 1e-12); });
  }
}

TEST(HeatNeumann, MassBalanceHoldsForRandomData) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (Phase ph : {Phase::Fluid, Phase::Solid}) {
    HeatRHS r = HeatRHS::zeros(d, ph);
    r.c_init.for_each([&](int, int, double& v) { v = U(rng); });
    r.f_bulk.for_each([&](int, int, double& v) { v = U(rng); });
    for (int i = 0; i < d.nx; ++i) {
      r.f_gamma[i] = U(rng);
      r.f_gammas[i] = U(rng);
    }
    const ScalarField c = solve_heat_neumann(r, ph, 0.02, mms::contrast_params(), d);
    EXPECT_LE(heat_mass_balance_residual(d, ph, r, c, 0.02), 1e-10);
  }
}

TEST(HeatNeumann, InvalidArguments) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  EXPECT_THROW(HeatSolver(d, Phase::Both, 1.0, 0.1), ConfigError);
  EXPECT_THROW(HeatSolver(d, Phase::Fluid, 1.0, 0.0), ConfigError);
  EXPECT_THROW(HeatSolver(d, Phase::Fluid, -1.0, 0.1), ConfigError);
}

TEST(HeatMms, SpaceAndTimeOrders) {
  EXPECT_GE(mms::heat_suite({16, 32}).min_slope(), 1.8);
  EXPECT_GE(mms::heat_time_suite().min_slope(), 0.9);
}

TEST(Elliptic, ZeroDataGiveZero) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  const EllipticSolution s = solve_elliptic_transmission(EllipticData::zeros(d), d, PhysParams{});
  EXPECT_EQ(max_abs(s.psi), 0.0);
}

TEST(Elliptic, UnitSourceMatchesQuadraticProfile) {
  // -psi'' = 1, psi'(0) = 0, psi(H) = 0, no jumps: psi = (H^2 - y^2) / 2
  const TwoPhaseDomain d = strip(8, 6, 6);
  EllipticData e = EllipticData::zeros(d);
  e.f.for_each([](int, int, double& v) { v = 1.0; });
  const EllipticSolution s = solve_elliptic_transmission(e, d, PhysParams{});
  const double H = d.height();
  s.psi.for_each([&](int, int j, const double& v) {
    const double y = d.y_center(j);
    EXPECT_NEAR(v, 0.5 * (H * H - y * y), 1e-11);
  });
  for (int i = 0; i < d.nx; ++i) {
    EXPECT_NEAR(s.psi_f_gamma[i], 0.5 * (H * H - 1.0), 1e-11);
    EXPECT_NEAR(s.psi_s_gamma[i], 0.5 * (H * H - 1.0), 1e-11);
  }
  EXPECT_LT(s.residual, 1e-10);
}

TEST(Elliptic, UnitValueJump) {
  // harmonic on each side with psi_s - psi_f = 1 and continuous flux:
  // psi_s = 0, psi_f = -1
  const TwoPhaseDomain d = strip(8, 4, 4);
  EllipticData e = EllipticData::zeros(d);
  e.h_jump.assign(d.nx, 1.0);
  const EllipticSolution s = solve_elliptic_transmission(e, d, PhysParams{});
  s.psi.for_each([&](int, int j, const double& v) { EXPECT_NEAR(v, d.is_fluid_row(j) ? -1.0 : 0.0, 1e-12); });
}

TEST(Elliptic, DensityWeightedJump) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  PhysParams p;
  p.rho_f = 1.0;
  p.rho_s = 2.0;
  EllipticData e = EllipticData::zeros(d);
  e.g_b.assign(d.nx, 3.0);
  const EllipticSolution s = solve_elliptic_transmission(e, d, p, JumpWeight::Density);
  // rho_s psi_s = rho_f psi_f with psi_s = 3
  s.psi.for_each([&](int, int j, const double& v) { EXPECT_NEAR(v, d.is_fluid_row(j) ? 6.0 : 3.0, 1e-12); });
}

TEST(Elliptic, MmsConvergence) { EXPECT_GE(mms::elliptic_suite({16, 32}).min_slope(), 1.8); }

TEST(DivergenceReduction, CompatibleSourceGivesZeroCorrection) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  const MacVelocity v = sample_velocity(
      d, [](double x, double y) { return std::sin(x) * std::cos(y); }, [](double x, double y) { return std::cos(x) * y * y; });
  const ReductionResult r = divergence_reduction(divergence(d, v), v, d, mms::contrast_params());
  EXPECT_LT(max_abs(r.grad_phi), 1e-12);
  EXPECT_LT(r.residual, 1e-12);
}

TEST(DivergenceReduction, SolidSourceMatchesClosedForm) {
  // phi'' = k on the solid, zero flux into the fluid: d phi / dy = k (y - h_f)
  const TwoPhaseDomain d = strip(8, 6, 6);
  const double k = 0.7;
  ScalarField g(d, Staggering::Cell, Phase::Both);
  g.for_each([&](int, int j, double& v) { v = d.is_fluid_row(j) ? 0.0 : k; });
  const ReductionResult r = divergence_reduction(g, MacVelocity(d), d, mms::contrast_params());
  r.grad_phi.uy.for_each([&](int, int j, const double& v) {
    const double y = d.y_face(j);
    EXPECT_NEAR(v, y > d.h_f ? k * (y - d.h_f) : 0.0, 1e-11) << j;
  });
  EXPECT_LT(max_abs(r.grad_phi.ux), 1e-11);
  EXPECT_LT(r.residual, 1e-11);
}

TEST(DivergenceReduction, RandomSourceSatisfiesConstraint) {
  const TwoPhaseDomain d = strip(16, 8, 8);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a = U(rng), b = U(rng), c = U(rng);
  ScalarField g(d, Staggering::Cell, Phase::Both);
  sample(d, g, [&](double x, double y) { return a * std::sin(x + b) * std::cos(2 * y) + c; });
  MacVelocity v(d);
  v.ux.for_each([&](int, int, double& x) { x = U(rng); });
  const ReductionResult r = divergence_reduction(g, v, d, mms::contrast_params());
  EXPECT_LT(r.residual, 1e-10);
}
