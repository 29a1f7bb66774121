#include "common.hpp"

using namespace fsgrowth;
using fsgrowth::testing::strip;

namespace {

PhysParams ode_params() {
  PhysParams p;
  p.gamma = 0.8;
  p.beta = 1.3;
  p.rho_s = 1.7;
  return p;
}

double exact_g(double c0, double t, const PhysParams& p) { return std::exp(p.metric_rate() * c0 * t); }
double exact_cstar(double c0, double t, const PhysParams& p) {
  return p.rho_s / p.gamma * (1.0 - std::exp(-p.growth_rate() * c0 * t));
}

}  // namespace

TEST(StepG, NoConcentrationNoGrowth) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  ScalarField g(d, Staggering::Cell, Phase::Solid, 1.3);
  const ScalarField c(d, Staggering::Cell, Phase::Solid);
  for (OdeScheme s : {OdeScheme::ImplicitEuler, OdeScheme::RK4}) {
    const ScalarField out = step_g(g, c, 0.1, PhysParams{}, s);
    out.for_each([](int, int, const double& v) { EXPECT_EQ(v, 1.3); });
  }
}

TEST(StepG, Rk4MatchesClosedForm) {
  const PhysParams p = ode_params();
  for (double c0 : {0.5, 1.0, 2.0}) {
    double g = 1.0;
    for (int k = 0; k < 100; ++k) g = ode::g_step(g, c0, c0, c0, 1e-2, p, OdeScheme::RK4);
    EXPECT_LE(std::abs(g - exact_g(c0, 1.0, p)) / exact_g(c0, 1.0, p), 1e-8) << c0;
  }
}

TEST(StepG, NegativeConcentrationResorbs) {
  const PhysParams p = ode_params();
  const double c0 = -0.6;
  double g = 1.0, prev = 1.0;
  for (int k = 0; k < 100; ++k) {
    g = ode::g_step(g, c0, c0, c0, 1e-2, p, OdeScheme::RK4);
    EXPECT_LT(g, prev);
    EXPECT_GT(g, 0.0);
    prev = g;
  }
  EXPECT_NEAR(g, exact_g(c0, 1.0, p), 1e-9);
  EXPECT_LT(g, 1.0);
}

TEST(StepG, ImplicitEulerIsFirstOrderAndGuardsTheStep) {
  const PhysParams p = ode_params();
  std::vector<double> h, err;
  for (int n : {20, 40, 80}) {
    double g = 1.0;
    for (int k = 0; k < n; ++k) g = ode::g_step(g, 1.0, 1.0, 1.0, 1.0 / n, p, OdeScheme::ImplicitEuler);
    h.push_back(1.0 / n);
    err.push_back(std::abs(g - exact_g(1.0, 1.0, p)));
  }
  EXPECT_NEAR(diag::loglog_slope(h, err), 1.0, 0.1);
  const double c_big = 2.0 / (0.1 * p.metric_rate());
  EXPECT_THROW(ode::g_step(1.0, c_big, c_big, c_big, 0.1, p, OdeScheme::ImplicitEuler), ConfigError);
  EXPECT_THROW(ode::g_step(0.0, 1.0, 1.0, 1.0, 0.1, p, OdeScheme::RK4), GrowthBoundViolation);
  const TwoPhaseDomain d = strip(8, 4, 4);
  const ScalarField g(d, Staggering::Cell, Phase::Solid, 1.0);
  EXPECT_THROW(step_g(g, g, 0.0, p), ConfigError);
}

TEST(StepCstar, ZeroStaysZero) {
  const TwoPhaseDomain d = strip(8, 4, 4);
  ScalarField cs(d, Staggering::Cell, Phase::Solid);
  const ScalarField c(d, Staggering::Cell, Phase::Solid);
  for (int k = 0; k < 10; ++k) cs = step_cstar(cs, c, 0.1, PhysParams{});
  EXPECT_EQ(max_abs(cs), 0.0);
}

TEST(StepCstar, Rk4MatchesClosedForm) {
  const PhysParams p = ode_params();
  for (double c0 : {0.5, 1.0, 2.0}) {
    double cs = 0.0;
    for (int k = 0; k < 100; ++k) cs = ode::cstar_step(cs, c0, c0, c0, 1e-2, p, OdeScheme::RK4);
    EXPECT_LE(std::abs(cs - exact_cstar(c0, 1.0, p)) / exact_cstar(c0, 1.0, p), 1e-8) << c0;
  }
}

TEST(StepCstar, FieldStepUsesImplicitEulerByDefault) {
  const PhysParams p = ode_params();
  const TwoPhaseDomain d = strip(8, 4, 4);
  const ScalarField c(d, Staggering::Cell, Phase::Solid, 0.4);
  const ScalarField cs(d, Staggering::Cell, Phase::Solid, 0.1);
  const double dt = 0.05;
  const double expected = (0.1 + dt * p.beta * 0.4) / (1.0 + dt * p.growth_rate() * 0.4);
  step_cstar(cs, c, dt, p).for_each([&](int, int, const double& v) { EXPECT_NEAR(v, expected, 1e-15); });
}

TEST(StepCstar, DuhamelOracleForRandomHistories) {
  const PhysParams p = ode_params();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int n = 100;
  const double dt = 1.0 / n;
  for (int trial = 0; trial < 5; ++trial) {
    const double a = U(rng), b = U(rng), w = 1.0 + 4.0 * U(rng), ph = 6.0 * U(rng);
    auto c = [&](double t) { return a + b * (1.0 + std::sin(w * t + ph)) + 0.5 * t * t; };
    double cs = 0.0;
    for (int k = 0; k < n; ++k)
      cs = ode::cstar_step(cs, c(k * dt), c((k + 0.5) * dt), c((k + 1) * dt), dt, p, OdeScheme::RK4);
    std::vector<double> hist(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) hist[k] = c(k * 0.5 * dt);
    EXPECT_LE(std::abs(cs - duhamel_cstar(hist, 0.5 * dt, p)), 1e-6) << trial;
  }
}

TEST(ClosedFormG, Histories) {
  const PhysParams p = ode_params();
  EXPECT_EQ(closed_form_g(std::vector<double>(11, 0.0), 0.1, p), 1.0);
  EXPECT_NEAR(closed_form_g(std::vector<double>(11, 0.7), 0.1, p), exact_g(0.7, 1.0, p), 1e-14);
  std::vector<double> lin(11);
  for (int k = 0; k <= 10; ++k) lin[k] = 0.2 + 0.5 * k * 0.1;
  // int_0^1 (0.2 + 0.5 t) dt = 0.45
  EXPECT_NEAR(closed_form_g(lin, 0.1, p), std::exp(p.metric_rate() * 0.45), 1e-14);
}

TEST(IntegrateUniform, ExactForCubicsAndOddCounts) {
  for (int n : {1, 2, 3, 5, 8}) {
    const double dt = 1.0 / n;
    std::vector<double> f(n + 1);
    for (int k = 0; k <= n; ++k) {
      const double t = k * dt;
      f[k] = n == 1 ? 1.0 + 2.0 * t : 1.0 + 2.0 * t - 3.0 * t * t + t * t * t;
    }
    const double exact = n == 1 ? 2.0 : 1.0 + 1.0 - 1.0 + 0.25;
    EXPECT_NEAR(ode::integrate_uniform(f, dt), exact, 1e-14) << n;
  }
}

TEST(OdeConfig, Validation) {
  OdeConfig c;
  EXPECT_NO_THROW(c.validate());
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}
