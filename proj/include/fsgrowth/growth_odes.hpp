#pragma once

#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/params.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

namespace fsgrowth {

enum class OdeScheme { ImplicitEuler, RK4 };

struct OdeConfig {
  OdeScheme scheme = OdeScheme::RK4;
  double dt = 1e-2;
  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("ode: dt must be positive");
  }
};

namespace ode {

/// Classic RK4 step for y' = f(t, y).
inline double rk4(const std::function<double(double, double)>& f, double t, double y, double dt) {
  const double k1 = f(t, y);
  const double k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
  const double k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2);
  const double k4 = f(t + dt, y + dt * k3);
  return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// g' = a c(t) g with c given at the start, midpoint and end of the step.
inline double g_step(double g, double c0, double cm, double c1, double dt, const PhysParams& p, OdeScheme s) {
  if (!(g > 0.0)) throw GrowthBoundViolation("step_g: growth metric must be positive");
  const double a = p.metric_rate();
  if (s == OdeScheme::ImplicitEuler) {
    const double den = 1.0 - dt * a * c1;
    if (!(den > 0.0)) {
      std::ostringstream os;
      os << "step_g: dt*gamma*beta*c/(n rho_s) = " << dt * a * c1 << " >= 1, reduce dt";
      throw ConfigError(os.str());
    }
    return g / den;
  }
  auto c = [&](double tau) { return tau == 0.0 ? c0 : (tau < dt ? cm : c1); };
  const double out = rk4([&](double t, double y) { return a * c(t) * y; }, 0.0, g, dt);
  if (!(out > 0.0)) throw GrowthBoundViolation("step_g: RK4 lost positivity, reduce dt");
  return out;
}

/// c*' = beta c - (gamma beta / rho_s) c c*.
inline double cstar_step(double cs, double c0, double cm, double c1, double dt, const PhysParams& p,
                         OdeScheme s) {
  const double a = p.growth_rate();
  const double b = p.beta;
  if (s == OdeScheme::ImplicitEuler) {
    const double den = 1.0 + dt * a * c1;
    if (!(den > 0.0)) {
      std::ostringstream os;
      os << "step_cstar: 1 + dt*gamma*beta*c/rho_s = " << den << " <= 0, reduce dt";
      throw ConfigError(os.str());
    }
    return (cs + dt * b * c1) / den;
  }
  auto c = [&](double tau) { return tau == 0.0 ? c0 : (tau < dt ? cm : c1); };
  return rk4([&](double t, double y) { return b * c(t) - a * c(t) * y; }, 0.0, cs, dt);
}

/// Composite Simpson on uniform samples (3/8 rule on the last panel when the
/// interval count is odd, trapezoid for a single interval).
inline double integrate_uniform(const std::vector<double>& f, double dt) {
  const std::size_t n = f.size() - 1;
  if (f.size() < 2) return 0.0;
  if (n == 1) return 0.5 * dt * (f[0] + f[1]);
  std::size_t simpson_end = n;
  double tail = 0.0;
  if (n % 2 == 1) {
    simpson_end = n - 3;
    tail = 3.0 * dt / 8.0 * (f[n - 3] + 3.0 * f[n - 2] + 3.0 * f[n - 1] + f[n]);
  }
  double s = 0.0;
  for (std::size_t k = 0; k + 2 <= simpson_end; k += 2) s += f[k] + 4.0 * f[k + 1] + f[k + 2];
  return s * dt / 3.0 + tail;
}

}  // namespace ode

/// One step of the growth-metric ODE with c_s frozen over the step.
inline ScalarField step_g(const ScalarField& g, const ScalarField& c_s, double dt, const PhysParams& p,
                          OdeScheme scheme = OdeScheme::ImplicitEuler) {
  if (!(dt > 0.0)) throw ConfigError("step_g: dt must be positive");
  ScalarField out = g;
  out.for_each([&](int i, int j, double& v) {
    const double c = c_s(i, j);
    v = ode::g_step(g(i, j), c, c, c, dt, p, scheme);
  });
  return out;
}

/// One step of the foam-cell ODE with c_s frozen over the step.
inline ScalarField step_cstar(const ScalarField& cstar, const ScalarField& c_s, double dt, const PhysParams& p,
                              OdeScheme scheme = OdeScheme::ImplicitEuler) {
  if (!(dt > 0.0)) throw ConfigError("step_cstar: dt must be positive");
  ScalarField out = cstar;
  out.for_each([&](int i, int j, double& v) {
    const double c = c_s(i, j);
    v = ode::cstar_step(cstar(i, j), c, c, c, dt, p, scheme);
  });
  return out;
}

/// exp(gamma beta / (n rho_s) * int_0^t c_s), uniform samples over [0, t].
inline double closed_form_g(const std::vector<double>& c_history, double dt, const PhysParams& p) {
  return std::exp(p.metric_rate() * ode::integrate_uniform(c_history, dt));
}

/// c*(t) = int_0^t exp(-int_sigma^t a c) beta c(sigma) d sigma with a = gamma beta / rho_s,
/// for a history sampled uniformly on [0, t].
inline double duhamel_cstar(const std::vector<double>& c_history, double dt, const PhysParams& p) {
  const std::size_t n = c_history.size();
  const double a = p.growth_rate();
  // cumulative integral of c from 0 to each sample, trapezoid with
  // Simpson corrections where possible
  std::vector<double> cum(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    if (k >= 2) {
      const double simpson = dt / 3.0 * (c_history[k - 2] + 4.0 * c_history[k - 1] + c_history[k]);
      cum[k] = cum[k - 2] + simpson;
    } else {
      // quadratic through the first three samples
      const double c2 = n > 2 ? c_history[2] : c_history[1];
      cum[k] = dt / 12.0 * (5.0 * c_history[0] + 8.0 * c_history[1] - c2);
    }
  }
  std::vector<double> integrand(n);
  for (std::size_t k = 0; k < n; ++k)
    integrand[k] = std::exp(-a * (cum[n - 1] - cum[k])) * p.beta * c_history[k];
  return ode::integrate_uniform(integrand, dt);
}

}  // namespace fsgrowth
