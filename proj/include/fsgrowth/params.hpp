#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"

#include <string>

namespace fsgrowth {

/// Material and biochemical constants. Coefficients are constant per subdomain.
struct PhysParams {
  double rho_f = 1.0;
  double rho_s = 1.0;
  double nu_f = 1.0;
  double nu_s = 1.0;
  double mu_s = 1.0;
  double D_f = 1.0;
  double D_s = 1.0;
  double zeta = 1.0;   // interface permeability
  double beta = 1.0;   // macrophage -> foam cell rate
  double gamma = 1.0;  // growth coupling
  int n_dim = 2;

  double rho(Phase p) const { return p == Phase::Fluid ? rho_f : rho_s; }
  double nu(Phase p) const { return p == Phase::Fluid ? nu_f : nu_s; }
  double D(Phase p) const { return p == Phase::Fluid ? D_f : D_s; }

  /// Rate in the solid divergence constraint, gamma*beta/rho_s.
  double growth_rate() const { return gamma * beta / rho_s; }
  /// Rate in the growth-metric ODE, gamma*beta/(n rho_s).
  double metric_rate() const { return gamma * beta / (n_dim * rho_s); }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw ConfigError(std::string("params: ") + name + " must be positive");
    };
    positive(rho_f, "rho_f");
    positive(rho_s, "rho_s");
    positive(nu_f, "nu_f");
    positive(nu_s, "nu_s");
    positive(mu_s, "mu_s");
    positive(D_f, "D_f");
    positive(D_s, "D_s");
    positive(zeta, "zeta");
    positive(beta, "beta");
    positive(gamma, "gamma");
    if (n_dim != 2 && n_dim != 3) throw ConfigError("params: n_dim must be 2 or 3");
  }
};

}  // namespace fsgrowth
