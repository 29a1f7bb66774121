#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/interface.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/state.hpp"
#include "fsgrowth/stencils.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace fsgrowth {

struct CompatibilityItem {
  std::string name;
  double residual = 0.0;  // max norm over the relevant cells or faces
  bool pass = false;
};

struct CompatibilityReport {
  double tolerance = 0.0;
  std::vector<CompatibilityItem> items;

  bool pass() const {
    return std::all_of(items.begin(), items.end(), [](const CompatibilityItem& i) { return i.pass; });
  }
  const CompatibilityItem& at(const std::string& name) const {
    for (const auto& i : items)
      if (i.name == name) return i;
    throw ConfigError("compatibility: unknown item " + name);
  }
};

/// Discrete residuals of the compatibility conditions for the initial data.
/// Interface quantities use one-sided three-cell stencils from each phase.
inline CompatibilityReport check_compatibility(const MacVelocity& v0, const ScalarField& c0, const PhysParams& p,
                                               const TwoPhaseDomain& d, double tol = 1e-8) {
  CompatibilityReport r;
  r.tolerance = tol;
  const int nyf = d.ny_f, ny = d.ny();
  const double h = d.dy;
  auto col = [](const ScalarField& f, int i, int j0, int step) {
    return std::array<double, 3>{f(i, j0), f(i, j0 + step), f(i, j0 + 2 * step)};
  };
  double div = 0.0, vjump = 0.0, tau_jump = 0.0, tau_top = 0.0;
  double robin = 0.0, flux_jump = 0.0, flux_top = 0.0;
  const ScalarField dv = divergence(d, v0);
  for (double x : dv.values()) div = std::max(div, std::abs(x));
  for (int i = 0; i < d.nx; ++i) {
    const auto uf = col(v0.ux, i, nyf - 1, -1);
    const auto us = col(v0.ux, i, nyf, 1);
    const auto ut = col(v0.ux, i, ny - 1, -1);
    vjump = std::max(vjump, std::abs(stencil::extrapolate(us[0], us[1], us[2]) -
                                     stencil::extrapolate(uf[0], uf[1], uf[2])));
    // d/dy along +y on each side; the inward direction flips sign below a face
    const double duf = -stencil::face_derivative_cells(uf[0], uf[1], uf[2], h);
    const double dus = stencil::face_derivative_cells(us[0], us[1], us[2], h);
    const double dut = -stencil::face_derivative_cells(ut[0], ut[1], ut[2], h);
    const double dvx_g = (v0.uy(i, nyf) - v0.uy(i - 1, nyf)) / d.dx;
    const double dvx_t = (v0.uy(i, ny) - v0.uy(i - 1, ny)) / d.dx;
    tau_jump = std::max(tau_jump, std::abs(p.nu_s * (dus + dvx_g) - p.nu_f * (duf + dvx_g)));
    tau_top = std::max(tau_top, std::abs(p.nu_s * (dut + dvx_t)));

    const auto cf = col(c0, i, nyf - 1, -1);
    const auto cs = col(c0, i, nyf, 1);
    const auto ct = col(c0, i, ny - 1, -1);
    const double jump = stencil::extrapolate(cs[0], cs[1], cs[2]) - stencil::extrapolate(cf[0], cf[1], cf[2]);
    const double dcf = -stencil::face_derivative_cells(cf[0], cf[1], cf[2], h);
    const double dcs = stencil::face_derivative_cells(cs[0], cs[1], cs[2], h);
    const double dct = -stencil::face_derivative_cells(ct[0], ct[1], ct[2], h);
    robin = std::max(robin, std::abs(p.zeta * jump - p.D_s * dcs));
    flux_jump = std::max(flux_jump, std::abs(p.D_s * dcs - p.D_f * dcf));
    flux_top = std::max(flux_top, std::abs(p.D_s * dct));
  }
  auto add = [&](const char* name, double v) { r.items.push_back({name, v, v <= tol}); };
  add("div_v0", div);
  add("velocity_jump", vjump);
  add("tangential_stress_jump", tau_jump);
  add("tangential_stress_outer", tau_top);
  add("robin_interface", robin);
  add("flux_jump", flux_jump);
  add("flux_outer", flux_top);
  return r;
}

inline CompatibilityReport check_compatibility(const InitialData& w0, const PhysParams& p, const TwoPhaseDomain& d,
                                               double tol = 1e-8) {
  return check_compatibility(w0.v0, w0.c0, p, d, tol);
}

}  // namespace fsgrowth
