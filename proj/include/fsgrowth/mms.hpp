#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/elliptic.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/heat.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/stokes.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fsgrowth::mms {

struct Row {
  int n = 0;         // cells across each layer
  double h = 0.0;    // dy
  double error = 0.0;
  double slope = 0.0;  // log2(previous error / error) / log2(previous h / h)
};

struct Table {
  std::string suite;
  std::string quantity;
  std::vector<Row> rows;

  double min_slope() const {
    double m = 1e300;
    for (std::size_t k = 1; k < rows.size(); ++k) m = std::min(m, rows[k].slope);
    return rows.size() > 1 ? m : 0.0;
  }
};

inline void fill_slopes(Table& t) {
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    const Row& a = t.rows[k - 1];
    Row& b = t.rows[k];
    b.slope = std::log(a.error / b.error) / std::log(a.h / b.h);
  }
}

inline TwoPhaseDomain refinement_domain(int n) {
  GeometryConfig g;
  g.nx = 2 * n;
  g.ny_f = n;
  g.ny_s = n;
  return build_strip_domain(g);
}

/// Material constants with distinct values in the two phases.
inline PhysParams contrast_params() {
  PhysParams p;
  p.rho_f = 1.0;
  p.rho_s = 2.0;
  p.nu_f = 1.0;
  p.nu_s = 3.0;
  p.D_f = 1.0;
  p.D_s = 0.5;
  return p;
}

// Stream function sin(x) phi(y); phi(0) = phi''(0) = 0 so the symmetry
// conditions hold exactly.
namespace stokes_exact {
inline double phi(double y) { return std::sin(y) + 0.5 * std::sin(2 * y); }
inline double phi1(double y) { return std::cos(y) + std::cos(2 * y); }
inline double phi2(double y) { return -std::sin(y) - 2 * std::sin(2 * y); }
inline double phi3(double y) { return -std::cos(y) - 4 * std::cos(2 * y); }
inline double ux(double x, double y) { return std::sin(x) * phi1(y); }
inline double uy(double x, double y) { return -std::cos(x) * phi(y); }
inline double pres(double x, double y, Phase ph) {
  return ph == Phase::Fluid ? std::cos(x) * std::cos(y) : 0.5 * std::cos(x) + 0.3 * std::sin(x) * y;
}
inline double px(double x, double y, Phase ph) {
  return ph == Phase::Fluid ? -std::sin(x) * std::cos(y) : -0.5 * std::sin(x) + 0.3 * std::cos(x) * y;
}
inline double py(double x, double y, Phase ph) {
  return ph == Phase::Fluid ? -std::cos(x) * std::sin(y) : 0.3 * std::sin(x);
}
inline double sxy(double x, double y, double nu) { return nu * std::sin(x) * (phi2(y) + phi(y)); }
inline double syy(double x, double y, Phase ph, double nu) { return -pres(x, y, ph) - 2 * nu * std::cos(x) * phi1(y); }
inline double divs_x(double x, double y, Phase ph, double nu) {
  return -px(x, y, ph) - 2 * nu * std::sin(x) * phi1(y) + nu * std::sin(x) * (phi3(y) + phi1(y));
}
inline double divs_y(double x, double y, Phase ph, double nu) {
  return nu * std::cos(x) * (phi2(y) + phi(y)) - py(x, y, ph) - 2 * nu * std::cos(x) * phi2(y);
}
}  // namespace stokes_exact

struct StokesErrors {
  double velocity = 0.0;  // discrete L2 over all velocity unknowns
  double pressure = 0.0;  // discrete L2, mean removed for the Dirichlet case
  double residual = 0.0;
};

inline StokesErrors stokes_error(int n, OuterBoundary bc, const PhysParams& p) {
  using namespace stokes_exact;
  const TwoPhaseDomain d = refinement_domain(n);
  const double dt = 1.0;
  StokesRHS r = StokesRHS::zeros(d);
  r.k.ux.for_each([&](int i, int j, double& v) {
    const double x = d.x_face(i), y = d.y_center(j);
    const Phase ph = d.phase_of_row(j);
    v = p.rho(ph) * ux(x, y) / dt - divs_x(x, y, ph, p.nu(ph));
  });
  r.k.uy.for_each([&](int i, int j, double& v) {
    const double x = d.x_center(i), y = d.y_face(j);
    if (j == 0) return;
    if (j == d.ny_f) {
      const double kf = p.rho_f * uy(x, y) / dt - divs_y(x, y, Phase::Fluid, p.nu_f);
      const double ks = p.rho_s * uy(x, y) / dt - divs_y(x, y, Phase::Solid, p.nu_s);
      v = 0.5 * (kf + ks);
      return;
    }
    const Phase ph = j < d.ny_f ? Phase::Fluid : Phase::Solid;
    v = p.rho(ph) * uy(x, y) / dt - divs_y(x, y, ph, p.nu(ph));
  });
  const double yg = d.h_f, yt = d.height();
  for (int i = 0; i < d.nx; ++i) {
    const double xn = d.x_face(i), xc = d.x_center(i);
    r.h1.x[i] = sxy(xn, yg, p.nu_s) - sxy(xn, yg, p.nu_f);
    r.h1.y[i] = syy(xc, yg, Phase::Solid, p.nu_s) - syy(xc, yg, Phase::Fluid, p.nu_f);
    r.h2.x[i] = sxy(xn, yt, p.nu_s);
    r.h2.y[i] = syy(xc, yt, Phase::Solid, p.nu_s);
    r.g_b.x[i] = ux(xn, yt);
    r.g_b.y[i] = uy(xc, yt);
  }
  const StokesSolution s = StokesSolver(d, p, dt, bc).solve(r);

  StokesErrors e;
  const double V = d.cell_volume();
  double su = 0.0;
  s.v.ux.for_each([&](int i, int j, const double& v) { su += V * std::pow(v - ux(d.x_face(i), d.y_center(j)), 2); });
  s.v.uy.for_each([&](int i, int j, const double& v) { su += V * std::pow(v - uy(d.x_center(i), d.y_face(j)), 2); });
  e.velocity = std::sqrt(su);

  double shift = 0.0;
  if (bc == OuterBoundary::Dirichlet) {
    double vol = 0.0;
    s.pi.for_each([&](int i, int j, const double& v) {
      shift += V * (v - stokes_exact::pres(d.x_center(i), d.y_center(j), d.phase_of_row(j)));
      vol += V;
    });
    shift /= vol;
  }
  double sp = 0.0;
  s.pi.for_each([&](int i, int j, const double& v) {
    sp += V * std::pow(v - shift - stokes_exact::pres(d.x_center(i), d.y_center(j), d.phase_of_row(j)), 2);
  });
  e.pressure = std::sqrt(sp);
  e.residual = s.residual.relative;
  return e;
}

/// Velocity and pressure tables from one refinement sweep.
inline std::vector<Table> stokes_tables(OuterBoundary bc, const std::vector<int>& ns = {16, 32, 64}) {
  const std::string suite = bc == OuterBoundary::Neumann ? "stokes-neumann" : "stokes-dirichlet";
  Table v{suite, "velocity_l2", {}}, pr{suite, "pressure_l2", {}};
  const PhysParams p = contrast_params();
  for (int n : ns) {
    const StokesErrors e = stokes_error(n, bc, p);
    v.rows.push_back({n, 1.0 / n, e.velocity, 0.0});
    pr.rows.push_back({n, 1.0 / n, e.pressure, 0.0});
  }
  fill_slopes(v);
  fill_slopes(pr);
  return {v, pr};
}

inline Table stokes_suite(OuterBoundary bc, const std::vector<int>& ns = {16, 32, 64}) {
  return stokes_tables(bc, ns).front();
}

// Heat: one backward-Euler step whose source contains the exact discrete-time
// difference quotient, so the measured error is purely spatial.
inline double heat_space_error(int n, Phase which, const PhysParams& p) {
  const TwoPhaseDomain d = refinement_domain(n);
  const double D = p.D(which), dt = 0.5, t0 = 0.0, t1 = dt;
  auto c = [](double x, double y, double t) { return std::exp(-t) * std::cos(x) * (1.0 + 0.5 * std::cos(y) + 0.2 * y * y * y); };
  auto cy = [](double x, double y, double t) { return std::exp(-t) * std::cos(x) * (-0.5 * std::sin(y) + 0.6 * y * y); };
  auto lap = [](double x, double y, double t) {
    const double prof = 1.0 + 0.5 * std::cos(y) + 0.2 * y * y * y;
    const double prof2 = -0.5 * std::cos(y) + 1.2 * y;
    return std::exp(-t) * std::cos(x) * (prof2 - prof);
  };
  HeatRHS r = HeatRHS::zeros(d, which);
  sample(d, r.c_init, [&](double x, double y) { return c(x, y, t0); });
  sample(d, r.f_bulk, [&](double x, double y) { return (c(x, y, t1) - c(x, y, t0)) / dt - D * lap(x, y, t1); });
  for (int i = 0; i < d.nx; ++i) {
    const double x = d.x_center(i);
    r.f_gamma[i] = D * cy(x, d.h_f, t1);
    r.f_gammas[i] = D * cy(x, d.height(), t1);
  }
  const ScalarField sol = HeatSolver(d, which, D, dt).solve(r);
  double s = 0.0;
  sol.for_each([&](int i, int j, const double& v) { s += d.cell_volume() * std::pow(v - c(d.x_center(i), d.y_center(j), t1), 2); });
  return std::sqrt(s);
}

inline Table heat_suite(const std::vector<int>& ns = {16, 32, 64}) {
  Table t;
  t.suite = "heat";
  t.quantity = "concentration_l2";
  const PhysParams p = contrast_params();
  for (int n : ns) {
    const double e = heat_space_error(n, Phase::Fluid, p) + heat_space_error(n, Phase::Solid, p);
    t.rows.push_back({n, 1.0 / n, e, 0.0});
  }
  fill_slopes(t);
  return t;
}

// Temporal order against the semi-discrete exact solution cos(x) exp(-D lam t),
// lam being the discrete Laplacian eigenvalue of cos(x).
inline double heat_time_error(int steps, double T, int n, const PhysParams& p) {
  const TwoPhaseDomain d = refinement_domain(n);
  const double dt = T / steps;
  const double lam = (2.0 - 2.0 * std::cos(d.dx)) / (d.dx * d.dx);
  const HeatSolver solver(d, Phase::Fluid, p.D_f, dt);
  HeatRHS r = HeatRHS::zeros(d, Phase::Fluid);
  sample(d, r.c_init, [](double x, double) { return std::cos(x); });
  for (int k = 0; k < steps; ++k) r.c_init = solver.solve(r);
  double err = 0.0;
  r.c_init.for_each([&](int i, int, const double& v) {
    err = std::max(err, std::abs(v - std::cos(d.x_center(i)) * std::exp(-p.D_f * lam * T)));
  });
  return err;
}

inline Table heat_time_suite(const std::vector<int>& steps = {10, 20, 40}) {
  Table t;
  t.suite = "heat-time";
  t.quantity = "concentration_max";
  const PhysParams p = contrast_params();
  for (int s : steps) t.rows.push_back({s, 1.0 / s, heat_time_error(s, 1.0, 16, p), 0.0});
  fill_slopes(t);
  return t;
}

// Elliptic transmission: psi_f = cos x (1 + cos y), psi_s = cos x (2 + sin y).
inline double elliptic_error(int n, const PhysParams& p, JumpWeight w) {
  const TwoPhaseDomain d = refinement_domain(n);
  const double wf = w == JumpWeight::Unit ? 1.0 : p.rho_f, ws = w == JumpWeight::Unit ? 1.0 : p.rho_s;
  auto psi = [&](double x, double y, bool fluid) {
    return fluid ? std::cos(x) * (1.0 + std::cos(y)) : std::cos(x) * (2.0 + std::sin(y));
  };
  auto psiy = [&](double x, double y, bool fluid) { return fluid ? -std::cos(x) * std::sin(y) : std::cos(x) * std::cos(y); };
  auto lap = [&](double x, double y, bool fluid) {
    return fluid ? -std::cos(x) * (1.0 + std::cos(y)) - std::cos(x) * std::cos(y)
                 : -std::cos(x) * (2.0 + std::sin(y)) - std::cos(x) * std::sin(y);
  };
  EllipticData data = EllipticData::zeros(d);
  data.f.for_each([&](int i, int j, double& v) { v = -lap(d.x_center(i), d.y_center(j), d.is_fluid_row(j)); });
  for (int i = 0; i < d.nx; ++i) {
    const double x = d.x_center(i);
    data.h_jump[i] = ws * psi(x, d.h_f, false) - wf * psi(x, d.h_f, true);
    data.g_jumpflux[i] = psiy(x, d.h_f, false) - psiy(x, d.h_f, true);
    data.g_b[i] = psi(x, d.height(), false);
  }
  const EllipticSolution s = EllipticSolver(d, p, w).solve(data);
  double e = 0.0;
  s.psi.for_each([&](int i, int j, const double& v) {
    e += d.cell_volume() * std::pow(v - psi(d.x_center(i), d.y_center(j), d.is_fluid_row(j)), 2);
  });
  return std::sqrt(e);
}

inline Table elliptic_suite(const std::vector<int>& ns = {16, 32, 64}) {
  Table t;
  t.suite = "elliptic";
  t.quantity = "psi_l2";
  const PhysParams p = contrast_params();
  for (int n : ns) t.rows.push_back({n, 1.0 / n, elliptic_error(n, p, JumpWeight::Density), 0.0});
  fill_slopes(t);
  return t;
}

inline std::vector<std::string> suite_names() { return {"stokes-neumann", "stokes-dirichlet", "heat", "elliptic"}; }

inline Table run_suite(const std::string& name) {
  if (name == "stokes-neumann") return stokes_suite(OuterBoundary::Neumann);
  if (name == "stokes-dirichlet") return stokes_suite(OuterBoundary::Dirichlet);
  if (name == "heat") return heat_suite();
  if (name == "heat-time") return heat_time_suite();
  if (name == "elliptic") return elliptic_suite();
  throw ConfigError("mms: unknown suite '" + name + "' (expected stokes-neumann, stokes-dirichlet, heat, elliptic)");
}

}  // namespace fsgrowth::mms
