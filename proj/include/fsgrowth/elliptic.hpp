#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/interface.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/sparse.hpp"
#include "fsgrowth/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fsgrowth {

/// Weights in the value-jump condition w_s psi_s - w_f psi_f = h_jump.
enum class JumpWeight { Unit, Density };

/// Data for -Lap psi = f with [d psi / dy] = g_jumpflux and weighted
/// [psi] = h_jump on the interface, psi = g_b on the outer boundary, zero
/// flux on the symmetry plane and periodic in x.
struct EllipticData {
  ScalarField f;
  std::vector<double> g_jumpflux;
  std::vector<double> h_jump;
  std::vector<double> g_b;

  static EllipticData zeros(const TwoPhaseDomain& d) {
    EllipticData e;
    e.f = ScalarField(d, Staggering::Cell, Phase::Both);
    e.g_jumpflux.assign(d.nx, 0.0);
    e.h_jump.assign(d.nx, 0.0);
    e.g_b.assign(d.nx, 0.0);
    return e;
  }
};

struct EllipticSolution {
  ScalarField psi;
  std::vector<double> psi_f_gamma;  // fluid-side interface value
  std::vector<double> psi_s_gamma;  // solid-side interface value
  double residual = 0.0;            // max-norm of the discrete rows
};

class EllipticSolver {
 public:
  EllipticSolver(const TwoPhaseDomain& d, const PhysParams& p, JumpWeight weight = JumpWeight::Unit)
      : d_(d), wf_(weight == JumpWeight::Unit ? 1.0 : p.rho_f), ws_(weight == JumpWeight::Unit ? 1.0 : p.rho_s) {
    const SystemBuilder sb = build(nullptr);
    sys_ = FactoredSystem(sb.matrix(), "elliptic transmission");
  }

  EllipticSolution solve(const EllipticData& data) const {
    const SystemBuilder sb = build(&data);
    const VecX x = sys_.solve(sb.effective_rhs());
    EllipticSolution s;
    s.psi = ScalarField(d_, Staggering::Cell, Phase::Both);
    s.psi.for_each([&](int i, int j, double& v) { v = x[cell(i, j)]; });
    s.psi_f_gamma.resize(d_.nx);
    s.psi_s_gamma.resize(d_.nx);
    for (int i = 0; i < d_.nx; ++i) {
      s.psi_f_gamma[i] = x[gf(i)];
      s.psi_s_gamma[i] = x[gs(i)];
    }
    s.residual = sb.residual(x).lpNorm<Eigen::Infinity>();
    return s;
  }

  /// d psi / dy on the y-face row j, consistent with the fluxes in the rows.
  double face_dy(const EllipticSolution& s, const EllipticData& data, int i, int j) const {
    const double h = d_.dy;
    if (j == 0) return 0.0;
    if (j == d_.ny_f)
      return -stencil::face_derivative_inward(s.psi_f_gamma[d_.wrap(i)], s.psi(i, j - 1), s.psi(i, j - 2), h);
    if (j == d_.ny())
      return -stencil::face_derivative_inward(data.g_b[d_.wrap(i)], s.psi(i, j - 1), s.psi(i, j - 2), h);
    return (s.psi(i, j) - s.psi(i, j - 1)) / h;
  }

  const SpMat& matrix() const { return sys_.matrix(); }
  int size() const { return d_.nx * d_.ny() + 2 * d_.nx; }

 private:
  int cell(int i, int j) const { return d_.wrap(i) + d_.nx * j; }
  int gf(int i) const { return d_.nx * d_.ny() + d_.wrap(i); }
  int gs(int i) const { return d_.nx * d_.ny() + d_.nx + d_.wrap(i); }

  // outward-normal derivative at the upper face of cell (i, j), as a
  // combination of unknowns and data
  LinComb dy_upper(int i, int j, const EllipticData* data) const {
    const double h = d_.dy;
    LinComb l;
    if (j == d_.ny_f - 1) {
      // (8 psi_G - 9 psi_j + psi_{j-1}) / 3h
      l.terms = {{gf(i), 8.0 / (3.0 * h)}, {cell(i, j), -9.0 / (3.0 * h)}, {cell(i, j - 1), 1.0 / (3.0 * h)}};
    } else if (j == d_.ny() - 1) {
      l.terms = {{cell(i, j), -9.0 / (3.0 * h)}, {cell(i, j - 1), 1.0 / (3.0 * h)}};
      l.constant = data ? 8.0 * data->g_b[d_.wrap(i)] / (3.0 * h) : 0.0;
    } else {
      l.terms = {{cell(i, j + 1), 1.0 / h}, {cell(i, j), -1.0 / h}};
    }
    return l;
  }
  // d psi / dy at the lower face of cell (i, j)
  LinComb dy_lower(int i, int j) const {
    const double h = d_.dy;
    LinComb l;
    if (j == 0) return l;
    if (j == d_.ny_f) {
      // solid side, (-8 psi_G + 9 psi_j - psi_{j+1}) / 3h
      l.terms = {{gs(i), -8.0 / (3.0 * h)}, {cell(i, j), 9.0 / (3.0 * h)}, {cell(i, j + 1), -1.0 / (3.0 * h)}};
    } else {
      l.terms = {{cell(i, j), 1.0 / h}, {cell(i, j - 1), -1.0 / h}};
    }
    return l;
  }

  SystemBuilder build(const EllipticData* data) const {
    SystemBuilder sb(size());
    const double dx = d_.dx, dy = d_.dy;
    for (int j = 0; j < d_.ny(); ++j) {
      for (int i = 0; i < d_.nx; ++i) {
        // -(sum of outward fluxes) / V = f
        LinComb flux;
        flux.terms = {{cell(i + 1, j), 1.0 / (dx * dx)}, {cell(i, j), -2.0 / (dx * dx)}, {cell(i - 1, j), 1.0 / (dx * dx)}};
        flux += (1.0 / dy) * (dy_upper(i, j, data) - dy_lower(i, j));
        sb.set(cell(i, j), -1.0 * flux, data ? data->f(i, j) : 0.0);
      }
    }
    const double h = dy;
    for (int i = 0; i < d_.nx; ++i) {
      LinComb jump;
      jump.terms = {{gs(i), ws_}, {gf(i), -wf_}};
      sb.set(gf(i), jump, data ? data->h_jump[i] : 0.0);
      // d psi_s / dy - d psi_f / dy
      const int jf = d_.ny_f - 1, js = d_.ny_f;
      LinComb flux;
      flux.terms = {{gs(i), -8.0 / (3.0 * h)}, {cell(i, js), 9.0 / (3.0 * h)}, {cell(i, js + 1), -1.0 / (3.0 * h)},
                    {gf(i), -8.0 / (3.0 * h)}, {cell(i, jf), 9.0 / (3.0 * h)}, {cell(i, jf - 1), -1.0 / (3.0 * h)}};
      sb.set(gs(i), flux, data ? data->g_jumpflux[i] : 0.0);
    }
    return sb;
  }

  TwoPhaseDomain d_;
  double wf_, ws_;
  FactoredSystem sys_;
};

inline EllipticSolution solve_elliptic_transmission(const EllipticData& data, const TwoPhaseDomain& d,
                                                    const PhysParams& p, JumpWeight weight = JumpWeight::Unit) {
  return EllipticSolver(d, p, weight).solve(data);
}

/// Gradient of phi solving Lap phi = g_div - Div v_bar with [rho phi] = 0,
/// [d phi / dy] = 0 on the interface and phi = 0 on the outer boundary. The
/// returned face gradients satisfy Div(v_bar + grad phi) = g_div exactly in
/// the discrete sense.
struct ReductionResult {
  MacVelocity grad_phi;
  ScalarField phi;
  double residual = 0.0;  // max |Div(v_bar + grad phi) - g_div|
};

inline ReductionResult divergence_reduction(const ScalarField& g_div, const MacVelocity& v_bar,
                                            const TwoPhaseDomain& d, const PhysParams& p) {
  const ScalarField div_bar = divergence(d, v_bar);
  EllipticData data = EllipticData::zeros(d);
  data.f.for_each([&](int i, int j, double& v) { v = -(g_div(i, j) - div_bar(i, j)); });
  const EllipticSolver solver(d, p, JumpWeight::Density);
  const EllipticSolution sol = solver.solve(data);
  ReductionResult r;
  r.phi = sol.psi;
  r.grad_phi = MacVelocity(d);
  r.grad_phi.ux.for_each([&](int i, int j, double& v) { v = (sol.psi(i, j) - sol.psi(i - 1, j)) / d.dx; });
  r.grad_phi.uy.for_each([&](int i, int j, double& v) { v = solver.face_dy(sol, data, i, j); });
  for (int i = 0; i < d.nx; ++i) {
    const double tf = (sol.psi_f_gamma[i] - sol.psi_f_gamma[d.wrap(i - 1)]) / d.dx;
    const double ts = (sol.psi_s_gamma[i] - sol.psi_s_gamma[d.wrap(i - 1)]) / d.dx;
    r.grad_phi.ux_gamma[i] = 0.5 * (tf + ts);
  }
  const ScalarField div = divergence(d, v_bar + r.grad_phi);
  div.for_each([&](int i, int j, const double& v) { r.residual = std::max(r.residual, std::abs(v - g_div(i, j))); });
  return r;
}

}  // namespace fsgrowth
