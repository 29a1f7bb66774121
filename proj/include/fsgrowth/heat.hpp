#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/sparse.hpp"

#include <cmath>
#include <vector>

namespace fsgrowth {

/// Data of one backward-Euler step of the Neumann heat problem on one phase.
/// f_gamma is D grad c . n_Gamma (n_Gamma pointing from fluid to solid);
/// f_gammas is D grad c . n on the outer boundary (solid only).
struct HeatRHS {
  ScalarField f_bulk;
  std::vector<double> f_gamma;
  std::vector<double> f_gammas;
  ScalarField c_init;

  static HeatRHS zeros(const TwoPhaseDomain& d, Phase which) {
    HeatRHS r;
    r.f_bulk = ScalarField(d, Staggering::Cell, which);
    r.c_init = ScalarField(d, Staggering::Cell, which);
    r.f_gamma.assign(d.nx, 0.0);
    r.f_gammas.assign(d.nx, 0.0);
    return r;
  }
};

/// Cell-centred finite-volume backward-Euler step, factorized once per
/// (phase, D, dt).
class HeatSolver {
 public:
  HeatSolver(const TwoPhaseDomain& d, Phase which, double D, double dt)
      : d_(d), which_(which), D_(D), dt_(dt) {
    if (which == Phase::Both) throw ConfigError("heat: solve one phase at a time");
    if (!(dt > 0.0)) throw ConfigError("heat: dt must be positive");
    if (!(D > 0.0)) throw ConfigError("heat: D must be positive");
    j0_ = which == Phase::Fluid ? 0 : d.ny_f;
    j1_ = which == Phase::Fluid ? d.ny_f : d.ny();
    const int n = d.nx * (j1_ - j0_);
    std::vector<Eigen::Triplet<double>> trip;
    const double V = d.cell_volume();
    const double cx = D * d.dy / d.dx;
    const double cy = D * d.dx / d.dy;
    for (int j = j0_; j < j1_; ++j) {
      for (int i = 0; i < d.nx; ++i) {
        const int r = idx(i, j);
        double diag = V / dt;
        trip.emplace_back(r, idx(i - 1, j), -cx);
        trip.emplace_back(r, idx(i + 1, j), -cx);
        diag += 2.0 * cx;
        if (j > j0_) {
          trip.emplace_back(r, idx(i, j - 1), -cy);
          diag += cy;
        }
        if (j < j1_ - 1) {
          trip.emplace_back(r, idx(i, j + 1), -cy);
          diag += cy;
        }
        trip.emplace_back(r, r, diag);
      }
    }
    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    sys_ = FactoredSystem(std::move(A), "heat");
  }

  ScalarField solve(const HeatRHS& rhs) const {
    const VecX x = sys_.solve(assemble_rhs(rhs));
    ScalarField c(d_, Staggering::Cell, which_);
    c.for_each([&](int i, int j, double& v) { v = x[idx(i, j)]; });
    return c;
  }

  VecX assemble_rhs(const HeatRHS& rhs) const {
    const int n = d_.nx * (j1_ - j0_);
    VecX b(n);
    const double V = d_.cell_volume();
    for (int j = j0_; j < j1_; ++j) {
      for (int i = 0; i < d_.nx; ++i) {
        double v = V * (rhs.c_init(i, j) / dt_ + rhs.f_bulk(i, j));
        if (which_ == Phase::Fluid && j == j1_ - 1) v += d_.dx * rhs.f_gamma[i];
        if (which_ == Phase::Solid && j == j0_) v -= d_.dx * rhs.f_gamma[i];
        if (which_ == Phase::Solid && j == j1_ - 1) v += d_.dx * rhs.f_gammas[i];
        b[idx(i, j)] = v;
      }
    }
    return b;
  }

  const SpMat& matrix() const { return sys_.matrix(); }
  Phase phase() const { return which_; }

 private:
  int idx(int i, int j) const { return d_.wrap(i) + d_.nx * (j - j0_); }

  TwoPhaseDomain d_;
  Phase which_;
  double D_;
  double dt_;
  int j0_ = 0, j1_ = 0;
  FactoredSystem sys_;
};

inline ScalarField solve_heat_neumann(const HeatRHS& rhs, Phase which, double dt, const PhysParams& p,
                                      const TwoPhaseDomain& d) {
  return HeatSolver(d, which, p.D(which), dt).solve(rhs);
}

/// Relative residual of d/dt int c = int f + boundary inflow over one step.
inline double heat_mass_balance_residual(const TwoPhaseDomain& d, Phase which, const HeatRHS& rhs,
                                         const ScalarField& c_new, double dt) {
  const double V = d.cell_volume();
  double m_new = 0.0, m_old = 0.0, source = 0.0, scale = 0.0;
  c_new.for_each([&](int i, int j, const double& v) {
    m_new += V * v;
    m_old += V * rhs.c_init(i, j);
    source += V * rhs.f_bulk(i, j);
    scale += V * (std::abs(v) + std::abs(rhs.c_init(i, j))) / dt + V * std::abs(rhs.f_bulk(i, j));
  });
  double inflow = 0.0;
  for (int i = 0; i < d.nx; ++i) {
    const double fg = which == Phase::Fluid ? rhs.f_gamma[i] : -rhs.f_gamma[i];
    inflow += d.dx * fg;
    scale += d.dx * std::abs(fg);
    if (which == Phase::Solid) {
      inflow += d.dx * rhs.f_gammas[i];
      scale += d.dx * std::abs(rhs.f_gammas[i]);
    }
  }
  const double r = (m_new - m_old) / dt - source - inflow;
  return scale > 0.0 ? std::abs(r) / scale : std::abs(r);
}

}  // namespace fsgrowth
