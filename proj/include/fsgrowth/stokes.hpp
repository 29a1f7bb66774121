#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace fsgrowth {

enum class OuterBoundary { Neumann, Dirichlet };

/// Data of one backward-Euler step of the two-phase Stokes problem
///   rho (v - v_init)/dt - Div S(v, pi) = k,  Div v = g_div,
///   [v] = 0, [S] n = h1 on the interface,
///   S n = h2 (Neumann) or v = g_b (Dirichlet) on the outer boundary.
/// k is sampled at the velocity locations; on the interface y-face row it is
/// the mean of the one-sided limits.
struct StokesRHS {
  MacVelocity k;
  ScalarField g_div;
  FaceVector h1;
  FaceVector h2;
  FaceVector g_b;
  MacVelocity v_init;

  static StokesRHS zeros(const TwoPhaseDomain& d) {
    StokesRHS r;
    r.k = MacVelocity(d);
    r.g_div = ScalarField(d, Staggering::Cell, Phase::Both);
    r.h1 = FaceVector(d.nx);
    r.h2 = FaceVector(d.nx);
    r.g_b = FaceVector(d.nx);
    r.v_init = MacVelocity(d);
    return r;
  }
};

/// Max-norm residuals of the discrete equations after a solve.
struct StokesResidual {
  double momentum = 0.0;     // bulk momentum rows
  double interface_x = 0.0;  // tangential stress jump rows
  double interface_y = 0.0;  // normal momentum balance across the interface
  double outer = 0.0;        // outer boundary rows
  double divergence = 0.0;   // continuity rows
  double relative = 0.0;     // ||r|| / (||b|| + || |A||x| ||)

  double max_abs() const { return std::max({momentum, interface_x, interface_y, outer, divergence}); }
};

struct StokesSolution {
  MacVelocity v;
  ScalarField pi;
  StokesResidual residual;
};

/// Monolithic MAC discretization; the matrix depends on (domain, params, dt,
/// boundary type) only and is factorized once.
class StokesSolver {
 public:
  StokesSolver(const TwoPhaseDomain& d, const PhysParams& p, double dt, OuterBoundary bc = OuterBoundary::Neumann)
      : d_(d), p_(p), dt_(dt), bc_(bc) {
    if (!(dt > 0.0)) throw ConfigError("stokes: dt must be positive");
    nU_ = d.nx * d.ny();
    nV_ = d.nx * d.ny();
    nG_ = d.nx;
    nP_ = d.nx * d.ny();
    n_ = nU_ + nV_ + nG_ + nP_;
    sys_ = FactoredSystem(assemble(nullptr).matrix(), "two-phase Stokes");
  }

  StokesSolution solve(const StokesRHS& rhs) const {
    if (bc_ == OuterBoundary::Dirichlet) check_hidden_condition(rhs);
    const SystemBuilder sb = assemble(&rhs);
    const VecX x = sys_.solve(sb.effective_rhs());
    StokesSolution s;
    s.v = MacVelocity(d_);
    s.v.ux.for_each([&](int i, int j, double& v) { v = x[iu(i, j)]; });
    s.v.uy.for_each([&](int i, int j, double& v) { v = j == 0 ? 0.0 : x[iv(i, j)]; });
    for (int i = 0; i < d_.nx; ++i) s.v.ux_gamma[i] = x[ig(i)];
    s.pi = ScalarField(d_, Staggering::Cell, Phase::Both);
    s.pi.for_each([&](int i, int j, double& v) { v = x[ip(i, j)]; });
    s.residual = residuals(sb, x);
    if (bc_ == OuterBoundary::Dirichlet) {
      double mean = 0.0;
      for (double v : s.pi.values()) mean += v;
      mean /= static_cast<double>(s.pi.size());
      for (double& v : s.pi.values()) v -= mean;
      // the pinned row stands in for one continuity row
      s.residual.divergence = std::max(s.residual.divergence,
                                       std::abs(continuity(0, 0).evaluate(x) - rhs.g_div(0, 0)));
    }
    return s;
  }

  /// Full system (matrix and effective right-hand side) for inspection.
  SystemBuilder assemble(const StokesRHS* rhs) const {
    SystemBuilder sb(n_);
    const int nx = d_.nx, ny = d_.ny(), nyf = d_.ny_f;
    const double dx = d_.dx, dy = d_.dy;
    for (int j = 0; j < ny; ++j) {
      const Phase ph = d_.phase_of_row(j);
      const double rho = p_.rho(ph);
      for (int i = 0; i < nx; ++i) {
        const LinComb top = Sxy(i, j + 1, j + 1 == nyf ? Side::Fluid : Side::Solid, rhs);
        const LinComb bot = Sxy(i, j, j == nyf ? Side::Solid : Side::Fluid, rhs);
        LinComb L = (rho / dt_) * U(i, j) - (1.0 / dx) * (Sxx(i, j) - Sxx(i - 1, j)) - (1.0 / dy) * (top - bot);
        const double b = rhs ? rhs->k.ux(i, j) + rho / dt_ * rhs->v_init.ux(i, j) : 0.0;
        sb.set(iu(i, j), std::move(L), b);
      }
    }
    const double rho_bar = 0.5 * (p_.rho_f + p_.rho_s);
    for (int j = 1; j <= ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        LinComb L;
        double b = 0.0;
        if (j == ny && bc_ == OuterBoundary::Dirichlet) {
          L = V(i, j);
          b = rhs ? rhs->g_b.y[i] : 0.0;
        } else if (j == ny) {
          const double h2y = rhs ? rhs->h2.y[i] : 0.0;
          L = (p_.rho_s / dt_) * V(i, j) - (2.0 / dy) * (LinComb(h2y) - Syy(i, j - 1)) -
              (1.0 / dx) * (XT(i + 1, rhs) - XT(i, rhs));
          b = rhs ? rhs->k.uy(i, j) + p_.rho_s / dt_ * rhs->v_init.uy(i, j) : 0.0;
        } else if (j == nyf) {
          L = (rho_bar / dt_) * V(i, j) - (1.0 / dy) * (Syy(i, j) - Syy(i, j - 1)) -
              (1.0 / dx) * (XS(i + 1, rhs) - XS(i, rhs));
          b = rhs ? rhs->k.uy(i, j) + rho_bar / dt_ * rhs->v_init.uy(i, j) - rhs->h1.y[i] / dy : 0.0;
        } else {
          const double rho = p_.rho(j < nyf ? Phase::Fluid : Phase::Solid);
          L = (rho / dt_) * V(i, j) - (1.0 / dy) * (Syy(i, j) - Syy(i, j - 1)) -
              (1.0 / dx) * (Sxy(i + 1, j, Side::Fluid, rhs) - Sxy(i, j, Side::Fluid, rhs));
          b = rhs ? rhs->k.uy(i, j) + rho / dt_ * rhs->v_init.uy(i, j) : 0.0;
        }
        sb.set(iv(i, j), std::move(L), b);
      }
    }
    for (int i = 0; i < nx; ++i) {
      sb.set(ig(i), Sxy(i, nyf, Side::Solid, rhs) - Sxy(i, nyf, Side::Fluid, rhs), rhs ? rhs->h1.x[i] : 0.0);
    }
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) sb.set(ip(i, j), continuity(i, j), rhs ? rhs->g_div(i, j) : 0.0);
    // Clamped outer boundary: the continuity rows sum to the compatibility
    // condition, so one of them is replaced by a pressure pin and the mean is
    // removed afterwards.
    if (bc_ == OuterBoundary::Dirichlet) sb.set(ip(0, 0), P(0, 0), 0.0);
    return sb;
  }

  const SpMat& matrix() const { return sys_.matrix(); }
  int size() const { return n_; }
  OuterBoundary boundary() const { return bc_; }

  /// Integral of g_div minus the outer flux of g_b; must vanish for the
  /// Dirichlet problem.
  double hidden_condition_defect(const StokesRHS& rhs, double* scale = nullptr) const {
    double integral = 0.0, s = 0.0;
    rhs.g_div.for_each([&](int, int, const double& v) {
      integral += d_.cell_volume() * v;
      s += d_.cell_volume() * std::abs(v);
    });
    for (int i = 0; i < d_.nx; ++i) {
      integral -= d_.dx * rhs.g_b.y[i];
      s += d_.dx * std::abs(rhs.g_b.y[i]);
    }
    if (scale) *scale = s;
    return integral;
  }

 private:
  enum class Side { Fluid, Solid };

  int iu(int i, int j) const { return d_.wrap(i) + d_.nx * j; }
  int iv(int i, int j) const { return nU_ + d_.wrap(i) + d_.nx * (j - 1); }
  int ig(int i) const { return nU_ + nV_ + d_.wrap(i); }
  int ip(int i, int j) const { return nU_ + nV_ + nG_ + d_.wrap(i) + d_.nx * j; }

  LinComb U(int i, int j) const { return LinComb::unknown(iu(i, j)); }
  LinComb V(int i, int j) const { return j == 0 ? LinComb() : LinComb::unknown(iv(i, j)); }
  LinComb G(int i) const { return LinComb::unknown(ig(i)); }
  LinComb P(int i, int j) const { return LinComb::unknown(ip(i, j)); }

  LinComb continuity(int i, int j) const {
    return (1.0 / d_.dx) * (U(i + 1, j) - U(i, j)) + (1.0 / d_.dy) * (V(i, j + 1) - V(i, j));
  }

  double nu_row(int j) const { return p_.nu(d_.phase_of_row(j)); }

  LinComb Sxx(int i, int j) const {
    return -1.0 * P(i, j) + (2.0 * nu_row(j) / d_.dx) * (U(i + 1, j) - U(i, j));
  }
  LinComb Syy(int i, int j) const {
    return -1.0 * P(i, j) + (2.0 * nu_row(j) / d_.dy) * (V(i, j + 1) - V(i, j));
  }

  // Shear stress at node (i, j); on the interface row the side selects the
  // one-sided value.
  LinComb Sxy(int i, int j, Side side, const StokesRHS* rhs) const {
    const double h = d_.dy, dx = d_.dx;
    const int ny = d_.ny(), nyf = d_.ny_f;
    if (j == 0) return LinComb();
    if (j == ny) {
      if (bc_ == OuterBoundary::Neumann) return LinComb(rhs ? rhs->h2.x[d_.wrap(i)] : 0.0);
      LinComb dyu = (-9.0 / (3.0 * h)) * U(i, ny - 1) + (1.0 / (3.0 * h)) * U(i, ny - 2);
      dyu.constant += rhs ? 8.0 * rhs->g_b.x[d_.wrap(i)] / (3.0 * h) : 0.0;
      return p_.nu_s * (dyu + (1.0 / dx) * (V(i, ny) - V(i - 1, ny)));
    }
    const LinComb dxv = (1.0 / dx) * (V(i, j) - V(i - 1, j));
    if (j == nyf) {
      if (side == Side::Fluid) {
        const LinComb dyu = (8.0 / (3.0 * h)) * G(i) - (9.0 / (3.0 * h)) * U(i, nyf - 1) + (1.0 / (3.0 * h)) * U(i, nyf - 2);
        return p_.nu_f * (dyu + dxv);
      }
      const LinComb dyu = (-8.0 / (3.0 * h)) * G(i) + (9.0 / (3.0 * h)) * U(i, nyf) - (1.0 / (3.0 * h)) * U(i, nyf + 1);
      return p_.nu_s * (dyu + dxv);
    }
    const double nu = j < nyf ? p_.nu_f : p_.nu_s;
    return nu * ((1.0 / h) * (U(i, j) - U(i, j - 1)) + dxv);
  }

  // mean shear over the side of the interface control volume
  LinComb XS(int i, const StokesRHS* rhs) const {
    const int nyf = d_.ny_f;
    return 0.5 * (0.75 * Sxy(i, nyf, Side::Fluid, rhs) + 0.25 * Sxy(i, nyf - 1, Side::Fluid, rhs)) +
           0.5 * (0.75 * Sxy(i, nyf, Side::Solid, rhs) + 0.25 * Sxy(i, nyf + 1, Side::Solid, rhs));
  }
  // mean shear over the side of the outer half control volume
  LinComb XT(int i, const StokesRHS* rhs) const {
    const int ny = d_.ny();
    return 0.75 * Sxy(i, ny, Side::Solid, rhs) + 0.25 * Sxy(i, ny - 1, Side::Solid, rhs);
  }

  void check_hidden_condition(const StokesRHS& rhs) const {
    double scale = 0.0;
    const double defect = hidden_condition_defect(rhs, &scale);
    if (std::abs(defect) > 1e-10 * std::max(scale, 1.0)) {
      std::ostringstream os;
      os << "Dirichlet Stokes data violate the hidden compatibility condition: int g_div - int g_b.n = " << defect;
      throw HiddenConditionViolation(os.str());
    }
  }

  StokesResidual residuals(const SystemBuilder& sb, const VecX& x) const {
    const VecX r = sb.residual(x);
    StokesResidual out;
    const int nx = d_.nx, ny = d_.ny(), nyf = d_.ny_f;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double v = std::abs(r[iu(i, j)]);
        if (j == ny - 1 && bc_ == OuterBoundary::Neumann) out.outer = std::max(out.outer, v);
        out.momentum = std::max(out.momentum, v);
      }
    for (int j = 1; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double v = std::abs(r[iv(i, j)]);
        if (j == nyf) out.interface_y = std::max(out.interface_y, v);
        else if (j == ny) out.outer = std::max(out.outer, v);
        else out.momentum = std::max(out.momentum, v);
      }
    for (int i = 0; i < nx; ++i) out.interface_x = std::max(out.interface_x, std::abs(r[ig(i)]));
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        if (bc_ == OuterBoundary::Neumann || i != 0 || j != 0)
          out.divergence = std::max(out.divergence, std::abs(r[ip(i, j)]));
    const SpMat A = sys_.matrix().cwiseAbs();
    const VecX ax = A * x.cwiseAbs();
    const double scale = sb.effective_rhs().lpNorm<Eigen::Infinity>() + ax.lpNorm<Eigen::Infinity>();
    out.relative = scale > 0.0 ? r.lpNorm<Eigen::Infinity>() / scale : r.lpNorm<Eigen::Infinity>();
    return out;
  }

  TwoPhaseDomain d_;
  PhysParams p_;
  double dt_;
  OuterBoundary bc_;
  int nU_ = 0, nV_ = 0, nG_ = 0, nP_ = 0, n_ = 0;
  FactoredSystem sys_;
};

inline StokesSolution solve_two_phase_stokes_neumann(const StokesRHS& rhs, double dt, const PhysParams& p,
                                                     const TwoPhaseDomain& d) {
  return StokesSolver(d, p, dt, OuterBoundary::Neumann).solve(rhs);
}

inline StokesSolution solve_two_phase_stokes_dirichlet(const StokesRHS& rhs, double dt, const PhysParams& p,
                                                       const TwoPhaseDomain& d) {
  return StokesSolver(d, p, dt, OuterBoundary::Dirichlet).solve(rhs);
}

}  // namespace fsgrowth
