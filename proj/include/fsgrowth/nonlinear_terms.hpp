#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/elliptic.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/function_spaces.hpp"
#include "fsgrowth/interface.hpp"
#include "fsgrowth/kinematics.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/state.hpp"
#include "fsgrowth/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>
#include <vector>

namespace fsgrowth {

inline constexpr double kGrowthFloor = 0.5;

enum class GForm { Pointwise, Conservative };

/// Right-hand sides of the linearized system at one time level.
///   K   : momentum data at the velocity unknowns (fluid rows K_f, solid rows
///         K_s = Div K~_s + K^sg, interface row the straddling-cell average)
///   G   : divergence data at cell centres
///   H1  : interface stress-jump data, H2 : outer traction data
///   F1  : concentration sources (solid rows include F^sg)
///   F2_f, F2_s, F3 : Neumann data of the two decoupled heat problems
///   F4, F5 : ODE data
struct NonlinearData {
  MacVelocity K;
  ScalarField G;
  std::vector<double> G_gamma_f, G_gamma_s, G_top;
  FaceVector H1;
  FaceVector H2;
  ScalarField F1;
  std::vector<double> F2_f, F2_s, F3;
  ScalarField F4;
  ScalarField F5;

  static NonlinearData zeros(const TwoPhaseDomain& d) {
    NonlinearData n;
    n.K = MacVelocity(d);
    n.G = ScalarField(d, Staggering::Cell, Phase::Both);
    n.G_gamma_f.assign(d.nx, 0.0);
    n.G_gamma_s.assign(d.nx, 0.0);
    n.G_top.assign(d.nx, 0.0);
    n.H1 = FaceVector(d.nx);
    n.H2 = FaceVector(d.nx);
    n.F1 = ScalarField(d, Staggering::Cell, Phase::Both);
    n.F2_f.assign(d.nx, 0.0);
    n.F2_s.assign(d.nx, 0.0);
    n.F3.assign(d.nx, 0.0);
    n.F4 = ScalarField(d, Staggering::Cell, Phase::Solid);
    n.F5 = ScalarField(d, Staggering::Cell, Phase::Solid);
    return n;
  }

  double max_abs() const {
    return std::max({fsgrowth::max_abs(K), fsgrowth::max_abs(G), fsgrowth::max_abs(H1), fsgrowth::max_abs(H2),
                     fsgrowth::max_abs(F1), fsgrowth::max_abs(F2_f), fsgrowth::max_abs(F2_s), fsgrowth::max_abs(F3),
                     fsgrowth::max_abs(F4), fsgrowth::max_abs(F5), fsgrowth::max_abs(G_gamma_f),
                     fsgrowth::max_abs(G_gamma_s), fsgrowth::max_abs(G_top)});
  }

  NonlinearData& operator-=(const NonlinearData& o) {
    auto sub = [](std::vector<double>& a, const std::vector<double>& b) {
      for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
    };
    K -= o.K;
    G -= o.G;
    sub(G_gamma_f, o.G_gamma_f);
    sub(G_gamma_s, o.G_gamma_s);
    sub(G_top, o.G_top);
    sub(H1.x, o.H1.x);
    sub(H1.y, o.H1.y);
    sub(H2.x, o.H2.x);
    sub(H2.y, o.H2.y);
    F1 -= o.F1;
    sub(F2_f, o.F2_f);
    sub(F2_s, o.F2_s);
    sub(F3, o.F3);
    F4 -= o.F4;
    F5 -= o.F5;
    return *this;
  }
  friend NonlinearData operator-(NonlinearData a, const NonlinearData& b) { return a -= b; }
};

/// Kinematic inputs of one level.
struct LevelKinematics {
  const TensorField* F = nullptr;
  const TensorField* Finv = nullptr;
};

inline LevelKinematics level_kinematics(const KinematicsState& k, std::size_t m) { return {&k.F[m], &k.Finv[m]}; }

inline void check_growth_floor(const ScalarField& g, double g_min = kGrowthFloor) {
  double lo = 1e300;
  for (double v : g.values()) lo = std::min(lo, v);
  if (lo < g_min) {
    std::ostringstream os;
    os << "growth metric fell to " << lo << ", below the working bound " << g_min;
    throw GrowthBoundViolation(os.str());
  }
}

namespace law {

/// K~_f = -pi (F^{-T} - I) + nu (F^{-1} Gv + Gv^T F^{-T})(F^{-T} - I)
///        + nu ((F^{-1} - I) Gv + Gv^T (F^{-T} - I))
inline Mat2 tilde_K_fluid(const Mat2& Gv, double pi, const Mat2& Finv, double nu) {
  const Mat2 I = Mat2::Identity();
  const Mat2 FinvT = Finv.transpose();
  return -pi * (FinvT - I) + nu * (Finv * Gv + Gv.transpose() * FinvT) * (FinvT - I) +
         nu * ((Finv - I) * Gv + Gv.transpose() * (FinvT - I));
}

/// K~_s = -pi (F^{-T} - I) + mu ((F - I)/g^2 + (1/g^2 - 1) I - (F^{-T} - I))
inline Mat2 tilde_K_solid(double pi, const Mat2& F, const Mat2& Finv, double g, double mu) {
  const Mat2 I = Mat2::Identity();
  const Mat2 FinvT = Finv.transpose();
  const double ig2 = 1.0 / (g * g);
  return -pi * (FinvT - I) + mu * ((F - I) * ig2 + (ig2 - 1.0) * I - (FinvT - I));
}

/// First Piola stress of the solid, sigma_s F^{-T}.
inline Mat2 solid_piola(const Mat2& Gv, double pi, const Mat2& F, const Mat2& Finv, double g, double mu, double nu) {
  const Mat2 FinvT = Finv.transpose();
  return -pi * FinvT + mu * (F / (g * g) - FinvT) + nu * (Gv + Gv.transpose());
}

/// F~ = D (F^{-1} F^{-T} - I) grad c
inline Vec2 tilde_F(const Vec2& gc, const Mat2& Finv, double D) {
  return D * (Finv * Finv.transpose() - Mat2::Identity()) * gc;
}

}  // namespace law

/// K~ at cell centres (fluid formula on fluid rows, solid formula on solid rows).
inline TensorField tilde_K(const TwoPhaseDomain& d, const LevelState& w, const LevelKinematics& k, const PhysParams& p) {
  const TensorField Gv = grad_velocity(d, w.v);
  TensorField out(d, Staggering::Cell, Phase::Both);
  out.for_each([&](int i, int j, Mat2& K) {
    if (d.is_fluid_row(j))
      K = law::tilde_K_fluid(Gv(i, j), w.pi(i, j), (*k.Finv)(i, j), p.nu_f);
    else
      K = law::tilde_K_solid(w.pi(i, j), (*k.F)(i, j), (*k.Finv)(i, j), w.g(i, j), p.mu_s);
  });
  return out;
}

/// K^sg = (sigma_s F^{-T}) (n grad g / g) on solid cells.
inline VectorField growth_momentum_source(const TwoPhaseDomain& d, const LevelState& w, const LevelKinematics& k,
                                          const PhysParams& p) {
  const TensorField Gv = grad_velocity(d, w.v);
  const VectorField gg = grad_cell(d, w.g);
  VectorField out(d, Staggering::Cell, Phase::Solid);
  out.for_each([&](int i, int j, Vec2& v) {
    const Mat2 P = law::solid_piola(Gv(i, j), w.pi(i, j), (*k.F)(i, j), (*k.Finv)(i, j), w.g(i, j), p.mu_s, p.nu_s);
    v = P * (static_cast<double>(p.n_dim) * gg(i, j) / w.g(i, j));
  });
  return out;
}

namespace detail {

// Node and trace values of a cell tensor field, laid out to match the
// Stokes fluxes.
class TensorFluxes {
 public:
  TensorFluxes(const TwoPhaseDomain& d, const TensorField& K) : d_(d), K_(K) {}

  double cell(int i, int j, int a, int b) const { return K_(i, j)(a, b); }

  // average of the two cells sharing the x-face (i, row j)
  double xavg(int i, int j, int a, int b) const { return 0.5 * (K_(i - 1, j)(a, b) + K_(i, j)(a, b)); }

  double node_interior(int i, int j, int a, int b) const { return 0.5 * (xavg(i, j - 1, a, b) + xavg(i, j, a, b)); }

  double node_trace(int i, Side side, int a, int b) const {
    auto f = [&](int j) { return xavg(i, j, a, b); };
    return extrap(side, f);
  }
  double cell_trace(int i, Side side, int a, int b) const {
    auto f = [&](int j) { return K_(i, j)(a, b); };
    return extrap(side, f);
  }

 private:
  template <typename Fn>
  double extrap(Side side, Fn&& f) const {
    switch (side) {
      case Side::Fluid: {
        const int j = d_.ny_f - 1;
        return stencil::extrapolate(f(j), f(j - 1), f(j - 2));
      }
      case Side::Solid: {
        const int j = d_.ny_f;
        return stencil::extrapolate(f(j), f(j + 1), f(j + 2));
      }
      case Side::Top: {
        const int j = d_.ny() - 1;
        return stencil::extrapolate(f(j), f(j - 1), f(j - 2));
      }
    }
    return 0.0;
  }

  const TwoPhaseDomain& d_;
  const TensorField& K_;
};

}  // namespace detail

/// Discrete Div K~ at the velocity unknowns, in the same flux form as the
/// Stokes rows (interface row straddles, top row is a half cell).
inline MacVelocity divergence_of_tensor(const TwoPhaseDomain& d, const TensorField& K) {
  const detail::TensorFluxes T(d, K);
  const int ny = d.ny(), nyf = d.ny_f;
  const double dx = d.dx, dy = d.dy;
  MacVelocity out(d);
  // shear flux K(a, b) at node (i, j) as seen from the given side
  auto node = [&](int i, int j, Side side, int a, int b) -> double {
    if (j == 0) return 0.0;
    if (j == ny) return T.node_trace(i, Side::Top, a, b);
    if (j == nyf) return T.node_trace(i, side, a, b);
    return T.node_interior(i, j, a, b);
  };
  out.ux.for_each([&](int i, int j, double& v) {
    const double top = node(i, j + 1, Side::Fluid, 0, 1);
    const double bot = node(i, j, Side::Solid, 0, 1);
    v = (T.cell(i, j, 0, 0) - T.cell(i - 1, j, 0, 0)) / dx + (top - bot) / dy;
  });
  out.uy.for_each([&](int i, int j, double& v) {
    if (j == 0) return;
    if (j == nyf) {
      auto XK = [&](int c) {
        return 0.5 * (0.75 * node(c, nyf, Side::Fluid, 1, 0) + 0.25 * node(c, nyf - 1, Side::Fluid, 1, 0)) +
               0.5 * (0.75 * node(c, nyf, Side::Solid, 1, 0) + 0.25 * node(c, nyf + 1, Side::Solid, 1, 0));
      };
      const double ydiff = (T.cell(i, nyf, 1, 1) - T.cell_trace(i, Side::Solid, 1, 1)) +
                           (T.cell_trace(i, Side::Fluid, 1, 1) - T.cell(i, nyf - 1, 1, 1));
      v = ydiff / dy + (XK(i + 1) - XK(i)) / dx;
    } else if (j == ny) {
      auto XT = [&](int c) { return 0.75 * node(c, ny, Side::Top, 1, 0) + 0.25 * node(c, ny - 1, Side::Solid, 1, 0); };
      v = 2.0 / dy * (T.cell_trace(i, Side::Top, 1, 1) - T.cell(i, ny - 1, 1, 1)) + (XT(i + 1) - XT(i)) / dx;
    } else {
      v = (T.cell(i, j, 1, 1) - T.cell(i, j - 1, 1, 1)) / dy +
          (node(i + 1, j, Side::Fluid, 1, 0) - node(i, j, Side::Fluid, 1, 0)) / dx;
    }
  });
  return out;
}

/// Cell vector data moved to the velocity unknowns; interface and top rows
/// take the mean of the one-sided limits over the (half) control volume.
inline MacVelocity cell_vector_to_faces(const TwoPhaseDomain& d, const VectorField& f) {
  MacVelocity out(d);
  const bool fl = f.tag() != Phase::Solid, so = f.tag() != Phase::Fluid;
  auto has = [&](int j) { return d.is_fluid_row(j) ? fl : so; };
  out.ux.for_each([&](int i, int j, double& v) {
    if (has(j)) v = 0.5 * (f(i - 1, j)(0) + f(i, j)(0));
  });
  out.uy.for_each([&](int i, int j, double& v) {
    if (j == 0) return;
    if (j == d.ny_f) {
      double s = 0.0;
      if (fl) s += trace_at(d, f, Side::Fluid, i)(1);
      if (so) s += trace_at(d, f, Side::Solid, i)(1);
      v = 0.5 * s;
    } else if (j == d.ny()) {
      if (so) v = trace_at(d, f, Side::Top, i)(1);
    } else if (has(j)) {
      v = 0.5 * (f(i, j - 1)(1) + f(i, j)(1));
    }
  });
  return out;
}

/// K = Div K~ + K^sg at the velocity unknowns.
inline MacVelocity assemble_K(const TwoPhaseDomain& d, const LevelState& w, const LevelKinematics& k,
                              const PhysParams& p) {
  check_growth_floor(w.g);
  MacVelocity K = divergence_of_tensor(d, tilde_K(d, w, k, p));
  K += cell_vector_to_faces(d, growth_momentum_source(d, w, k, p));
  return K;
}

/// H1 = -[K~] n on the interface, H2 = -K~_s n on the outer boundary.
inline std::pair<FaceVector, FaceVector> assemble_H(const TwoPhaseDomain& d, const TensorField& Kt) {
  const detail::TensorFluxes T(d, Kt);
  FaceVector H1(d.nx), H2(d.nx);
  for (int i = 0; i < d.nx; ++i) {
    H1.x[i] = -(T.node_trace(i, Side::Solid, 0, 1) - T.node_trace(i, Side::Fluid, 0, 1));
    H1.y[i] = -(T.cell_trace(i, Side::Solid, 1, 1) - T.cell_trace(i, Side::Fluid, 1, 1));
    H2.x[i] = -T.node_trace(i, Side::Top, 0, 1);
    H2.y[i] = -T.cell_trace(i, Side::Top, 1, 1);
  }
  return {H1, H2};
}

inline std::pair<FaceVector, FaceVector> assemble_H(const TwoPhaseDomain& d, const LevelState& w,
                                                    const LevelKinematics& k, const PhysParams& p) {
  return assemble_H(d, tilde_K(d, w, k, p));
}

/// Finite-volume divergence of a cell vector field. Horizontal face values
/// are averages; vertical face values are cubic interpolants within a phase
/// (one-sided next to the interface and the top, odd ghost below y = 0) and
/// one-sided traces on the interface and the outer boundary. The normal
/// component vanishes on the symmetry plane.
inline ScalarField fv_divergence(const TwoPhaseDomain& d, const VectorField& f) {
  ScalarField out(d, Staggering::Cell, Phase::Both);
  auto fy = [&](int i, int j) { return f(i, j)(1); };
  auto fy_face = [&](int i, int j, bool from_below) -> double {
    if (j == 0) return 0.0;
    if (j == d.ny()) return trace_at(d, f, Side::Top, i)(1);
    if (j == d.ny_f) return trace_at(d, f, from_below ? Side::Fluid : Side::Solid, i)(1);
    const int lo = j < d.ny_f ? 0 : d.ny_f;
    const int hi = j < d.ny_f ? d.ny_f : d.ny();
    if (j == 1) return (10.0 * fy(i, 0) + 9.0 * fy(i, 1) - fy(i, 2)) / 16.0;
    if (j - 2 < lo) return (5.0 * fy(i, j - 1) + 15.0 * fy(i, j) - 5.0 * fy(i, j + 1) + fy(i, j + 2)) / 16.0;
    if (j + 1 >= hi) return (5.0 * fy(i, j) + 15.0 * fy(i, j - 1) - 5.0 * fy(i, j - 2) + fy(i, j - 3)) / 16.0;
    return (-fy(i, j - 2) + 9.0 * fy(i, j - 1) + 9.0 * fy(i, j) - fy(i, j + 1)) / 16.0;
  };
  out.for_each([&](int i, int j, double& v) {
    const double fxr = 0.5 * (f(i, j)(0) + f(i + 1, j)(0));
    const double fxl = 0.5 * (f(i - 1, j)(0) + f(i, j)(0));
    v = (fxr - fxl) / d.dx + (fy_face(i, j + 1, true) - fy_face(i, j, false)) / d.dy;
  });
  return out;
}

/// Row divergence of F^{-T}: (Div F^{-T})_a = d_b (F^{-1})_{ba}.
inline VectorField row_divergence_FinvT(const TwoPhaseDomain& d, const TensorField& Finv) {
  VectorField out(d, Staggering::Cell, Phase::Both);
  for (int a = 0; a < 2; ++a) {
    ScalarField c0(d, Staggering::Cell, Phase::Both), c1(d, Staggering::Cell, Phase::Both);
    c0.for_each([&](int i, int j, double& v) { v = Finv(i, j)(0, a); });
    c1.for_each([&](int i, int j, double& v) { v = Finv(i, j)(1, a); });
    // (F^{-1})_{10} is odd about the symmetry plane
    const VectorField g0 = grad_cell(d, c0), g1 = grad_cell(d, c1, a == 0 ? Parity::Odd : Parity::Even);
    out.for_each([&](int i, int j, Vec2& v) { v(a) = g0(i, j)(0) + g1(i, j)(1); });
  }
  return out;
}

/// G = -(F^{-T} - I) : grad v, or its conservative form
/// -Div((F^{-1} - I) v) + v . Div F^{-T}.
inline ScalarField assemble_G(const TwoPhaseDomain& d, const MacVelocity& v, const TensorField& Finv,
                              GForm form = GForm::Pointwise) {
  if (form == GForm::Pointwise) {
    const TensorField Gv = grad_velocity(d, v);
    ScalarField G(d, Staggering::Cell, Phase::Both);
    G.for_each([&](int i, int j, double& out) {
      out = -double_dot<2>(Finv(i, j).transpose() - Mat2::Identity(), Gv(i, j));
    });
    return G;
  }
  const VectorField vc = velocity_at_cells(d, v);
  VectorField W(d, Staggering::Cell, Phase::Both);
  W.for_each([&](int i, int j, Vec2& out) { out = (Finv(i, j) - Mat2::Identity()) * vc(i, j); });
  ScalarField G = fv_divergence(d, W);
  const VectorField divFT = row_divergence_FinvT(d, Finv);
  G.for_each([&](int i, int j, double& out) { out = -out + vc(i, j).dot(divFT(i, j)); });
  return G;
}

/// F~ at cell centres.
inline VectorField tilde_F(const TwoPhaseDomain& d, const ScalarField& c, const TensorField& Finv,
                           const PhysParams& p) {
  const VectorField gc = grad_cell(d, c);
  VectorField out(d, Staggering::Cell, Phase::Both);
  out.for_each([&](int i, int j, Vec2& v) { v = law::tilde_F(gc(i, j), Finv(i, j), p.D(d.phase_of_row(j))); });
  return out;
}

struct ConcentrationData {
  ScalarField F1;  // both; solid rows include F^sg
  ScalarField Fsg; // solid
  std::vector<double> F2_f, F2_s, F3;
};

/// Concentration data. The interface Neumann data are recombined so that the
/// fluid and solid heat problems decouple:
///   F2_s = zeta [c] - F~_s . n,  F2_f = F2_s + [F~] . n,  F3 = -F~_s . n.
inline ConcentrationData assemble_Fc(const TwoPhaseDomain& d, const LevelState& w, const LevelKinematics& k,
                                     const PhysParams& p) {
  check_growth_floor(w.g);
  const VectorField Ft = tilde_F(d, w.c, *k.Finv, p);
  ConcentrationData out;
  out.F1 = fv_divergence(d, Ft);
  const VectorField gc = grad_cell(d, w.c);
  const VectorField gg = grad_cell(d, w.g);
  out.Fsg = ScalarField(d, Staggering::Cell, Phase::Solid);
  out.Fsg.for_each([&](int i, int j, double& v) {
    const double c = w.c(i, j);
    const Mat2& Fi = (*k.Finv)(i, j);
    const Vec2 flux = p.D_s * (Fi * Fi.transpose()) * gc(i, j);
    v = -p.beta * c * (1.0 + p.gamma / p.rho_s * c) + (static_cast<double>(p.n_dim) * gg(i, j) / w.g(i, j)).dot(flux);
    out.F1(i, j) += v;
  });
  const std::vector<double> jc = jump_at_interface(d, w.c);
  out.F2_f.resize(d.nx);
  out.F2_s.resize(d.nx);
  out.F3.resize(d.nx);
  for (int i = 0; i < d.nx; ++i) {
    const double fs = trace_at(d, Ft, Side::Solid, i)(1);
    const double ff = trace_at(d, Ft, Side::Fluid, i)(1);
    out.F2_s[i] = p.zeta * jc[i] - fs;
    out.F2_f[i] = out.F2_s[i] + (fs - ff);
    out.F3[i] = -trace_at(d, Ft, Side::Top, i)(1);
  }
  return out;
}

/// F4 = -(gamma beta / rho_s) c_s c*,  F5 = (gamma beta / (n rho_s)) c_s (g - 1).
inline std::pair<ScalarField, ScalarField> assemble_F45(const TwoPhaseDomain& d, const ScalarField& c,
                                                        const ScalarField& cstar, const ScalarField& g,
                                                        const PhysParams& p) {
  ScalarField F4(d, Staggering::Cell, Phase::Solid), F5(d, Staggering::Cell, Phase::Solid);
  F4.for_each([&](int i, int j, double& v) { v = -p.growth_rate() * c(i, j) * cstar(i, j); });
  F5.for_each([&](int i, int j, double& v) { v = p.metric_rate() * c(i, j) * (g(i, j) - 1.0); });
  return {F4, F5};
}

/// The full nonlinear map at one level.
inline NonlinearData assemble_nonlinear(const TwoPhaseDomain& d, const LevelState& w, const LevelKinematics& k,
                                        const PhysParams& p, GForm gform = GForm::Pointwise) {
  check_growth_floor(w.g);
  NonlinearData n;
  const TensorField Kt = tilde_K(d, w, k, p);
  n.K = divergence_of_tensor(d, Kt);
  n.K += cell_vector_to_faces(d, growth_momentum_source(d, w, k, p));
  std::tie(n.H1, n.H2) = assemble_H(d, Kt);
  n.G = assemble_G(d, w.v, *k.Finv, gform);
  n.G_gamma_f = trace(d, n.G, Side::Fluid);
  n.G_gamma_s = trace(d, n.G, Side::Solid);
  n.G_top = trace(d, n.G, Side::Top);
  ConcentrationData c = assemble_Fc(d, w, k, p);
  n.F1 = std::move(c.F1);
  n.F2_f = std::move(c.F2_f);
  n.F2_s = std::move(c.F2_s);
  n.F3 = std::move(c.F3);
  std::tie(n.F4, n.F5) = assemble_F45(d, w.c, w.cstar, w.g, p);
  return n;
}

// ---------------------------------------------------------------------------
// Z_T surrogate norm and the contraction probe

struct ZTNorms {
  double K = 0.0;
  double G = 0.0;
  double H = 0.0;
  double F1 = 0.0;
  double F23 = 0.0;
  double F45 = 0.0;

  double total() const { return K + G + H + F1 + F23 + F45; }
};

/// W^{-1}_q surrogate: ||grad psi||_{L^q} with -Lap psi = f, psi = 0 on the
/// outer boundary and no jumps across the interface.
class DualNorm {
 public:
  DualNorm(const TwoPhaseDomain& d, const PhysParams& p, double q) : d_(d), q_(q), solver_(d, p, JumpWeight::Unit) {}

  double operator()(const ScalarField& f) const {
    EllipticData data = EllipticData::zeros(d_);
    data.f = f;
    const EllipticSolution s = solver_.solve(data);
    double acc = 0.0;
    const double V = d_.cell_volume();
    for (int j = 0; j < d_.ny(); ++j)
      for (int i = 0; i < d_.nx; ++i) {
        acc += V * std::pow(std::abs((s.psi(i, j) - s.psi(i - 1, j)) / d_.dx), q_);
        acc += V * std::pow(std::abs(solver_.face_dy(s, data, i, j + 1)), q_);
      }
    return std::pow(acc, 1.0 / q_);
  }

 private:
  TwoPhaseDomain d_;
  double q_;
  EllipticSolver solver_;
};

/// Z_T surrogate of a series of nonlinear data on a uniform time grid.
inline ZTNorms discrete_ZT_norm(const std::vector<NonlinearData>& n, double dt, const NormSpec& spec,
                                const TwoPhaseDomain& d, const PhysParams& p) {
  const GridNorms N(d, spec.q);
  const double q = spec.q;
  const std::size_t L = n.size();
  const DualNorm dual(d, p, q);
  std::vector<double> k(L), g(L), h(L), f1(L), f23(L), f45(L), dg(L > 1 ? L - 1 : 0);
  for (std::size_t m = 0; m < L; ++m) {
    const NonlinearData& a = n[m];
    k[m] = N.lq(a.K);
    g[m] = N.wkq(a.G, 1);
    h[m] = N.lq_trace(a.H1.x) + N.lq_trace(a.H1.y) + N.lq_trace(a.H2.x) + N.lq_trace(a.H2.y);
    f1[m] = N.lq(a.F1);
    f23[m] = N.lq_trace(a.F2_f) + N.lq_trace(a.F2_s) + N.lq_trace(a.F3);
    f45[m] = N.wkq(a.F4, 1) + N.wkq(a.F5, 1);
  }
  for (std::size_t m = 0; m + 1 < L; ++m) dg[m] = dual(n[m + 1].G - n[m].G) / dt;
  auto lt = [&](const std::vector<double>& x) { return L > 1 ? lq_time_norm(x, q, dt) : x[0]; };
  ZTNorms z;
  z.K = lt(k);
  z.G = lt(g);
  if (L > 1) {
    double acc = 0.0;
    for (double v : dg) acc += std::pow(v, q);
    z.G += std::pow(acc * dt, 1.0 / q);
  }
  z.H = lt(h);
  z.F1 = lt(f1);
  z.F23 = lt(f23);
  z.F45 = lt(f45);
  return z;
}

/// Nonlinear data of a state at every stored level.
inline std::vector<NonlinearData> nonlinear_series(const TwoPhaseDomain& d, const StateW& w, const KinematicsState& k,
                                                   const PhysParams& p, GForm gform = GForm::Pointwise) {
  if (k.levels() != w.size()) throw ConfigError("nonlinear_series: kinematics and state level counts differ");
  std::vector<NonlinearData> out;
  out.reserve(w.size());
  for (std::size_t m = 0; m < w.size(); ++m) out.push_back(assemble_nonlinear(d, w.levels[m], level_kinematics(k, m), p, gform));
  return out;
}

inline double yt_total(const YTNorms& y) { return y.v + y.pi + y.c + y.cstar + y.g; }

/// ||N(w1) - N(w2)||_{Z_T} / ||w1 - w2||_{Y_T} on the window spanned by the
/// states' time grid.
inline double contraction_probe(const StateW& w1, const StateW& w2, const KinematicsState& k1,
                                const KinematicsState& k2, const NormSpec& spec, const TwoPhaseDomain& d,
                                const PhysParams& p) {
  if (w1.size() != w2.size() || w1.t != w2.t) throw ConfigError("contraction_probe: states on different time grids");
  const double den = yt_total(discrete_YT_norm(w1 - w2, spec, d));
  if (!(den > 0.0)) throw ConfigError("contraction_probe: identical states (zero denominator)");
  const std::vector<NonlinearData> n1 = nonlinear_series(d, w1, k1, p), n2 = nonlinear_series(d, w2, k2, p);
  std::vector<NonlinearData> diff;
  diff.reserve(n1.size());
  for (std::size_t m = 0; m < n1.size(); ++m) diff.push_back(n1[m] - n2[m]);
  return discrete_ZT_norm(diff, w1.dt(), spec, d, p).total() / den;
}

}  // namespace fsgrowth
