#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/interface.hpp"
#include "fsgrowth/log.hpp"
#include "fsgrowth/stencils.hpp"
#include "fsgrowth/tensor.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace fsgrowth {

enum class TimeQuadrature { Trapezoid, LeftEndpoint };

/// Deformation data per stored time level, all at cell centres.
struct KinematicsState {
  std::vector<double> time_levels;
  std::vector<TensorField> F;
  std::vector<TensorField> Finv;
  std::vector<ScalarField> J;
  std::vector<TensorField> Fe;  // solid only

  std::size_t levels() const { return F.size(); }
};

/// F_new = F_prev + dt * grad_v.
inline TensorField accumulate_F(const TensorField& F_prev, const TensorField& grad_v, double dt) {
  if (!(dt > 0.0)) throw ConfigError("accumulate_F: dt must be positive");
  if (!F_prev.same_shape(grad_v)) throw ConfigError("accumulate_F: staggering mismatch");
  TensorField out = F_prev;
  for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] += dt * grad_v.values()[k];
  return out;
}

/// F_new = F_prev + dt/2 (grad_v_prev + grad_v_new).
inline TensorField accumulate_F(const TensorField& F_prev, const TensorField& grad_v_prev,
                                const TensorField& grad_v_new, double dt) {
  if (!(dt > 0.0)) throw ConfigError("accumulate_F: dt must be positive");
  if (!F_prev.same_shape(grad_v_prev) || !F_prev.same_shape(grad_v_new))
    throw ConfigError("accumulate_F: staggering mismatch");
  TensorField out = F_prev;
  for (std::size_t k = 0; k < out.size(); ++k)
    out.values()[k] += 0.5 * dt * (grad_v_prev.values()[k] + grad_v_new.values()[k]);
  return out;
}

inline constexpr double kSingularDet = 1e-10;
inline constexpr double kNeumannTermTol = 1e-14;

/// Inverse of a deformation gradient. Inside the smallness regime
/// ||F - I||_F <= 1/(2 M_q) the Neumann series is summed; otherwise the
/// inverse is formed directly and a warning is emitted.
template <int N>
inline Mat<N> invert_F(const Mat<N>& F, double M_q) {
  const double det = F.determinant();
  if (!(std::abs(det) >= kSingularDet)) {
    std::ostringstream os;
    os << "singular deformation: |det F| = " << std::abs(det);
    throw SingularDeformation(os.str());
  }
  const Mat<N> X = Mat<N>::Identity() - F;
  if (M_q > 0.0 && X.norm() <= 1.0 / (2.0 * M_q)) {
    Mat<N> sum = Mat<N>::Identity();
    Mat<N> term = Mat<N>::Identity();
    for (int k = 0; k < 200; ++k) {
      term = term * X;
      if (term.norm() < kNeumannTermTol) {
        sum += term;
        break;
      }
      sum += term;
    }
    return sum;
  }
  std::ostringstream os;
  os << "invert_F outside the Neumann regime (||F-I|| = " << X.norm() << ", bound " << 1.0 / (2.0 * M_q)
     << "); using direct inversion";
  warn(os.str());
  return F.inverse();
}

/// Empirical multiplication constant of the grid W^1_q norm,
/// max ||fg|| / (||f|| ||g||) over random trigonometric samples.
inline double grid_w1q_norm(const TwoPhaseDomain& d, const ScalarField& f, double q) {
  const VectorField g = grad_cell(d, f);
  double a = 0.0, b = 0.0;
  f.for_each([&](int i, int j, const double& v) {
    a += std::pow(std::abs(v), q);
    b += std::pow(g(i, j).norm(), q);
  });
  const double w = d.cell_volume();
  return std::pow(a * w, 1.0 / q) + std::pow(b * w, 1.0 / q);
}

inline double estimate_multiplication_constant(const TwoPhaseDomain& d, double q, int samples = 24,
                                               unsigned seed = 20240601u) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> mode(0, 3);
  auto random_field = [&]() {
    ScalarField f(d, Staggering::Cell, Phase::Both);
    const double a0 = amp(rng), a1 = amp(rng), a2 = amp(rng);
    const int kx = mode(rng), ky = mode(rng);
    const double L = d.height();
    sample(d, f, [&](double x, double y) {
      return a0 + a1 * std::cos(kx * 2.0 * M_PI * x / d.period) * std::cos(ky * M_PI * y / L) +
             a2 * std::sin((kx + 1) * 2.0 * M_PI * x / d.period);
    });
    return f;
  };
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ScalarField f = random_field();
    const ScalarField g = random_field();
    ScalarField fg = f;
    for (std::size_t k = 0; k < fg.size(); ++k) fg.values()[k] *= g.values()[k];
    const double den = grid_w1q_norm(d, f, q) * grid_w1q_norm(d, g, q);
    if (den > 0.0) best = std::max(best, grid_w1q_norm(d, fg, q) / den);
  }
  return best;
}

/// max over interior levels of |d(det F)/dt - tr(F^{-1} dF/dt) det F| using
/// centred differences on a uniformly sampled path.
template <int N>
inline double det_time_derivative_residual(const std::vector<Mat<N>>& path, double dt) {
  if (path.size() < 3) throw ConfigError("det_time_derivative_residual: need at least 3 levels");
  double worst = 0.0;
  for (std::size_t m = 1; m + 1 < path.size(); ++m) {
    const double det = path[m].determinant();
    if (std::abs(det) < kSingularDet) throw SingularDeformation("det_time_derivative_residual: singular F");
    const double ddet = (path[m + 1].determinant() - path[m - 1].determinant()) / (2.0 * dt);
    const Mat<N> dF = (path[m + 1] - path[m - 1]) / (2.0 * dt);
    const double rhs = (path[m].inverse() * dF).trace() * det;
    worst = std::max(worst, std::abs(ddet - rhs));
  }
  return worst;
}

/// J sigma F^{-T}.
template <int N>
inline Mat<N> piola_transform(const Mat<N>& sigma, const Mat<N>& F, double J) {
  if (!(J > 0.0)) throw SingularDeformation("piola_transform: J must be positive");
  if (std::abs(F.determinant()) < kSingularDet) throw SingularDeformation("piola_transform: singular F");
  return J * sigma * F.inverse().transpose();
}

/// Max-norm of the cell-centred divergence of J F^{-T}, evaluated phase by
/// phase with one-sided differences at phase boundaries and on the symmetry
/// plane (the rows of J F^{-T} have no parity there).
inline double piola_identity_residual(const TwoPhaseDomain& d, const TensorField& F, const ScalarField& J) {
  TensorField P(d, Staggering::Cell, F.tag());
  P.for_each([&](int i, int j, Mat2& p) { p = J(i, j) * F(i, j).inverse().transpose(); });
  auto ddy = [&](int i, int j, int a) {
    auto f = [&](int jj) { return P(i, jj)(a, 1); };
    const int top = j < d.ny_f ? d.ny_f - 1 : d.ny() - 1;
    const int bot = j < d.ny_f ? 0 : d.ny_f;
    if (j == top) return stencil::backward3(f(j), f(j - 1), f(j - 2), d.dy);
    if (j == bot) return stencil::forward3(f(j), f(j + 1), f(j + 2), d.dy);
    return stencil::central(f(j - 1), f(j + 1), d.dy);
  };
  double worst = 0.0;
  P.for_each([&](int i, int j, const Mat2&) {
    for (int a = 0; a < 2; ++a) {
      const double ddx = stencil::central(P(i - 1, j)(a, 0), P(i + 1, j)(a, 0), d.dx);
      worst = std::max(worst, std::abs(ddx + ddy(i, j, a)));
    }
  });
  return worst;
}

/// Elastic part F / g of the growth split F = Fe (g I).
template <int N>
inline Mat<N> growth_decompose(const Mat<N>& F, double g) {
  if (!(g > 0.0)) throw GrowthBoundViolation("growth_decompose: growth metric must be positive");
  return F / g;
}

/// Kinematics over a velocity history sampled at uniform steps dt. F at the
/// first level is F0 (identity at t = 0); later levels accumulate the
/// cell-centred velocity gradient.
inline KinematicsState build_kinematics(const TwoPhaseDomain& d, const std::vector<MacVelocity>& v,
                                        const std::vector<ScalarField>& g, double t0, double dt,
                                        const TensorField& F0, double M_q,
                                        TimeQuadrature rule = TimeQuadrature::Trapezoid) {
  KinematicsState k;
  const std::size_t L = v.size();
  k.time_levels.resize(L);
  k.F.reserve(L);
  TensorField grad_prev = grad_velocity(d, v[0]);
  k.F.push_back(F0);
  for (std::size_t m = 1; m < L; ++m) {
    TensorField grad_new = grad_velocity(d, v[m]);
    k.F.push_back(rule == TimeQuadrature::Trapezoid ? accumulate_F(k.F.back(), grad_prev, grad_new, dt)
                                                    : accumulate_F(k.F.back(), grad_prev, dt));
    grad_prev = std::move(grad_new);
  }
  for (std::size_t m = 0; m < L; ++m) {
    k.time_levels[m] = t0 + dt * static_cast<double>(m);
    TensorField Finv(d, Staggering::Cell, Phase::Both);
    ScalarField J(d, Staggering::Cell, Phase::Both);
    Finv.for_each([&](int i, int j, Mat2& out) {
      out = invert_F<2>(k.F[m](i, j), M_q);
      J(i, j) = k.F[m](i, j).determinant();
    });
    TensorField Fe(d, Staggering::Cell, Phase::Solid);
    Fe.for_each([&](int i, int j, Mat2& out) { out = growth_decompose<2>(k.F[m](i, j), g[m](i, j)); });
    k.Finv.push_back(std::move(Finv));
    k.J.push_back(std::move(J));
    k.Fe.push_back(std::move(Fe));
  }
  return k;
}

inline TensorField identity_tensor_field(const TwoPhaseDomain& d) {
  return TensorField(d, Staggering::Cell, Phase::Both, Mat2::Identity());
}

}  // namespace fsgrowth
