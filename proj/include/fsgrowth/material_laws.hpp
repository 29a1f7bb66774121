#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/interface.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/tensor.hpp"

namespace fsgrowth {

namespace law {

/// -pi I + nu (grad v + grad v^T)
template <int N>
inline Mat<N> linear_S(const Mat<N>& grad_v, double pi, double nu) {
  return -pi * Mat<N>::Identity() + nu * (grad_v + grad_v.transpose());
}

/// -pi I + nu (F^{-1} grad v + grad v^T F^{-T})
template <int N>
inline Mat<N> fluid_hat(const Mat<N>& grad_v, double pi, const Mat<N>& Finv, double nu) {
  return -pi * Mat<N>::Identity() + nu * (Finv * grad_v + grad_v.transpose() * Finv.transpose());
}

/// -pi I + mu (F F^T / g^2 - I)
template <int N>
inline Mat<N> solid_elastic(double pi, const Mat<N>& F, double g, double mu) {
  if (!(g > 0.0)) throw GrowthBoundViolation("stress_solid_elastic: growth metric must be positive");
  return -pi * Mat<N>::Identity() + mu * (F * F.transpose() / (g * g) - Mat<N>::Identity());
}

/// nu (grad v + grad v^T) F^T
template <int N>
inline Mat<N> solid_viscous(const Mat<N>& grad_v, const Mat<N>& F, double nu) {
  return nu * (grad_v + grad_v.transpose()) * F.transpose();
}

}  // namespace law

/// Stresses at cell centres.
struct StressBundle {
  TensorField sigma_f;    // fluid
  TensorField sigma_s_e;  // solid
  TensorField sigma_s_v;  // solid
  TensorField S_lin;      // both
};

inline TensorField stress_linear_S(const TwoPhaseDomain& d, const MacVelocity& v, const ScalarField& pi,
                                   const PhysParams& p) {
  const TensorField G = grad_velocity(d, v);
  TensorField S(d, Staggering::Cell, pi.tag());
  S.for_each([&](int i, int j, Mat2& out) {
    out = law::linear_S<2>(G(i, j), pi(i, j), p.nu(d.phase_of_row(j)));
  });
  return S;
}

inline TensorField stress_fluid_hat(const TwoPhaseDomain& d, const MacVelocity& v, const ScalarField& pi,
                                    const TensorField& Finv, const PhysParams& p) {
  const TensorField G = grad_velocity(d, v);
  TensorField S(d, Staggering::Cell, Phase::Fluid);
  S.for_each([&](int i, int j, Mat2& out) { out = law::fluid_hat<2>(G(i, j), pi(i, j), Finv(i, j), p.nu_f); });
  return S;
}

inline TensorField stress_solid_elastic(const TwoPhaseDomain& d, const ScalarField& pi, const TensorField& F,
                                        const ScalarField& g, const PhysParams& p) {
  TensorField S(d, Staggering::Cell, Phase::Solid);
  S.for_each([&](int i, int j, Mat2& out) { out = law::solid_elastic<2>(pi(i, j), F(i, j), g(i, j), p.mu_s); });
  return S;
}

inline TensorField stress_solid_viscous(const TwoPhaseDomain& d, const TensorField& grad_v, const TensorField& F,
                                        const PhysParams& p) {
  TensorField S(d, Staggering::Cell, Phase::Solid);
  S.for_each([&](int i, int j, Mat2& out) { out = law::solid_viscous<2>(grad_v(i, j), F(i, j), p.nu_s); });
  return S;
}

inline StressBundle evaluate_stresses(const TwoPhaseDomain& d, const MacVelocity& v, const ScalarField& pi,
                                      const TensorField& F, const TensorField& Finv, const ScalarField& g,
                                      const PhysParams& p) {
  const TensorField G = grad_velocity(d, v);
  StressBundle b;
  b.S_lin = stress_linear_S(d, v, pi, p);
  b.sigma_f = stress_fluid_hat(d, v, pi, Finv, p);
  b.sigma_s_e = stress_solid_elastic(d, pi, F, g, p);
  b.sigma_s_v = stress_solid_viscous(d, G, F, p);
  return b;
}

}  // namespace fsgrowth
