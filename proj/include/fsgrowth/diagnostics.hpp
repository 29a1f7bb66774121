#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/fixed_point.hpp"
#include "fsgrowth/function_spaces.hpp"
#include "fsgrowth/kinematics.hpp"
#include "fsgrowth/nonlinear_terms.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/presets.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace fsgrowth::diag {

/// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::log(h[k]), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Contraction ladder

/// Smooth random space-time perturbation of a reference state. Every
/// component is a product of low-order trigonometric modes with a factor t,
/// so both members of a pair share their initial data.
struct SmoothMode {
  double a = 0.0;
  int kx = 0;
  double phase = 0.0;
  double ky = 0.0;
};

inline SmoothMode random_mode(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> K(0, 2);
  return {U(rng), K(rng), P(rng), 0.5 + 0.5 * (U(rng) + 1.0)};
}

inline double eval_mode(const SmoothMode& m, double x, double y, double period) {
  return m.a * std::cos(m.kx * 2.0 * std::numbers::pi * x / period + m.phase) * std::cos(m.ky * y);
}

/// Random iterate on [0, T] with `steps` steps, starting from w0.
inline StateW random_smooth_iterate(const TwoPhaseDomain& d, const InitialData& w0, double T, int steps,
                                    std::mt19937_64& rng, double amplitude) {
  const SmoothMode mu = random_mode(rng), mv = random_mode(rng), mp = random_mode(rng), mc = random_mode(rng),
                   ms = random_mode(rng), mg = random_mode(rng);
  const double L = d.period;
  StateW w;
  const double dt = T / steps;
  for (int m = 0; m <= steps; ++m) {
    const double t = m * dt;
    LevelState s = level_from_initial(d, w0);
    const double a = amplitude * t;
    s.v.ux.for_each([&](int i, int j, double& v) { v += a * eval_mode(mu, d.x_face(i), d.y_center(j), L); });
    for (int i = 0; i < d.nx; ++i) s.v.ux_gamma[i] += a * eval_mode(mu, d.x_face(i), d.h_f, L);
    // uy vanishes on the symmetry plane
    s.v.uy.for_each([&](int i, int j, double& v) {
      const double y = d.y_face(j);
      v += a * eval_mode(mv, d.x_center(i), y, L) * std::sin(y);
    });
    s.pi.for_each([&](int i, int j, double& v) { v += a * eval_mode(mp, d.x_center(i), d.y_center(j), L); });
    s.c.for_each([&](int i, int j, double& v) { v += a * eval_mode(mc, d.x_center(i), d.y_center(j), L); });
    s.cstar.for_each([&](int i, int j, double& v) { v += a * eval_mode(ms, d.x_center(i), d.y_center(j), L); });
    s.g.for_each([&](int i, int j, double& v) { v += a * eval_mode(mg, d.x_center(i), d.y_center(j), L); });
    w.t.push_back(t);
    w.levels.push_back(std::move(s));
  }
  return w;
}

struct LadderRow {
  double T = 0.0;
  double ratio = 0.0;
};

struct LadderResult {
  std::uint64_t seed = 0;
  std::vector<LadderRow> rows;

  bool strictly_decreasing() const {
    for (std::size_t k = 1; k < rows.size(); ++k)
      if (!(rows[k].ratio < rows[k - 1].ratio)) return false;
    return true;
  }
  double slope() const {
    std::vector<double> h, e;
    for (const auto& r : rows) {
      h.push_back(r.T);
      e.push_back(r.ratio);
    }
    return loglog_slope(h, e);
  }
};

/// contraction_probe over a dyadic ladder of windows, one random pair per
/// seed. The pair is generated once on the longest window and restricted.
inline LadderResult contraction_ladder(const TwoPhaseDomain& d, const PhysParams& p, const NormSpec& spec,
                                       const InitialData& w0, std::uint64_t seed,
                                       const std::vector<double>& Ts = {0.4, 0.2, 0.1, 0.05}, int steps = 8,
                                       double amplitude = 0.2) {
  LadderResult out;
  out.seed = seed;
  const double M_q = estimate_multiplication_constant(d, spec.q);
  for (double T : Ts) {
    std::mt19937_64 rng(seed);
    const StateW w1 = random_smooth_iterate(d, w0, T, steps, rng, amplitude);
    const StateW w2 = random_smooth_iterate(d, w0, T, steps, rng, amplitude);
    const TensorField I = identity_tensor_field(d);
    const KinematicsState k1 = kinematics_of(d, w1, I, M_q, TimeQuadrature::Trapezoid);
    const KinematicsState k2 = kinematics_of(d, w2, I, M_q, TimeQuadrature::Trapezoid);
    out.rows.push_back({T, contraction_probe(w1, w2, k1, k2, spec, d, p)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extension sweep

struct ExtensionRow {
  double s = 0.0;
  double q = 0.0;
  double T = 0.0;
  int input = 0;
  double ratio = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Random cubic in t/T with u(0) = 0, sampled on `n` steps.
inline std::vector<double> random_polynomial(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a1 = U(rng), a2 = U(rng), a3 = U(rng);
  std::vector<double> u(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double r = static_cast<double>(k) / n;
    u[k] = a1 * r + a2 * r * r + a3 * r * r * r;
  }
  return u;
}

inline std::vector<ExtensionRow> extension_sweep(const std::vector<double>& ss = {0.6, 0.75, 0.9},
                                                 const std::vector<double>& qs = {3.0, 4.0, 6.0},
                                                 const std::vector<double>& Ts = {1e-2, 1e-1, 1.0, 10.0},
                                                 int inputs = 5, int samples = 64, double slack = 0.05,
                                                 std::uint64_t seed = 7) {
  std::vector<ExtensionRow> rows;
  for (double s : ss)
    for (double q : qs) {
      const double C = extension_constant_bound(s, q);
      for (double T : Ts) {
        std::mt19937_64 rng(seed);
        for (int k = 0; k < inputs; ++k) {
          const std::vector<double> u = random_polynomial(rng, samples);
          const double r = extension_ratio(u, s, q, T / samples);
          rows.push_back({s, q, T, k, r, C, r <= C * (1.0 + slack)});
        }
      }
    }
  return rows;
}

/// |ratio - 2^{1/q}| for u(t) = t and s = 1.
inline double extension_s1_defect(double q, double T = 1.0, int samples = 64) {
  std::vector<double> u(samples + 1);
  for (int k = 0; k <= samples; ++k) u[k] = T * k / samples;
  return std::abs(extension_ratio(u, 1.0, q, T / samples) - std::pow(2.0, 1.0 / q));
}

// ---------------------------------------------------------------------------
// Kinematic identities

inline TwoPhaseDomain square_domain(int n) {
  GeometryConfig g;
  g.nx = n;
  g.ny_f = n / 2;
  g.ny_s = n / 2;
  g.h_f = 0.5;
  g.h_s = 0.5;
  g.period = 1.0;
  return build_strip_domain(g);
}

/// Smooth two-dimensional test velocity with uy = 0 on the symmetry plane.
inline MacVelocity smooth_velocity(const TwoPhaseDomain& d) {
  const double w = 2.0 * std::numbers::pi / d.period;
  return sample_velocity(
      d, [&](double x, double y) { return 0.5 * std::sin(w * x) / w * std::cos(2.0 * y) + 0.25 * y * y; },
      [&](double x, double y) { return 0.5 * std::cos(w * x) / w * std::sin(1.5 * y); });
}

/// Piola residual of F = I + tau grad v (one accumulated step, J = det F).
inline double piola_residual_at(int n, double tau = 0.5) {
  const TwoPhaseDomain d = square_domain(n);
  const TensorField F = accumulate_F(identity_tensor_field(d), grad_velocity(d, smooth_velocity(d)), tau);
  ScalarField J(d, Staggering::Cell, Phase::Both);
  J.for_each([&](int i, int j, double& v) { v = F(i, j).determinant(); });
  return piola_identity_residual(d, F, J);
}

/// det-derivative residual along F(t) = I + sin(t) A + t^2 B on [0, 1].
inline double det_residual_at(int steps) {
  Mat2 A, B;
  A << 0.3, 0.5, -0.2, 0.1;
  B << 0.1, -0.4, 0.25, 0.2;
  const double dt = 1.0 / steps;
  std::vector<Mat2> path;
  for (int m = 0; m <= steps; ++m) {
    const double t = m * dt;
    path.push_back(Mat2::Identity() + std::sin(t) * A + t * t * B);
  }
  return det_time_derivative_residual<2>(path, dt);
}

/// sup_t ||F^{-1} - I||_{W^1_q} over [0, T] for the fixed smooth velocity.
inline double finv_sup_norm(const TwoPhaseDomain& d, double T, double q, int steps = 8) {
  const MacVelocity v = smooth_velocity(d);
  std::vector<MacVelocity> vs(steps + 1, v);
  std::vector<ScalarField> gs(steps + 1, ScalarField(d, Staggering::Cell, Phase::Solid, 1.0));
  const KinematicsState k =
      build_kinematics(d, vs, gs, 0.0, T / steps, identity_tensor_field(d), estimate_multiplication_constant(d, q));
  const GridNorms N(d, q);
  double sup = 0.0;
  for (const auto& Finv : k.Finv) {
    double total = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        ScalarField c(d, Staggering::Cell, Phase::Both);
        c.for_each([&](int i, int j, double& x) { x = Finv(i, j)(a, b) - (a == b ? 1.0 : 0.0); });
        total += N.wkq(c, 1);
      }
    sup = std::max(sup, total);
  }
  return sup;
}

/// max ||F Finv - I|| over a trajectory of accumulated deformations.
inline double inversion_defect(const TwoPhaseDomain& d, double T, int steps = 8) {
  const MacVelocity v = smooth_velocity(d);
  std::vector<MacVelocity> vs(steps + 1, v);
  std::vector<ScalarField> gs(steps + 1, ScalarField(d, Staggering::Cell, Phase::Solid, 1.0));
  const KinematicsState k =
      build_kinematics(d, vs, gs, 0.0, T / steps, identity_tensor_field(d), estimate_multiplication_constant(d, 5.0));
  double worst = 0.0;
  for (std::size_t m = 0; m < k.levels(); ++m)
    k.F[m].for_each([&](int i, int j, const Mat2& F) {
      worst = std::max(worst, max_abs<2>(Mat2(F * k.Finv[m](i, j) - Mat2::Identity())));
    });
  return worst;
}

struct KinematicsReport {
  std::vector<double> h;
  std::vector<double> piola;
  double piola_slope = 0.0;
  std::vector<double> det_dt;
  std::vector<double> det;
  double det_slope = 0.0;
  double inversion = 0.0;
  std::vector<double> Ts;
  std::vector<double> finv;
  double finv_slope = 0.0;
  double finv_slope_target = 0.0;

  bool pass() const {
    bool dec = true;
    for (std::size_t k = 1; k < finv.size(); ++k) dec = dec && finv[k] < finv[k - 1];
    return piola_slope >= 1.8 && det_slope >= 1.8 && inversion <= 1e-12 && dec && finv_slope >= finv_slope_target;
  }
};

inline KinematicsReport kinematics_report(double q = 5.0, int n_dim = 2) {
  KinematicsReport r;
  for (int n : {16, 32, 64}) {
    r.h.push_back(1.0 / n);
    r.piola.push_back(piola_residual_at(n));
  }
  r.piola_slope = loglog_slope(r.h, r.piola);
  for (int steps : {20, 40, 80}) {
    r.det_dt.push_back(1.0 / steps);
    r.det.push_back(det_residual_at(steps));
  }
  r.det_slope = loglog_slope(r.det_dt, r.det);
  const TwoPhaseDomain d = square_domain(32);
  r.inversion = inversion_defect(d, 0.4);
  r.Ts = {0.4, 0.2, 0.1, 0.05};
  for (double T : r.Ts) r.finv.push_back(finv_sup_norm(d, T, q));
  r.finv_slope = loglog_slope(r.Ts, r.finv);
  NormSpec spec;
  spec.q = q;
  spec.n_dim = n_dim;
  r.finv_slope_target = 0.9 / spec.q_prime();
  return r;
}

}  // namespace fsgrowth::diag
