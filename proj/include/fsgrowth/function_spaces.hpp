#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/interface.hpp"
#include "fsgrowth/state.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

namespace fsgrowth {

/// Exponents of the solution spaces.
struct NormSpec {
  double q = 5.0;
  double s = 0.75;
  int n_dim = 2;

  double q_prime() const { return q / (q - 1.0); }
  double r() const { return q * q / n_dim; }
  double delta() const { return std::min(1.0 / (2.0 * q_prime()), 1.0 / q - 1.0 / r()); }

  void validate_driver() const {
    if (!(q > n_dim + 2)) throw ConfigError("norm: q must exceed n + 2");
  }
  void validate_extension() const {
    if (!(s > 1.0 / q && s <= 1.0)) throw ConfigError("norm: s must lie in (1/q, 1]");
  }
};

namespace quad {

struct Rule {
  std::vector<double> x;  // nodes on [0, 1]
  std::vector<double> w;
};

/// Gauss-Legendre rule on [0, 1].
inline Rule gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = 0.5 * (1.0 - z);
    r.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

inline const Rule& rule(int n) {
  static const Rule r8 = gauss_legendre(8);
  static const Rule r12 = gauss_legendre(12);
  return n <= 8 ? r8 : r12;
}

}  // namespace quad

namespace detail {

/// Deterministic parallel sum: chunks are reduced in index order.
inline double parallel_sum(int n, const std::function<double(int)>& term, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  if (n < 64 || threads == 1) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += term(k);
    return s;
  }
  std::vector<double> partial(threads, 0.0);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      double s = 0.0;
      for (int k = static_cast<int>(t); k < n; k += static_cast<int>(threads)) s += term(k);
      partial[t] = s;
    });
  }
  for (auto& th : pool) th.join();
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace detail

/// |f|^q of the W^s_q(I; X) seminorm of the piecewise-linear interpolant of
/// uniformly spaced samples, integrated cell pair by cell pair. Diagonal
/// cells are integrated in closed form, adjacent cells in polar-type
/// coordinates around the shared node, and separated pairs by tensor Gauss.
template <typename NormFn>
inline double wsq_seminorm_pow(const std::vector<Eigen::VectorXd>& f, double s, double q, double dt,
                               NormFn&& norm) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("wsq_time_seminorm: s must lie in (0, 1)");
  if (f.size() < 2) throw ConfigError("wsq_time_seminorm: need at least two samples");
  if (!(dt > 0.0)) throw ConfigError("wsq_time_seminorm: dt must be positive");
  const int N = static_cast<int>(f.size()) - 1;
  const double h = dt;
  std::vector<Eigen::VectorXd> a(N);
  for (int k = 0; k < N; ++k) a[k] = (f[k + 1] - f[k]) / h;

  const double p = q * (1.0 - s) - 1.0;
  const double diag_w = 2.0 * std::pow(h, p + 2.0) / ((p + 1.0) * (p + 2.0));
  const double e = q * (1.0 - s) + 1.0;
  const auto& g = quad::rule(12);
  const auto& g8 = quad::rule(8);
  constexpr int kSub = 4;

  auto adjacent = [&](int k) {
    // cells k and k+1 sharing node k+1
    double acc = 0.0;
    for (int half = 0; half < 2; ++half) {
      for (int sub = 0; sub < kSub; ++sub) {
        const double lo = 0.5 * half + 0.5 * sub / kSub;
        const double len = 0.5 / kSub;
        for (std::size_t m = 0; m < g.x.size(); ++m) {
          const double lam = lo + len * g.x[m];
          const double R = h / std::max(lam, 1.0 - lam);
          const double nv = norm(Eigen::VectorXd(a[k] * (1.0 - lam) + a[k + 1] * lam));
          acc += len * g.w[m] * std::pow(nv, q) * std::pow(R, e) / e;
        }
      }
    }
    return acc;
  };

  auto far_row = [&](int k) {
    double acc = 0.0;
    for (int l = k + 2; l < N; ++l) {
      double pair = 0.0;
      for (std::size_t m1 = 0; m1 < g8.x.size(); ++m1) {
        const double t = (k + g8.x[m1]) * h;
        const Eigen::VectorXd ft = f[k] + (f[k + 1] - f[k]) * g8.x[m1];
        for (std::size_t m2 = 0; m2 < g8.x.size(); ++m2) {
          const double tau = (l + g8.x[m2]) * h;
          const Eigen::VectorXd fs = f[l] + (f[l + 1] - f[l]) * g8.x[m2];
          const double nv = norm(Eigen::VectorXd(ft - fs));
          pair += g8.w[m1] * g8.w[m2] * std::pow(nv, q) / std::pow(std::abs(t - tau), 1.0 + s * q);
        }
      }
      acc += pair * h * h;
    }
    return acc;
  };

  const double total = detail::parallel_sum(N, [&](int k) {
    double r = std::pow(norm(a[k]), q) * diag_w;
    if (k + 1 < N) r += 2.0 * adjacent(k);
    r += 2.0 * far_row(k);
    return r;
  });
  return total;
}

inline double wsq_time_seminorm(const std::vector<double>& samples, double s, double q, double dt) {
  std::vector<Eigen::VectorXd> f(samples.size(), Eigen::VectorXd(1));
  for (std::size_t k = 0; k < samples.size(); ++k) f[k](0) = samples[k];
  return std::pow(wsq_seminorm_pow(f, s, q, dt, [](const Eigen::VectorXd& v) { return std::abs(v(0)); }),
                  1.0 / q);
}

/// (int |f|^q)^{1/q} by the trapezoid rule on the samples.
inline double lq_time_norm(const std::vector<double>& f, double q, double dt) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double w = (k == 0 || k + 1 == f.size()) ? 0.5 : 1.0;
    acc += w * std::pow(std::abs(f[k]), q);
  }
  return std::pow(acc * dt, 1.0 / q);
}

/// (int |f'|^q)^{1/q} with f' piecewise constant from forward differences.
inline double lq_time_derivative_norm(const std::vector<double>& f, double q, double dt) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) acc += std::pow(std::abs((f[k + 1] - f[k]) / dt), q);
  return std::pow(acc * dt, 1.0 / q);
}

/// ||f||_{W^s_q(0,T)} = ||f||_{L^q} + |f|_{W^s_q}; s = 1 uses the derivative.
inline double wsq_time_norm(const std::vector<double>& f, double s, double q, double dt) {
  const double lq = lq_time_norm(f, q, dt);
  if (s == 1.0) return lq + lq_time_derivative_norm(f, q, dt);
  return lq + wsq_time_seminorm(f, s, q, dt);
}

/// Samples of the even extension about T on [0, 3T]; zero beyond 2T.
inline std::vector<double> extend_even(const std::vector<double>& u, double s, double q) {
  if (u.size() < 2) throw ConfigError("extend_even: need at least two samples");
  double scale = 0.0;
  for (double v : u) scale = std::max(scale, std::abs(v));
  if (s > 1.0 / q && std::abs(u.front()) > 1e-12 * std::max(scale, 1.0))
    throw ConfigError("extend_even: u(0) must vanish when s > 1/q");
  const std::size_t N = u.size() - 1;
  std::vector<double> out(3 * N + 1, 0.0);
  for (std::size_t k = 0; k <= N; ++k) {
    out[k] = u[k];
    out[2 * N - k] = u[k];
  }
  out[2 * N] = 0.0;
  return out;
}

/// W^s_q(0, inf) norm of the extension of u, evaluated on [0, 2T] with the
/// zero tail integrated in closed form.
inline double extended_norm(const std::vector<double>& u, double s, double q, double dt) {
  const std::vector<double> ext = extend_even(u, s, q);
  const std::size_t N = u.size() - 1;
  std::vector<double> on2T(ext.begin(), ext.begin() + 2 * N + 1);
  const double lq = lq_time_norm(on2T, q, dt);
  if (s == 1.0) return lq + lq_time_derivative_norm(on2T, q, dt);
  const double semi_pow = std::pow(wsq_time_seminorm(on2T, s, q, dt), q);
  // 2/(sq) int_0^{2T} |u~(t)|^q (2T - t)^{-sq} dt
  const auto& g = quad::rule(12);
  const std::size_t M = 2 * N;
  double tail = 0.0;
  for (std::size_t k = 0; k + 1 < M; ++k) {
    for (std::size_t m = 0; m < g.x.size(); ++m) {
      const double val = on2T[k] + (on2T[k + 1] - on2T[k]) * g.x[m];
      const double r = (static_cast<double>(M - k) - g.x[m]) * dt;
      tail += dt * g.w[m] * std::pow(std::abs(val), q) * std::pow(r, -s * q);
    }
  }
  const double b = on2T[M - 1];
  tail += std::pow(std::abs(b), q) * std::pow(dt, 1.0 - s * q) / (q * (1.0 - s) + 1.0);
  tail *= 2.0 / (s * q);
  return lq + std::pow(semi_pow + tail, 1.0 / q);
}

inline double extension_ratio(const std::vector<double>& u, double s, double q, double dt) {
  const double base = wsq_time_norm(u, s, q, dt);
  if (!(base > 0.0)) throw ConfigError("extension_ratio: zero input");
  return extended_norm(u, s, q, dt) / base;
}

/// (4 + 24 theta / (sq (sq - 1)))^{1/q} with theta = 3^{1 - (s - 1/q)}.
inline double extension_constant_bound(double s, double q) {
  if (!(q >= 1.0)) throw ConfigError("extension_constant_bound: q must be at least 1");
  if (!(s > 1.0 / q && s < 1.0)) throw ConfigError("extension_constant_bound: s must lie in (1/q, 1)");
  const double theta = std::pow(3.0, 1.0 - (s - 1.0 / q));
  return std::pow(4.0 + 24.0 * theta / (s * q * (s * q - 1.0)), 1.0 / q);
}

// ---------------------------------------------------------------------------
// Grid norms

/// Piecewise grid Sobolev norms. Differences in y never straddle the
/// interface; x is periodic.
class GridNorms {
 public:
  GridNorms(const TwoPhaseDomain& d, double q) : d_(d), q_(q) {}

  double q() const { return q_; }

  /// sum over derivative orders <= k of L^q norms of difference quotients.
  double wkq(const ScalarField& f, int k) const {
    double total = lq(f);
    if (k >= 1) total += diff_norm(f, 1, 0) + diff_norm(f, 0, 1);
    if (k >= 2) total += diff_norm(f, 2, 0) + diff_norm(f, 0, 2) + diff_norm(f, 1, 1);
    return total;
  }

  double lq(const ScalarField& f) const {
    double acc = 0.0;
    for (double v : f.values()) acc += std::pow(std::abs(v), q_);
    return std::pow(acc * d_.cell_volume(), 1.0 / q_);
  }

  double lq_trace(const std::vector<double>& v) const {
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::abs(x), q_);
    return std::pow(acc * d_.dx, 1.0 / q_);
  }

  double wkq(const MacVelocity& v, int k) const { return wkq(v.ux, k) + wkq(v.uy, k); }
  double lq(const MacVelocity& v) const { return lq(v.ux) + lq(v.uy); }

 private:
  // mixed difference quotient of order (ox, oy); y-stencils stay inside one phase
  double diff_norm(const ScalarField& f, int ox, int oy) const {
    const bool faces = f.staggering() == Staggering::YFace || f.staggering() == Staggering::Node;
    auto dxq = [&](int i, int j) -> double {
      if (ox == 0) return f(i, j);
      if (ox == 1) return (f(i + 1, j) - f(i, j)) / d_.dx;
      return (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (d_.dx * d_.dx);
    };
    double acc = 0.0;
    if (oy == 0) {
      f.for_each([&](int i, int j, const double&) { acc += std::pow(std::abs(dxq(i, j)), q_); });
      return std::pow(acc * d_.cell_volume(), 1.0 / q_);
    }
    const int segs[2][2] = {{0, faces ? d_.ny_f : d_.ny_f - 1}, {d_.ny_f, faces ? d_.ny() : d_.ny() - 1}};
    for (const auto& seg : segs) {
      const int lo = std::max(seg[0], f.row_begin());
      const int hi = std::min(seg[1], f.row_end() - 1);
      for (int j = lo; j <= hi; ++j) {
        for (int i = 0; i < d_.nx; ++i) {
          double v;
          if (oy == 1) {
            if (j + 1 > hi) continue;
            v = (dxq(i, j + 1) - dxq(i, j)) / d_.dy;
          } else {
            if (j - 1 < lo || j + 1 > hi) continue;
            v = (dxq(i, j + 1) - 2.0 * dxq(i, j) + dxq(i, j - 1)) / (d_.dy * d_.dy);
          }
          acc += std::pow(std::abs(v), q_);
        }
      }
    }
    return std::pow(acc * d_.cell_volume(), 1.0 / q_);
  }

  TwoPhaseDomain d_;
  double q_;
};

/// (int_0^T a(t)^q dt)^{1/q} with a sampled per level, trapezoid rule.
inline double lq_in_time(const std::vector<double>& a, double q, double dt) { return lq_time_norm(a, q, dt); }

/// Component-wise surrogate Y_T norms.
struct YTNorms {
  double v = 0.0;
  double pi = 0.0;
  double c = 0.0;
  double cstar = 0.0;
  double g = 0.0;

  double max() const { return std::max({v, pi, c, cstar, g}); }
};

inline YTNorms discrete_YT_norm(const StateW& w, const NormSpec& spec, const TwoPhaseDomain& d) {
  const GridNorms N(d, spec.q);
  const double q = spec.q;
  const std::size_t L = w.levels.size();
  const double dt = L > 1 ? w.t[1] - w.t[0] : 1.0;
  std::vector<double> v2(L), c2(L), pi1(L), cs1(L), g1(L);
  std::vector<double> dv(L > 0 ? L - 1 : 0), dc(dv.size()), dcs(dv.size()), dg(dv.size());
  for (std::size_t m = 0; m < L; ++m) {
    const auto& s = w.levels[m];
    v2[m] = N.wkq(s.v, 2);
    c2[m] = N.wkq(s.c, 2);
    pi1[m] = N.wkq(s.pi, 1) + N.lq_trace(jump_at_interface(d, s.pi));
    cs1[m] = N.wkq(s.cstar, 1);
    g1[m] = N.wkq(s.g, 1);
  }
  for (std::size_t m = 0; m + 1 < L; ++m) {
    const auto& a = w.levels[m];
    const auto& b = w.levels[m + 1];
    dv[m] = N.lq(b.v - a.v) / dt;
    dc[m] = N.lq(b.c - a.c) / dt;
    dcs[m] = N.wkq(b.cstar - a.cstar, 1) / dt;
    dg[m] = N.wkq(b.g - a.g, 1) / dt;
  }
  auto pc = [&](const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += std::pow(v, q);
    return std::pow(acc * dt, 1.0 / q);
  };
  YTNorms out;
  if (L == 1) {
    out.v = v2[0];
    out.c = c2[0];
    out.pi = pi1[0];
    out.cstar = cs1[0];
    out.g = g1[0];
    return out;
  }
  out.v = lq_in_time(v2, q, dt) + pc(dv);
  out.c = lq_in_time(c2, q, dt) + pc(dc);
  out.pi = lq_in_time(pi1, q, dt);
  out.cstar = lq_in_time(cs1, q, dt) + pc(dcs);
  out.g = lq_in_time(g1, q, dt) + pc(dg);
  return out;
}

}  // namespace fsgrowth
