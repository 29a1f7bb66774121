#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/state.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace fsgrowth {

/// Smooth cut-off in y: ((1 + cos(pi y / a)) / 2)^2 for y < a, zero beyond.
/// The support ends at a = support * h_f, so the concentration and its
/// normal flux vanish on the interface to all orders.
inline double bump_profile(double y, double a) {
  if (y >= a) return 0.0;
  const double b = 0.5 * (1.0 + std::cos(std::numbers::pi * y / a));
  return b * b;
}

/// Positive periodic amplitude a0 + sum_k a_k (1 + cos(k x + phi_k)) / 2.
struct PeriodicAmplitude {
  double a0 = 1.0;
  std::vector<double> a;
  std::vector<double> phase;

  double operator()(double x, double period) const {
    const double w = 2.0 * std::numbers::pi / period;
    double s = a0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * 0.5 * (1.0 + std::cos((k + 1) * w * x + phase[k]));
    return s;
  }
};

inline PeriodicAmplitude random_amplitude(std::uint64_t seed, int modes = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.0, 1.0), ph(0.0, 2.0 * std::numbers::pi);
  PeriodicAmplitude A;
  A.a0 = 0.2 + coef(rng);
  for (int k = 0; k < modes; ++k) {
    A.a.push_back(coef(rng) / (k + 1));
    A.phase.push_back(ph(rng));
  }
  return A;
}

/// Fluid concentration bump c0 = scale * A(x) b(y); zero in the solid,
/// zero velocity, c*0 = 0 and g0 = 1.
inline InitialData bump_initial_data(const TwoPhaseDomain& d, double scale, const PeriodicAmplitude& A,
                                     double support = 0.5) {
  if (!(support > 0.0 && support <= 0.75)) throw ConfigError("initial_data: support must lie in (0, 0.75]");
  InitialData w(d);
  const double a = support * d.h_f;
  sample(d, w.c0, [&](double x, double y) { return y < d.h_f ? scale * A(x, d.period) * bump_profile(y, a) : 0.0; });
  return w;
}

/// Named presets: "zero", "small-data", "growth", "random" (seeded).
inline InitialData preset_initial_data(const TwoPhaseDomain& d, const std::string& name, double amplitude = -1.0,
                                       std::uint64_t seed = 1) {
  if (name == "zero") return InitialData(d);
  if (name == "small-data") return bump_initial_data(d, amplitude > 0.0 ? amplitude : 1e-3, PeriodicAmplitude{});
  if (name == "growth") {
    PeriodicAmplitude A{0.5, {0.5}, {0.0}};
    return bump_initial_data(d, amplitude > 0.0 ? amplitude : 1.0, A);
  }
  if (name == "random") return bump_initial_data(d, amplitude > 0.0 ? amplitude : 1e-3, random_amplitude(seed));
  throw ConfigError("initial_data: unknown preset '" + name + "'");
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"zero", "small-data", "growth", "random"};
  return names;
}

}  // namespace fsgrowth
