#pragma once

#include "fsgrowth/fsgrowth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <random>

namespace fsgrowth::testing {

inline TwoPhaseDomain strip(int nx = 16, int ny_f = 8, int ny_s = 8, double h_f = 1.0, double h_s = 1.0) {
  GeometryConfig g;
  g.nx = nx;
  g.ny_f = ny_f;
  g.ny_s = ny_s;
  g.h_f = h_f;
  g.h_s = h_s;
  return build_strip_domain(g);
}

inline double max_diff(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline Mat2 mat(double a, double b, double c, double d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

inline Mat2 random_mat(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> U(-scale, scale);
  return mat(U(rng), U(rng), U(rng), U(rng));
}

/// Silences library warnings for the lifetime of the object.
struct QuietWarnings {
  QuietWarnings() { set_warning_sink([](const std::string&) {}); }
  ~QuietWarnings() {
    set_warning_sink([](const std::string& m) { std::cerr << "fsgrowth warning: " << m << '\n'; });
  }
};

}  // namespace fsgrowth::testing
