#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"

#include <algorithm>
#include <vector>

namespace fsgrowth {

/// The unknowns at one time level.
struct LevelState {
  MacVelocity v;
  ScalarField pi;     // both
  ScalarField c;      // both
  ScalarField cstar;  // solid
  ScalarField g;      // solid

  LevelState() = default;
  explicit LevelState(const TwoPhaseDomain& d)
      : v(d),
        pi(d, Staggering::Cell, Phase::Both),
        c(d, Staggering::Cell, Phase::Both),
        cstar(d, Staggering::Cell, Phase::Solid),
        g(d, Staggering::Cell, Phase::Solid, 1.0) {}

  LevelState& operator-=(const LevelState& o) {
    v -= o.v;
    pi -= o.pi;
    c -= o.c;
    cstar -= o.cstar;
    g -= o.g;
    return *this;
  }
  LevelState& operator+=(const LevelState& o) {
    v += o.v;
    pi += o.pi;
    c += o.c;
    cstar += o.cstar;
    g += o.g;
    return *this;
  }
  LevelState& operator*=(double a) {
    v *= a;
    pi *= a;
    c *= a;
    cstar *= a;
    g *= a;
    return *this;
  }
};

/// The unknown w = (v, pi, c, c*, g) at every stored time level of a window.
struct StateW {
  std::vector<double> t;
  std::vector<LevelState> levels;

  std::size_t size() const { return levels.size(); }
  double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
  const LevelState& back() const { return levels.back(); }

  StateW& operator-=(const StateW& o) {
    if (o.levels.size() != levels.size()) throw ConfigError("StateW: level count mismatch");
    for (std::size_t m = 0; m < levels.size(); ++m) levels[m] -= o.levels[m];
    return *this;
  }
  friend StateW operator-(StateW a, const StateW& b) { return a -= b; }
};

/// Initial data (v0, c0, c*0, g0).
struct InitialData {
  MacVelocity v0;
  ScalarField c0;     // both
  ScalarField cstar0; // solid, zero
  ScalarField g0;     // solid, one

  InitialData() = default;
  explicit InitialData(const TwoPhaseDomain& d)
      : v0(d),
        c0(d, Staggering::Cell, Phase::Both),
        cstar0(d, Staggering::Cell, Phase::Solid),
        g0(d, Staggering::Cell, Phase::Solid, 1.0) {}

  void validate() const {
    for (double v : cstar0.values())
      if (v != 0.0) throw ConfigError("initial data: c*0 must vanish identically");
    for (double v : g0.values())
      if (v != 1.0) throw ConfigError("initial data: g0 must equal one identically");
  }
};

inline LevelState level_from_initial(const TwoPhaseDomain& d, const InitialData& w0) {
  LevelState s(d);
  s.v = w0.v0;
  s.c = w0.c0;
  s.cstar = w0.cstar0;
  s.g = w0.g0;
  return s;
}

/// Largest absolute sample over all components and levels.
inline double max_abs(const LevelState& s) {
  return std::max({max_abs(s.v), max_abs(s.pi), max_abs(s.c), max_abs(s.cstar), max_abs(s.g)});
}

}  // namespace fsgrowth
