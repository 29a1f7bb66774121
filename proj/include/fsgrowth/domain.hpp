#pragma once

#include "fsgrowth/errors.hpp"
#include "fsgrowth/tensor.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fsgrowth {

enum class Phase { Fluid, Solid, Both };

/// Sample locations on the MAC grid.
///   Cell  : (x_i + dx/2, y_j + dy/2)
///   XFace : (x_i,        y_j + dy/2)
///   YFace : (x_i + dx/2, y_j)
///   Node  : (x_i,        y_j)
enum class Staggering { Cell, XFace, YFace, Node };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Fluid: return "fluid";
    case Phase::Solid: return "solid";
    case Phase::Both: return "both";
  }
  return "?";
}

struct GeometryConfig {
  int nx = 16;
  int ny_f = 8;
  int ny_s = 8;
  double h_f = 1.0;
  double h_s = 1.0;
  double period = 2.0 * M_PI;
};

/// Fixed reference configuration: a periodic strip. The fluid occupies
/// 0 < y < h_f with a symmetry plane at y = 0, the solid wall occupies
/// h_f < y < h_f + h_s and its top y = h_f + h_s is the stress-free outer
/// boundary. The interface is the y-face row j = ny_f.
class TwoPhaseDomain {
 public:
  TwoPhaseDomain() = default;

  int nx = 0;
  int ny_f = 0;
  int ny_s = 0;
  double h_f = 0.0;
  double h_s = 0.0;
  double period = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  /// Column indices i of the faces on the interface (face (i, ny_f)) and on
  /// the outer boundary (face (i, ny)).
  std::vector<int> interface_row;
  std::vector<int> outer_row;
  /// Unit normals: from fluid to solid on the interface, outward on the top.
  std::vector<Vec2> n_gamma;
  std::vector<Vec2> n_gammas;

  int ny() const { return ny_f + ny_s; }
  int num_cells() const { return nx * ny(); }
  double height() const { return h_f + h_s; }
  double cell_volume() const { return dx * dy; }

  Phase phase_of_row(int j) const { return j < ny_f ? Phase::Fluid : Phase::Solid; }
  bool is_fluid_row(int j) const { return j < ny_f; }

  double x_center(int i) const { return (i + 0.5) * dx; }
  double x_face(int i) const { return i * dx; }
  double y_center(int j) const { return (j + 0.5) * dy; }
  double y_face(int j) const { return j * dy; }

  int wrap(int i) const { return ((i % nx) + nx) % nx; }

  /// First and one-past-last row holding samples of a field with the given
  /// staggering restricted to `phase`.
  int row_begin(Staggering s, Phase p) const {
    (void)s;
    return p == Phase::Solid ? ny_f : 0;
  }
  int row_end(Staggering s, Phase p) const {
    const bool face_rows = s == Staggering::YFace || s == Staggering::Node;
    const int extra = face_rows ? 1 : 0;
    switch (p) {
      case Phase::Fluid: return ny_f + extra;
      case Phase::Solid:
      case Phase::Both: return ny() + extra;
    }
    return 0;
  }
};

inline TwoPhaseDomain build_strip_domain(const GeometryConfig& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError("geometry: " + what); };
  if (!(cfg.h_f > 0.0)) fail("h_f must be positive (degenerate fluid layer)");
  if (!(cfg.h_s > 0.0)) fail("h_s must be positive (degenerate solid layer)");
  if (!(cfg.period > 0.0)) fail("period must be positive");
  if (cfg.nx < 4) fail("nx must be at least 4");
  if (cfg.ny_f < 4) fail("ny_f must be at least 4 cells per layer");
  if (cfg.ny_s < 4) fail("ny_s must be at least 4 cells per layer");
  const double dy_f = cfg.h_f / cfg.ny_f;
  const double dy_s = cfg.h_s / cfg.ny_s;
  if (std::abs(dy_f - dy_s) > 1e-12 * std::max(dy_f, dy_s))
    fail("h_f/ny_f and h_s/ny_s must give the same grid spacing");

  TwoPhaseDomain d;
  d.nx = cfg.nx;
  d.ny_f = cfg.ny_f;
  d.ny_s = cfg.ny_s;
  d.h_f = cfg.h_f;
  d.h_s = cfg.h_s;
  d.period = cfg.period;
  d.dx = cfg.period / cfg.nx;
  d.dy = dy_f;
  d.interface_row.resize(cfg.nx);
  d.outer_row.resize(cfg.nx);
  d.n_gamma.assign(cfg.nx, Vec2(0.0, 1.0));
  d.n_gammas.assign(cfg.nx, Vec2(0.0, 1.0));
  for (int i = 0; i < cfg.nx; ++i) {
    d.interface_row[i] = i;
    d.outer_row[i] = i;
  }
  return d;
}

}  // namespace fsgrowth
