#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/stencils.hpp"

#include <vector>

namespace fsgrowth {

enum class Side { Fluid, Solid, Top };

namespace detail {
inline void require_row_centred(Staggering s) {
  if (s != Staggering::Cell && s != Staggering::XFace)
    throw ConfigError("trace: field must be sampled at row centres (cell or x-face)");
}
}  // namespace detail

/// Quadratic one-sided trace of a row-centred field in column i on the
/// interface (from the fluid or the solid side) or on the outer boundary.
template <typename T>
inline T trace_at(const TwoPhaseDomain& d, const Field<T>& f, Side side, int i) {
  detail::require_row_centred(f.staggering());
  switch (side) {
    case Side::Fluid: {
      const int j = d.ny_f - 1;
      return (15.0 * f(i, j) - 10.0 * f(i, j - 1) + 3.0 * f(i, j - 2)) / 8.0;
    }
    case Side::Solid: {
      const int j = d.ny_f;
      return (15.0 * f(i, j) - 10.0 * f(i, j + 1) + 3.0 * f(i, j + 2)) / 8.0;
    }
    case Side::Top: {
      const int j = d.ny() - 1;
      return (15.0 * f(i, j) - 10.0 * f(i, j - 1) + 3.0 * f(i, j - 2)) / 8.0;
    }
  }
  return zero_value<T>();
}

template <typename T>
inline std::vector<T> trace(const TwoPhaseDomain& d, const Field<T>& f, Side side) {
  std::vector<T> out(d.nx);
  for (int i = 0; i < d.nx; ++i) out[i] = trace_at(d, f, side, i);
  return out;
}

/// Solid-side trace minus fluid-side trace on every interface face.
template <typename T>
inline std::vector<T> jump_at_interface(const TwoPhaseDomain& d, const Field<T>& f) {
  if (f.tag() != Phase::Both) throw ConfigError("jump_at_interface: field must be defined on both phases");
  std::vector<T> out(d.nx);
  for (int i = 0; i < d.nx; ++i) out[i] = trace_at(d, f, Side::Solid, i) - trace_at(d, f, Side::Fluid, i);
  return out;
}

/// Reflection parity of a field about the symmetry plane y = 0.
enum class Parity { Even, Odd };

/// Cell-centred gradient of a cell scalar, one-sided at phase boundaries and
/// reflected at the symmetry plane with the given parity. Rows outside `f`'s
/// tag are skipped.
inline VectorField grad_cell(const TwoPhaseDomain& d, const ScalarField& f, Parity parity = Parity::Even) {
  if (f.staggering() != Staggering::Cell) throw ConfigError("grad_cell: cell-centred field required");
  VectorField g(d, Staggering::Cell, f.tag());
  const double dx = d.dx, dy = d.dy;
  g.for_each([&](int i, int j, Vec2& out) {
    out(0) = stencil::central(f(i - 1, j), f(i + 1, j), dx);
    const int top = j < d.ny_f ? d.ny_f - 1 : d.ny() - 1;
    const int bot = j < d.ny_f ? 0 : d.ny_f;
    if (j == 0) {
      const double ghost = parity == Parity::Even ? f(i, 0) : -f(i, 0);
      out(1) = (f(i, 1) - ghost) / (2.0 * dy);
    } else if (j == top) {
      out(1) = stencil::backward3(f(i, j), f(i, j - 1), f(i, j - 2), dy);
    } else if (j == bot) {
      out(1) = stencil::forward3(f(i, j), f(i, j + 1), f(i, j + 2), dy);
    } else {
      out(1) = stencil::central(f(i, j - 1), f(i, j + 1), dy);
    }
  });
  return g;
}

/// Cell-centred velocity gradient, (grad v)_{ab} = d v_a / d x_b.
inline TensorField grad_velocity(const TwoPhaseDomain& d, const MacVelocity& v) {
  TensorField g(d, Staggering::Cell, Phase::Both);
  const double dx = d.dx, dy = d.dy;
  const int ny = d.ny();
  auto uxc = [&](int i, int j) { return 0.5 * (v.ux(i, j) + v.ux(i + 1, j)); };
  auto uyc = [&](int i, int j) { return 0.5 * (v.uy(i, j) + v.uy(i, j + 1)); };
  auto ugc = [&](int i) { return 0.5 * (v.ux_gamma[d.wrap(i)] + v.ux_gamma[d.wrap(i + 1)]); };
  g.for_each([&](int i, int j, Mat2& out) {
    out(0, 0) = (v.ux(i + 1, j) - v.ux(i, j)) / dx;
    out(1, 1) = (v.uy(i, j + 1) - v.uy(i, j)) / dy;
    out(1, 0) = stencil::central(uyc(i - 1, j), uyc(i + 1, j), dx);
    double dyux;
    if (j == 0) {
      dyux = (uxc(i, 1) - uxc(i, 0)) / (2.0 * dy);
    } else if (j == d.ny_f - 1) {
      dyux = stencil::centre_derivative_below_face(uxc(i, j - 1), uxc(i, j), ugc(i), dy);
    } else if (j == d.ny_f) {
      dyux = stencil::centre_derivative_above_face(ugc(i), uxc(i, j), uxc(i, j + 1), dy);
    } else if (j == ny - 1) {
      dyux = stencil::backward3(uxc(i, j), uxc(i, j - 1), uxc(i, j - 2), dy);
    } else {
      dyux = stencil::central(uxc(i, j - 1), uxc(i, j + 1), dy);
    }
    out(0, 1) = dyux;
  });
  return g;
}

/// Velocity averaged to cell centres.
inline VectorField velocity_at_cells(const TwoPhaseDomain& d, const MacVelocity& v) {
  VectorField out(d, Staggering::Cell, Phase::Both);
  out.for_each([&](int i, int j, Vec2& c) {
    c(0) = 0.5 * (v.ux(i, j) + v.ux(i + 1, j));
    c(1) = 0.5 * (v.uy(i, j) + v.uy(i, j + 1));
  });
  return out;
}

/// MAC divergence at cell centres.
inline ScalarField divergence(const TwoPhaseDomain& d, const MacVelocity& v) {
  ScalarField out(d, Staggering::Cell, Phase::Both);
  out.for_each([&](int i, int j, double& c) {
    c = (v.ux(i + 1, j) - v.ux(i, j)) / d.dx + (v.uy(i, j + 1) - v.uy(i, j)) / d.dy;
  });
  return out;
}

/// Restrict a both-phase cell field to one phase.
template <typename T>
inline Field<T> restrict_to(const TwoPhaseDomain& d, const Field<T>& f, Phase p) {
  Field<T> out(d, f.staggering(), p);
  out.for_each([&](int i, int j, T& v) { v = f(i, j); });
  return out;
}

/// Merge fluid- and solid-tagged cell fields into a both-phase field.
template <typename T>
inline Field<T> merge_phases(const TwoPhaseDomain& d, const Field<T>& fluid, const Field<T>& solid) {
  Field<T> out(d, fluid.staggering(), Phase::Both);
  out.for_each([&](int i, int j, T& v) { v = j < d.ny_f ? fluid(i, j) : solid(i, j); });
  return out;
}

}  // namespace fsgrowth
