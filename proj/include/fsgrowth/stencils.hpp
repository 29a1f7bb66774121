#pragma once

namespace fsgrowth::stencil {

// Samples f1, f2, f3 at distances h/2, 3h/2, 5h/2 from a face, all inside
// one phase. Each formula is exact for quadratics.

/// Value at the face. Local error O(h^3).
inline double extrapolate(double f1, double f2, double f3) {
  return (15.0 * f1 - 10.0 * f2 + 3.0 * f3) / 8.0;
}

/// Derivative at the face along the direction pointing into the phase.
inline double face_derivative_cells(double f1, double f2, double f3, double h) {
  return (-2.0 * f1 + 3.0 * f2 - f3) / h;
}

/// Derivative at a face with known value f0, from cells at h/2 and 3h/2,
/// measured along the direction pointing into the phase.
inline double face_derivative_inward(double f0, double f1, double f2, double h) {
  return (-8.0 * f0 + 9.0 * f1 - f2) / (3.0 * h);
}

/// Derivative at a cell centre one half-spacing below a face with value fg,
/// using the cell below it at distance h (fm) and the cell itself (f0).
inline double centre_derivative_below_face(double fm, double f0, double fg, double h) {
  return (-fm / 3.0 - f0 + 4.0 * fg / 3.0) / h;
}

/// Mirror of centre_derivative_below_face for a cell just above a face.
inline double centre_derivative_above_face(double fg, double f0, double fp, double h) {
  return (-4.0 * fg / 3.0 + f0 + fp / 3.0) / h;
}

/// One-sided derivative at f0 from f0, f(-h), f(-2h) (backward).
inline double backward3(double f0, double fm1, double fm2, double h) {
  return (3.0 * f0 - 4.0 * fm1 + fm2) / (2.0 * h);
}

/// One-sided derivative at f0 from f0, f(h), f(2h) (forward).
inline double forward3(double f0, double fp1, double fp2, double h) {
  return (-3.0 * f0 + 4.0 * fp1 - fp2) / (2.0 * h);
}

inline double central(double fm, double fp, double h) { return (fp - fm) / (2.0 * h); }

}  // namespace fsgrowth::stencil
