#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace fsgrowth {

/// Small dense tensors used by the pointwise formula kernels. Kernels are
/// templated on the spatial dimension; the grid itself is two-dimensional.
template <int N>
using Mat = Eigen::Matrix<double, N, N>;
template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

using Mat2 = Mat<2>;
using Vec2 = Vec<2>;

template <int N>
inline Mat<N> identity() {
  return Mat<N>::Identity();
}

/// A : B = tr(B^T A)
template <int N>
inline double double_dot(const Mat<N>& a, const Mat<N>& b) {
  return (a.array() * b.array()).sum();
}

template <int N>
inline double frobenius(const Mat<N>& a) {
  return a.norm();
}

template <int N>
inline double max_abs(const Mat<N>& a) {
  return a.cwiseAbs().maxCoeff();
}

}  // namespace fsgrowth
