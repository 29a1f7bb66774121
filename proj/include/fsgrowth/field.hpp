#pragma once

#include "fsgrowth/domain.hpp"
#include "fsgrowth/tensor.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace fsgrowth {

enum class Rank { Scalar, Vector, Tensor };

template <typename T>
inline T zero_value() {
  if constexpr (std::is_arithmetic_v<T>) {
    return T(0);
  } else {
    return T::Zero();
  }
}

template <typename T>
constexpr Rank rank_of() {
  if constexpr (std::is_arithmetic_v<T>) {
    return Rank::Scalar;
  } else if constexpr (T::ColsAtCompileTime == 1) {
    return Rank::Vector;
  } else {
    return Rank::Tensor;
  }
}

/// Grid samples of a scalar, vector or tensor quantity on one MAC location
/// family, restricted to the rows of a subdomain. Periodic in the column index.
template <typename T>
class Field {
 public:
  using value_type = T;

  Field() = default;
  Field(const TwoPhaseDomain& d, Staggering s, Phase tag, T init = zero_value<T>())
      : nx_(d.nx), r0_(d.row_begin(s, tag)), r1_(d.row_end(s, tag)), stag_(s), tag_(tag),
        data_(static_cast<std::size_t>(d.nx) * (r1_ - r0_), init) {}

  int nx() const { return nx_; }
  int row_begin() const { return r0_; }
  int row_end() const { return r1_; }
  int rows() const { return r1_ - r0_; }
  Staggering staggering() const { return stag_; }
  Phase tag() const { return tag_; }
  static constexpr Rank rank() { return rank_of<T>(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool defined(int j) const { return j >= r0_ && j < r1_; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  bool same_shape(const Field& o) const {
    return nx_ == o.nx_ && r0_ == o.r0_ && r1_ == o.r1_ && stag_ == o.stag_;
  }

  template <typename Fn>
  void for_each(Fn&& fn) {
    for (int j = r0_; j < r1_; ++j)
      for (int i = 0; i < nx_; ++i) fn(i, j, (*this)(i, j));
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (int j = r0_; j < r1_; ++j)
      for (int i = 0; i < nx_; ++i) fn(i, j, (*this)(i, j));
  }

  Field& operator+=(const Field& o) {
    require_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Field& operator*=(double a) {
    for (auto& v : data_) v *= a;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

 private:
  std::size_t index(int i, int j) const {
    if (j < r0_ || j >= r1_)
      throw std::out_of_range("field tagged " + std::string(to_string(tag_)) +
                              " is undefined at row " + std::to_string(j));
    const int w = ((i % nx_) + nx_) % nx_;
    return static_cast<std::size_t>(j - r0_) * nx_ + w;
  }
  void require_shape(const Field& o) const {
    if (!same_shape(o)) throw std::invalid_argument("field shape mismatch");
  }

  int nx_ = 0;
  int r0_ = 0;
  int r1_ = 0;
  Staggering stag_ = Staggering::Cell;
  Phase tag_ = Phase::Both;
  std::vector<T> data_;
};

using ScalarField = Field<double>;
using VectorField = Field<Vec2>;
using TensorField = Field<Mat2>;

/// Vector samples on a face row (interface or outer boundary). The x
/// component lives at x = i*dx, the y component at the cell-centre abscissa.
struct FaceVector {
  std::vector<double> x;
  std::vector<double> y;

  FaceVector() = default;
  explicit FaceVector(int nx) : x(nx, 0.0), y(nx, 0.0) {}

  int size() const { return static_cast<int>(x.size()); }

  FaceVector& operator+=(const FaceVector& o) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] += o.x[k];
      y[k] += o.y[k];
    }
    return *this;
  }
  FaceVector& operator*=(double a) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] *= a;
      y[k] *= a;
    }
    return *this;
  }
};

/// Staggered velocity: ux on x-faces, uy on y-faces, and the tangential
/// velocity on the interface nodes. uy on the symmetry row j = 0 stays zero.
struct MacVelocity {
  ScalarField ux;
  ScalarField uy;
  std::vector<double> ux_gamma;

  MacVelocity() = default;
  explicit MacVelocity(const TwoPhaseDomain& d)
      : ux(d, Staggering::XFace, Phase::Both),
        uy(d, Staggering::YFace, Phase::Both),
        ux_gamma(d.nx, 0.0) {}

  MacVelocity& operator+=(const MacVelocity& o) {
    ux += o.ux;
    uy += o.uy;
    for (std::size_t k = 0; k < ux_gamma.size(); ++k) ux_gamma[k] += o.ux_gamma[k];
    return *this;
  }
  MacVelocity& operator-=(const MacVelocity& o) {
    ux -= o.ux;
    uy -= o.uy;
    for (std::size_t k = 0; k < ux_gamma.size(); ++k) ux_gamma[k] -= o.ux_gamma[k];
    return *this;
  }
  MacVelocity& operator*=(double a) {
    ux *= a;
    uy *= a;
    for (auto& v : ux_gamma) v *= a;
    return *this;
  }
  friend MacVelocity operator+(MacVelocity a, const MacVelocity& b) { return a += b; }
  friend MacVelocity operator-(MacVelocity a, const MacVelocity& b) { return a -= b; }
  friend MacVelocity operator*(double s, MacVelocity a) { return a *= s; }
};

inline double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs(const MacVelocity& v) {
  double m = std::max(max_abs(v.ux), max_abs(v.uy));
  for (double g : v.ux_gamma) m = std::max(m, std::abs(g));
  return m;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs(const FaceVector& v) { return std::max(max_abs(v.x), max_abs(v.y)); }

/// Sample an analytic function at the locations of a field.
template <typename T, typename Fn>
inline void sample(const TwoPhaseDomain& d, Field<T>& f, Fn&& fn) {
  f.for_each([&](int i, int j, T& v) {
    double x = 0.0, y = 0.0;
    switch (f.staggering()) {
      case Staggering::Cell: x = d.x_center(i); y = d.y_center(j); break;
      case Staggering::XFace: x = d.x_face(i); y = d.y_center(j); break;
      case Staggering::YFace: x = d.x_center(i); y = d.y_face(j); break;
      case Staggering::Node: x = d.x_face(i); y = d.y_face(j); break;
    }
    v = fn(x, y);
  });
}

/// Sample an analytic velocity (ux, uy) at the staggered unknowns, including
/// the tangential component on the interface nodes.
template <typename FnX, typename FnY>
inline MacVelocity sample_velocity(const TwoPhaseDomain& d, FnX&& fx, FnY&& fy) {
  MacVelocity v(d);
  sample(d, v.ux, fx);
  sample(d, v.uy, fy);
  v.uy.for_each([&](int, int j, double& u) {
    if (j == 0) u = 0.0;
  });
  for (int i = 0; i < d.nx; ++i) v.ux_gamma[i] = fx(d.x_face(i), d.h_f);
  return v;
}

}  // namespace fsgrowth
