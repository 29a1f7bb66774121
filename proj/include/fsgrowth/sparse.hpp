#pragma once

#include "fsgrowth/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <fstream>
#include <iomanip>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fsgrowth {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using VecX = Eigen::VectorXd;

/// Linear combination of unknowns plus a constant, used to express discrete
/// fluxes once and reuse them for matrix assembly, right-hand sides and
/// residual evaluation.
struct LinComb {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinComb() = default;
  explicit LinComb(double c) : constant(c) {}
  static LinComb unknown(int col, double coef = 1.0) {
    LinComb l;
    l.terms.emplace_back(col, coef);
    return l;
  }

  LinComb& operator+=(const LinComb& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    constant += o.constant;
    return *this;
  }
  LinComb& operator-=(const LinComb& o) { return *this += (-1.0) * o; }
  LinComb& operator*=(double a) {
    for (auto& t : terms) t.second *= a;
    constant *= a;
    return *this;
  }
  friend LinComb operator*(double a, LinComb l) { return l *= a; }
  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }

  double evaluate(const VecX& x) const {
    double s = constant;
    for (const auto& [c, v] : terms) s += v * x[c];
    return s;
  }
};

/// Rows of a square system in LinComb form with their right-hand sides.
class SystemBuilder {
 public:
  explicit SystemBuilder(int n) : n_(n), rows_(n), rhs_(VecX::Zero(n)) {}

  int size() const { return n_; }
  void set(int row, LinComb lhs, double rhs) {
    rows_[row] = std::move(lhs);
    rhs_[row] = rhs;
  }
  const LinComb& row(int r) const { return rows_[r]; }

  SpMat matrix() const {
    std::vector<Eigen::Triplet<double>> trip;
    for (int r = 0; r < n_; ++r)
      for (const auto& [c, v] : rows_[r].terms) trip.emplace_back(r, c, v);
    SpMat A(n_, n_);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
  }

  /// rhs minus the constant parts of each row.
  VecX effective_rhs() const {
    VecX b = rhs_;
    for (int r = 0; r < n_; ++r) b[r] -= rows_[r].constant;
    return b;
  }

  /// Residual lhs(x) - rhs per row.
  VecX residual(const VecX& x) const {
    VecX r(n_);
    for (int k = 0; k < n_; ++k) r[k] = rows_[k].evaluate(x) - rhs_[k];
    return r;
  }

  const VecX& rhs() const { return rhs_; }

 private:
  int n_;
  std::vector<LinComb> rows_;
  VecX rhs_;
};

/// Sparse LU factorization held for repeated solves.
class FactoredSystem {
 public:
  FactoredSystem() = default;
  explicit FactoredSystem(SpMat A, const std::string& what) : A_(std::move(A)) {
    lu_ = std::make_shared<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(A_);
    lu_->factorize(A_);
    if (lu_->info() != Eigen::Success)
      throw SolverError(what + ": sparse factorization failed (" + lu_->lastErrorMessage() +
                        "); the system is singular, check for an unconstrained null space");
  }

  VecX solve(const VecX& b) const {
    VecX x = lu_->solve(b);
    if (lu_->info() != Eigen::Success) throw SolverError("sparse solve failed");
    if (!x.allFinite()) throw SolverError("sparse solve produced non-finite values");
    return x;
  }

  const SpMat& matrix() const { return A_; }
  bool ready() const { return static_cast<bool>(lu_); }

 private:
  SpMat A_;
  std::shared_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>> lu_;
};

/// MatrixMarket coordinate (real general), one-based indices.
inline void write_matrix_market(const std::string& path, const SpMat& A) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

inline void write_vector_market(const std::string& path, const VecX& b) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << b.size() << " 1\n" << std::setprecision(17);
  for (int k = 0; k < b.size(); ++k) out << b[k] << '\n';
}

}  // namespace fsgrowth
