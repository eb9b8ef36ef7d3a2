#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>

#include "dnp/error.hpp"

namespace dnp {

/// Largest spatial dimension supported by the fixed-capacity vector types.
inline constexpr int kMaxDim = 3;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// Real symmetric n x n matrix. Only the upper triangle is stored; the full
/// matrix is materialized on demand, so symmetry holds exactly.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  explicit SymmetricMatrix(int n) : n_(n), upper_(Packed::Zero(n * (n + 1) / 2)) {
    if (n < 1 || n > kMaxDim) throw InputError("SymmetricMatrix: dimension out of range");
  }

  /// Takes the upper triangle of `m`; the lower triangle is ignored.
  static SymmetricMatrix from_upper(const Mat& m) {
    if (m.rows() != m.cols()) throw InputError("SymmetricMatrix: matrix is not square");
    SymmetricMatrix s(static_cast<int>(m.rows()));
    for (int i = 0; i < s.n_; ++i)
      for (int j = i; j < s.n_; ++j) s.upper_(s.index(i, j)) = m(i, j);
    return s;
  }

  static SymmetricMatrix identity(int n) {
    SymmetricMatrix s(n);
    for (int i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
  }

  /// a*I + b*e(x)e
  static SymmetricMatrix identity_plus_rank_one(const Vec& e, double a, double b) {
    const int n = static_cast<int>(e.size());
    SymmetricMatrix s(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) s.set(i, j, (i == j ? a : 0.0) + b * e(i) * e(j));
    return s;
  }

  [[nodiscard]] int dim() const { return n_; }

  [[nodiscard]] double operator()(int i, int j) const {
    return i <= j ? upper_(index(i, j)) : upper_(index(j, i));
  }

  void set(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    upper_(index(i, j)) = v;
  }

  [[nodiscard]] Mat full() const {
    Mat m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  [[nodiscard]] double trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  /// <X v, v>
  [[nodiscard]] double quadratic_form(const Vec& v) const {
    double q = 0.0;
    for (int i = 0; i < n_; ++i) {
      q += (*this)(i, i) * v(i) * v(i);
      for (int j = i + 1; j < n_; ++j) q += 2.0 * (*this)(i, j) * v(i) * v(j);
    }
    return q;
  }

  [[nodiscard]] bool all_finite() const { return upper_.allFinite(); }

  SymmetricMatrix& operator*=(double s) {
    upper_ *= s;
    return *this;
  }
  SymmetricMatrix& operator+=(const SymmetricMatrix& o) {
    if (o.n_ != n_) throw InputError("SymmetricMatrix: dimension mismatch");
    upper_ += o.upper_;
    return *this;
  }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix m) { return m *= s; }
  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) { return a += b; }
  friend SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) {
    return a += (-1.0) * b;
  }

 private:
  [[nodiscard]] int index(int i, int j) const { return i * n_ - i * (i - 1) / 2 + (j - i); }

  using Packed = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim*(kMaxDim + 1) / 2, 1>;

  int n_ = 0;
  Packed upper_;
};

/// A point in space-time.
struct SpaceTimePoint {
  Vec x;
  double t = 0.0;
};

}  // namespace dnp
