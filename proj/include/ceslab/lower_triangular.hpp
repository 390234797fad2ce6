#pragma once

// Finite sections of lower-triangular matrix operators on C^N.
//
// Entries are held in packed row-major order: row i (0-based) occupies
// i + 1 consecutive slots starting at i(i+1)/2. Entries above the diagonal
// are implicit zeros and cannot be written.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "ceslab/errors.hpp"

namespace ceslab {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using CDense = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

constexpr Index packed_size(Index n) { return n * (n + 1) / 2; }
constexpr Index row_offset(Index i) { return i * (i + 1) / 2; }

template <typename Real>
class LowerTriangular {
public:
  using Scalar = Complex<Real>;
  using Storage = CVector<Real>;

  LowerTriangular() = default;

  explicit LowerTriangular(Index n) : n_(n) {
    if (n <= 0) {
      throw InvalidDimension("lower-triangular matrix needs size >= 1, got " + std::to_string(n));
    }
    packed_ = Storage::Zero(packed_size(n));
  }

  static LowerTriangular identity(Index n) {
    LowerTriangular out(n);
    for (Index i = 0; i < n; ++i) out.coeffRef(i, i) = Scalar(1);
    return out;
  }

  /// Takes the lower triangle of a square dense matrix; the strict upper part must be zero.
  template <typename Derived>
  static LowerTriangular from_dense(const Eigen::MatrixBase<Derived>& dense) {
    if (dense.rows() != dense.cols()) throw InvalidDimension("from_dense: matrix is not square");
    LowerTriangular out(dense.rows());
    for (Index i = 0; i < dense.rows(); ++i) {
      for (Index j = 0; j < dense.cols(); ++j) {
        const Scalar v = Scalar(dense(i, j));
        if (j > i) {
          if (v != Scalar(0)) throw InvalidDimension("from_dense: nonzero entry above the diagonal");
        } else {
          out.coeffRef(i, j) = v;
        }
      }
    }
    out.require_finite();
    return out;
  }

  Index size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  Scalar operator()(Index i, Index j) const {
    return j > i ? Scalar(0) : packed_[row_offset(i) + j];
  }

  /// Mutable access to the stored triangle; requires j <= i.
  Scalar& coeffRef(Index i, Index j) {
    eigen_assert(j <= i && i < n_);
    return packed_[row_offset(i) + j];
  }

  auto row(Index i) { return packed_.segment(row_offset(i), i + 1); }
  auto row(Index i) const { return packed_.segment(row_offset(i), i + 1); }

  const Storage& packed() const noexcept { return packed_; }
  Storage& packed() noexcept { return packed_; }

  CDense<Real> to_dense() const {
    CDense<Real> out = CDense<Real>::Zero(n_, n_);
    for (Index i = 0; i < n_; ++i) out.row(i).head(i + 1) = row(i).transpose();
    return out;
  }

  /// Leading k x k section.
  LowerTriangular leading_block(Index k) const {
    if (k <= 0 || k > n_) throw InvalidDimension("leading_block: k out of range");
    LowerTriangular out(k);
    out.packed_ = packed_.head(packed_size(k));
    return out;
  }

  bool is_real_nonnegative() const {
    return std::all_of(packed_.data(), packed_.data() + packed_.size(),
                       [](const Scalar& v) { return v.imag() == Real(0) && v.real() >= Real(0); });
  }

  bool all_finite() const {
    return std::all_of(packed_.data(), packed_.data() + packed_.size(), [](const Scalar& v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
  }

  void require_finite() const {
    if (!all_finite()) throw NonFiniteValue("lower-triangular matrix has a non-finite entry");
  }

  LowerTriangular& operator+=(const LowerTriangular& other) {
    check_same_size(other, "operator+=");
    packed_ += other.packed_;
    return *this;
  }
  LowerTriangular& operator-=(const LowerTriangular& other) {
    check_same_size(other, "operator-=");
    packed_ -= other.packed_;
    return *this;
  }
  LowerTriangular& operator*=(const Scalar& s) {
    packed_ *= s;
    return *this;
  }

  friend LowerTriangular operator+(LowerTriangular a, const LowerTriangular& b) { return a += b; }
  friend LowerTriangular operator-(LowerTriangular a, const LowerTriangular& b) { return a -= b; }
  friend LowerTriangular operator*(const Scalar& s, LowerTriangular a) { return a *= s; }

  friend bool operator==(const LowerTriangular& a, const LowerTriangular& b) {
    return a.n_ == b.n_ && a.packed_ == b.packed_;
  }

  void check_same_size(const LowerTriangular& other, const char* where) const {
    if (other.n_ != n_) {
      throw InvalidDimension(std::string(where) + ": size mismatch " + std::to_string(n_) +
                             " vs " + std::to_string(other.n_));
    }
  }

private:
  Index n_ = 0;
  Storage packed_;
};

/// Finite section of the Cesaro averaging operator: entry (i, j) = 1/(i+1) for j <= i.
template <typename Real = double>
LowerTriangular<Real> cesaro_matrix(Index n) {
  LowerTriangular<Real> out(n);
  for (Index i = 0; i < n; ++i) out.row(i).setConstant(Complex<Real>(Real(1) / Real(i + 1)));
  return out;
}

template <typename Real = double>
LowerTriangular<Real> diagonal_matrix(const CVector<Real>& diag) {
  LowerTriangular<Real> out(diag.size());
  for (Index i = 0; i < diag.size(); ++i) out.coeffRef(i, i) = diag[i];
  out.require_finite();
  return out;
}

namespace detail {

// A function object rather than a function template: ordinary lookup then finds an
// object and argument-dependent lookup cannot drag in std::apply via std::complex.
struct apply_fn {
  /// (T_A x)_i = sum_{j <= i} a_ij x_j.
  template <typename Real, typename Derived>
  CVector<Real> operator()(const LowerTriangular<Real>& a, const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != a.size()) {
      throw InvalidDimension("apply: vector length " + std::to_string(x.size()) +
                             " does not match matrix size " + std::to_string(a.size()));
    }
    const CVector<Real> xv = x.template cast<Complex<Real>>();
    CVector<Real> y(a.size());
    for (Index i = 0; i < a.size(); ++i) y[i] = (a.row(i).array() * xv.head(i + 1).array()).sum();
    return y;
  }
};

}  // namespace detail

inline constexpr detail::apply_fn apply{};

/// Conjugate-transpose action, y = A^H x.
template <typename Real>
CVector<Real> apply_adjoint(const LowerTriangular<Real>& a, const CVector<Real>& x) {
  if (x.size() != a.size()) throw InvalidDimension("apply_adjoint: dimension mismatch");
  CVector<Real> y = CVector<Real>::Zero(a.size());
  for (Index i = 0; i < a.size(); ++i) y.head(i + 1) += a.row(i).conjugate() * x[i];
  return y;
}

/// Real-matrix action on a real vector; only the real parts of A are used.
template <typename Real>
RVector<Real> apply_real(const LowerTriangular<Real>& a, const RVector<Real>& x) {
  if (x.size() != a.size()) throw InvalidDimension("apply_real: dimension mismatch");
  RVector<Real> y(a.size());
  for (Index i = 0; i < a.size(); ++i) y[i] = a.row(i).real().dot(x.head(i + 1));
  return y;
}

template <typename Real>
LowerTriangular<Real> compose(const LowerTriangular<Real>& a, const LowerTriangular<Real>& b) {
  a.check_same_size(b, "compose");
  LowerTriangular<Real> out(a.size());
  for (Index i = 0; i < a.size(); ++i) {
    auto out_row = out.row(i);
    for (Index k = 0; k <= i; ++k) {
      const Complex<Real> aik = a(i, k);
      if (aik == Complex<Real>(0)) continue;
      out_row.head(k + 1) += aik * b.row(k);
    }
  }
  return out;
}

template <typename Real>
LowerTriangular<Real> modulus(const LowerTriangular<Real>& b) {
  LowerTriangular<Real> out(b.size());
  out.packed() = b.packed().cwiseAbs().template cast<Complex<Real>>();
  return out;
}

template <typename Real>
bool is_diagonal(const LowerTriangular<Real>& a) {
  for (Index i = 1; i < a.size(); ++i)
    if (a.row(i).head(i).cwiseAbs().maxCoeff() != Real(0)) return false;
  return true;
}

template <typename Real>
Real max_abs_entry(const LowerTriangular<Real>& a) {
  return a.packed().size() == 0 ? Real(0) : a.packed().cwiseAbs().maxCoeff();
}

/// B = (S - U) + i (V - W) with S, U, V, W entrywise nonnegative.
template <typename Real>
struct RegularSplit {
  LowerTriangular<Real> s;
  LowerTriangular<Real> u;
  LowerTriangular<Real> v;
  LowerTriangular<Real> w;

  LowerTriangular<Real> reconstruct() const {
    LowerTriangular<Real> out(s.size());
    for (Index k = 0; k < out.packed().size(); ++k) {
      const Real re = s.packed()[k].real() - u.packed()[k].real();
      const Real im = v.packed()[k].real() - w.packed()[k].real();
      out.packed()[k] = Complex<Real>(re, im);
    }
    return out;
  }
};

template <typename Real>
RegularSplit<Real> split_regular(const LowerTriangular<Real>& b) {
  const Index n = b.size();
  RegularSplit<Real> out{LowerTriangular<Real>(n), LowerTriangular<Real>(n),
                         LowerTriangular<Real>(n), LowerTriangular<Real>(n)};
  for (Index k = 0; k < b.packed().size(); ++k) {
    const Real re = b.packed()[k].real();
    const Real im = b.packed()[k].imag();
    out.s.packed()[k] = std::max(re, Real(0));
    out.u.packed()[k] = std::max(-re, Real(0));
    out.v.packed()[k] = std::max(im, Real(0));
    out.w.packed()[k] = std::max(-im, Real(0));
  }
  return out;
}

inline constexpr double kDominationSlack = 1e-12;

/// |b_ij| <= a_ij + slack for every stored entry. A must have real entries.
template <typename Real>
bool dominates(const LowerTriangular<Real>& a, const LowerTriangular<Real>& b,
               Real slack = Real(kDominationSlack)) {
  a.check_same_size(b, "dominates");
  for (Index k = 0; k < a.packed().size(); ++k) {
    if (a.packed()[k].imag() != Real(0)) {
      throw UnsupportedParameter("dominates: dominating matrix must have real entries");
    }
    if (std::abs(b.packed()[k]) > a.packed()[k].real() + slack) return false;
  }
  return true;
}

}  // namespace ceslab
