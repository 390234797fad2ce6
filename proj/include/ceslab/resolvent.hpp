#pragma once

// Closed-form finite sections of (C - lambda I)^{-1}.
//
// For lambda outside Sigma0 = {0} u {1/n}, the inverse splits as
//   (C - lambda I)^{-1} = D_lambda - lambda^{-2} E_lambda
// with D_lambda diagonal, d_nn = 1/(1/n - lambda), and E_lambda strictly lower
// triangular, e_nm = 1 / (n prod_{k=m}^{n} (1 - 1/(k lambda))) for m < n.
// Indices in these comments are 1-based; the code is 0-based.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "ceslab/errors.hpp"
#include "ceslab/lower_triangular.hpp"

namespace ceslab {

/// Construction is refused when dist(lambda, Sigma0) is at or below this.
inline constexpr double kSigmaZeroThreshold = 1e-9;

/// Above this size the E_lambda products are accumulated as complex logarithms.
inline constexpr Index kLogDomainThreshold = 512;

template <typename Real>
struct SigmaZeroDistance {
  /// 0 for the limit point 0, k for the point 1/k.
  Index nearest = 0;
  Real distance = Real(0);
};

inline std::string sigma_zero_point_name(Index nearest) {
  if (nearest == 0) return "0";
  if (nearest == 1) return "1";
  return "1/" + std::to_string(nearest);
}

template <typename Real>
SigmaZeroDistance<Real> sigma_zero_distance(const Complex<Real>& lambda) {
  SigmaZeroDistance<Real> best{0, std::abs(lambda)};
  const Real re = lambda.real();
  if (!(re > Real(0))) return best;  // every 1/k lies farther than 0
  auto consider = [&](Real k) {
    if (!(k >= Real(1)) || k > Real(1e15)) return;
    const Real d = std::abs(lambda - Complex<Real>(Real(1) / k));
    if (d < best.distance) best = {static_cast<Index>(k), d};
  };
  if (re >= Real(1)) {
    consider(Real(1));
  } else {
    const Real k0 = std::floor(Real(1) / re);
    consider(k0);
    consider(k0 + Real(1));
  }
  return best;
}

/// dist(lambda, Sigma0).
template <typename Real>
Real gamma(const Complex<Real>& lambda) {
  return sigma_zero_distance(lambda).distance;
}

/// Exact membership in {0} u {1/k : 1 <= k <= n_max}.
template <typename Real>
bool in_sigma_zero(const Complex<Real>& lambda, Index n_max = Index(1) << 40) {
  if (lambda == Complex<Real>(0)) return true;
  if (lambda.imag() != Real(0) || !(lambda.real() > Real(0))) return false;
  const Real k = std::round(Real(1) / lambda.real());
  if (k < Real(1) || k > Real(n_max)) return false;
  return Real(1) / k == lambda.real();
}

/// Re(1/lambda).
template <typename Real>
Real reciprocal_real_part(const Complex<Real>& lambda) {
  const Real mod2 = std::norm(lambda);
  if (mod2 == Real(0)) throw UnsupportedParameter("Re(1/lambda) is undefined at lambda = 0");
  return lambda.real() / mod2;
}

template <typename Real>
void require_resolvable(const Complex<Real>& lambda) {
  const auto d = sigma_zero_distance(lambda);
  if (!(d.distance > Real(kSigmaZeroThreshold))) {
    throw LambdaInSigmaZero("lambda within 1e-9 of " + sigma_zero_point_name(d.nearest) +
                                " ∈ Σ0",
                            static_cast<std::size_t>(d.nearest), static_cast<double>(d.distance));
  }
}

inline void require_positive_size(Index n, const char* where) {
  if (n <= 0) throw InvalidDimension(std::string(where) + ": size must be >= 1");
}

/// d_kk = 1/(1/k - lambda), k = 1..n.
template <typename Real>
CVector<Real> diagonal_part(const Complex<Real>& lambda, Index n) {
  require_positive_size(n, "diagonal_part");
  require_resolvable(lambda);
  CVector<Real> d(n);
  for (Index i = 0; i < n; ++i) d[i] = Real(1) / (Complex<Real>(Real(1) / Real(i + 1)) - lambda);
  return d;
}

/// Factors 1 - 1/(k lambda), k = 1..n.
template <typename Real>
CVector<Real> product_factors(const Complex<Real>& lambda, Index n) {
  CVector<Real> f(n);
  for (Index i = 0; i < n; ++i) f[i] = Real(1) - Real(1) / (Real(i + 1) * lambda);
  return f;
}

namespace detail {

template <typename Real>
[[noreturn]] void throw_overflow(Index row, Index col) {
  throw ProductOverflow("E_lambda entry overflows at (n, m) = (" + std::to_string(row + 1) + ", " +
                            std::to_string(col + 1) + ")",
                        static_cast<std::size_t>(row + 1), static_cast<std::size_t>(col + 1));
}

}  // namespace detail

/// Strictly lower-triangular E_lambda; first row and diagonal are zero.
template <typename Real>
LowerTriangular<Real> e_part(const Complex<Real>& lambda, Index n) {
  require_positive_size(n, "e_part");
  require_resolvable(lambda);
  using C = Complex<Real>;
  LowerTriangular<Real> e(n);
  const CVector<Real> f = product_factors(lambda, n);

  if (n <= kLogDomainThreshold) {
    for (Index i = 1; i < n; ++i) {
      C prod = f[i];
      const Real row_number = Real(i + 1);
      for (Index j = i - 1; j >= 0; --j) {
        prod *= f[j];
        const C v = Real(1) / (row_number * prod);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) detail::throw_overflow<Real>(i, j);
        e.coeffRef(i, j) = v;
      }
    }
    return e;
  }

  const CVector<Real> logs = f.array().log().matrix();
  const Real max_log = std::log(std::numeric_limits<Real>::max());
  for (Index i = 1; i < n; ++i) {
    C sum = logs[i];
    const Real log_row = std::log(Real(i + 1));
    for (Index j = i - 1; j >= 0; --j) {
      sum += logs[j];
      const C log_entry = -sum - log_row;
      if (log_entry.real() >= max_log) detail::throw_overflow<Real>(i, j);
      e.coeffRef(i, j) = std::exp(log_entry);
    }
  }
  return e;
}

/// Streams log|e_nm| row by row without materializing E_lambda.
/// visit(i, j, log_modulus) is called for 0 <= j < i < n, j descending within a row.
template <typename Real, typename Visitor>
void visit_e_log_modulus(const Complex<Real>& lambda, Index n, Visitor&& visit) {
  require_positive_size(n, "visit_e_log_modulus");
  require_resolvable(lambda);
  RVector<Real> logs(n);
  for (Index i = 0; i < n; ++i) logs[i] = std::log(std::abs(Real(1) - Real(1) / (Real(i + 1) * lambda)));
  for (Index i = 1; i < n; ++i) {
    Real sum = logs[i];
    const Real log_row = std::log(Real(i + 1));
    for (Index j = i - 1; j >= 0; --j) {
      sum += logs[j];
      visit(i, j, -sum - log_row);
    }
  }
}

/// log|e_nm| for m < n in packed layout; -inf on the diagonal (where e vanishes).
template <typename Real>
RVector<Real> e_part_log_modulus(const Complex<Real>& lambda, Index n) {
  RVector<Real> out = RVector<Real>::Constant(packed_size(n), -std::numeric_limits<Real>::infinity());
  visit_e_log_modulus(lambda, n, [&](Index i, Index j, Real v) { out[row_offset(i) + j] = v; });
  return out;
}

template <typename Real>
struct ResolventParts {
  Complex<Real> lambda;
  Real alpha;
  Real gamma;
  Index size;
  CVector<Real> d_diag;
  LowerTriangular<Real> e_matrix;

  /// D - lambda^{-2} E.
  LowerTriangular<Real> assemble() const {
    LowerTriangular<Real> out = (-(Real(1) / (lambda * lambda))) * e_matrix;
    for (Index i = 0; i < size; ++i) out.coeffRef(i, i) = d_diag[i];
    return out;
  }
};

template <typename Real>
ResolventParts<Real> resolvent_parts(const Complex<Real>& lambda, Index n) {
  require_resolvable(lambda);
  return ResolventParts<Real>{lambda,
                              reciprocal_real_part(lambda),
                              gamma(lambda),
                              n,
                              diagonal_part(lambda, n),
                              e_part(lambda, n)};
}

template <typename Real>
LowerTriangular<Real> resolvent_matrix(const Complex<Real>& lambda, Index n) {
  return resolvent_parts(lambda, n).assemble();
}

/// C_n - lambda I_n.
template <typename Real>
LowerTriangular<Real> shifted_cesaro(const Complex<Real>& lambda, Index n) {
  LowerTriangular<Real> a = cesaro_matrix<Real>(n);
  for (Index i = 0; i < n; ++i) a.coeffRef(i, i) -= lambda;
  return a;
}

/// Largest entry modulus of (C_n - lambda I) R - I and R (C_n - lambda I) - I.
template <typename Real>
Real residual(const Complex<Real>& lambda, Index n) {
  const LowerTriangular<Real> r = resolvent_matrix(lambda, n);
  const LowerTriangular<Real> shifted = shifted_cesaro(lambda, n);
  const LowerTriangular<Real> id = LowerTriangular<Real>::identity(n);
  const Real left = max_abs_entry(compose(shifted, r) - id);
  const Real right = max_abs_entry(compose(r, shifted) - id);
  return std::max(left, right);
}

/// Entries n^{alpha-1} m^{-alpha}, m <= n: the comparison operator G without its constant.
template <typename Real>
LowerTriangular<Real> g_matrix(Real alpha, Index n) {
  if (!(alpha < Real(1))) throw UnsupportedParameter("g_matrix requires alpha < 1");
  LowerTriangular<Real> g(n);
  for (Index i = 0; i < n; ++i) {
    const Real row_factor = std::pow(Real(i + 1), alpha - Real(1));
    for (Index j = 0; j <= i; ++j) g.coeffRef(i, j) = row_factor * std::pow(Real(j + 1), -alpha);
  }
  return g;
}

}  // namespace ceslab
