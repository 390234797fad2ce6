#pragma once

// Multiplication operators M_phi : x -> phi x on sequences over {1..n} with
// counting measure, i.e. diagonal matrices.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ceslab/lower_triangular.hpp"
#include "ceslab/spaces.hpp"
#include "ceslab/spectra.hpp"

namespace ceslab {

template <typename Real>
LowerTriangular<Real> diag_operator(const CVector<Real>& phi) {
  return diagonal_matrix<Real>(phi);
}

/// Distinct values of phi, ordered by (real, imag).
template <typename Real>
std::vector<Complex<Real>> diag_spectrum(const CVector<Real>& phi) {
  std::vector<Complex<Real>> values(phi.data(), phi.data() + phi.size());
  auto less = [](const Complex<Real>& a, const Complex<Real>& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(values.begin(), values.end(), less);
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

template <typename Real>
CVector<Real> diagonal_of(const LowerTriangular<Real>& a) {
  CVector<Real> d(a.size());
  for (Index i = 0; i < a.size(); ++i) d[i] = a(i, i);
  return d;
}

/// Inverse of M_phi; every phi_k must be nonzero.
template <typename Real>
LowerTriangular<Real> diag_inverse(const CVector<Real>& phi) {
  for (Index i = 0; i < phi.size(); ++i) {
    if (phi[i] == Complex<Real>(0)) throw UnsupportedParameter("diag_inverse: phi has a zero entry");
  }
  return diag_operator<Real>(phi.cwiseInverse());
}

inline constexpr double kDiagNormTolerance = 1e-12;

template <typename Real>
struct DiagNormReport {
  Real op_norm;
  Real reg_norm;
  Real sup_phi;
  bool norms_equal;
  /// Only meaningful (and only required) for l^p, l^inf and c0.
  bool matches_sup;
  bool holds;
};

/// ||M_phi||_op against ||M_phi||_r in one space; for l^p/l^inf/c0 both must equal max |phi_k|.
template <typename Real>
DiagNormReport<Real> diag_norm_equality_check(const SpaceTag& space, const CVector<Real>& phi,
                                              const NormEstimateOptions<Real>& opts = {}) {
  const LowerTriangular<Real> m = diag_operator(phi);
  const Real op = operator_norm_estimate(space, m, opts).value;
  const Real reg = regular_norm_estimate(space, m, opts).value;
  const Real sup = phi.size() == 0 ? Real(0) : phi.cwiseAbs().maxCoeff();
  const Real tol = Real(kDiagNormTolerance);
  DiagNormReport<Real> out{op, reg, sup, std::abs(op - reg) <= tol, true, true};
  if (!space.is_cesaro_type()) out.matches_sup = std::abs(op - sup) <= tol && std::abs(reg - sup) <= tol;
  out.holds = out.norms_equal && out.matches_sup;
  return out;
}

}  // namespace ceslab
