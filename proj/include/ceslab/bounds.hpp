#pragma once

// Finite-horizon checks of the entrywise inequalities satisfied by the
// resolvent pieces D_lambda and E_lambda, and of the comparison operator G.
//
// Constants that only exist as "there is some C > 0" statements are estimated
// here as extrema over a finite horizon and then checked for stability when
// the horizon is extended.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "ceslab/errors.hpp"
#include "ceslab/lower_triangular.hpp"
#include "ceslab/resolvent.hpp"

namespace ceslab {

inline constexpr double kBoundTolerance = 1e-12;

enum class BoundKind {
  DiagonalResolvent,  ///< |d_nn| <= 1/gamma
  PowerWeighted,      ///< |e_nm| <= beta / (n^{1-alpha} m^alpha), alpha < 1
  RowSum,             ///< sup_n n^{alpha-1} sum_{m<=n} m^{-alpha} finite
  ColumnLimit,        ///< columns of G tend to 0
  LeftHalfPlane,      ///< |e_nm| <= 1/n when Re(1/lambda) <= 0
  CircleDomination,   ///< |e_nm(lambda)| <= e_nm(1/alpha) on Re(1/lambda) = alpha in (0, 1)
};

/// Wire names used by the CLI and JSON reports.
inline std::string bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::DiagonalResolvent: return "diag_36";
    case BoundKind::PowerWeighted: return "alpha_43";
    case BoundKind::RowSum: return "rowsum_46";
    case BoundKind::ColumnLimit: return "collimit_49";
    case BoundKind::LeftHalfPlane: return "rho1_54";
    case BoundKind::CircleDomination: return "gamma_56";
  }
  return "?";
}

inline std::optional<BoundKind> parse_bound_kind(const std::string& name) {
  for (BoundKind k : {BoundKind::DiagonalResolvent, BoundKind::PowerWeighted, BoundKind::RowSum,
                      BoundKind::ColumnLimit, BoundKind::LeftHalfPlane, BoundKind::CircleDomination}) {
    if (bound_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

template <typename Real>
struct BoundReport {
  BoundKind kind;
  Complex<Real> lambda;
  Real alpha;
  Index n_max;
  bool holds;
  /// min over entries of (bound - value) / max(1, bound).
  Real worst_margin;
  /// 1-based (n, m) of the tightest entry.
  std::pair<Index, Index> witness;
  /// Constant the check was run against (beta, 1/gamma, analytic row bound, ...), if any.
  std::optional<Real> constant;
};

namespace detail {

template <typename Real>
class MarginTracker {
public:
  void observe(Real value, Real bound, Index i, Index j) {
    Real margin = (bound - value) / std::max(Real(1), bound);
    if (std::isnan(static_cast<double>(margin))) margin = -std::numeric_limits<Real>::infinity();
    if (margin < worst_ || witness_.first == 0) {
      worst_ = margin;
      witness_ = {i + 1, j + 1};
    }
  }
  Real worst() const { return worst_; }
  std::pair<Index, Index> witness() const { return witness_; }
  bool holds() const { return worst_ >= -Real(kBoundTolerance); }

private:
  Real worst_ = std::numeric_limits<Real>::infinity();
  std::pair<Index, Index> witness_{0, 0};
};

template <typename Real>
BoundReport<Real> make_report(BoundKind kind, const Complex<Real>& lambda, Real alpha, Index n,
                              const MarginTracker<Real>& t, std::optional<Real> constant = {}) {
  return BoundReport<Real>{kind, lambda, alpha, n, t.holds(), t.worst(), t.witness(), constant};
}

/// Visits |e_nm| for 0 <= j < i < n, using the log-domain stream above the size threshold.
template <typename Real, typename Visitor>
void visit_e_modulus(const Complex<Real>& lambda, Index n, Visitor&& visit) {
  if (n <= kLogDomainThreshold) {
    const LowerTriangular<Real> e = e_part(lambda, n);
    for (Index i = 1; i < n; ++i)
      for (Index j = 0; j < i; ++j) visit(i, j, std::abs(e(i, j)));
  } else {
    visit_e_log_modulus(lambda, n, [&](Index i, Index j, Real log_mod) { visit(i, j, std::exp(log_mod)); });
  }
}

}  // namespace detail

/// pi_n = prod_{k<=n} |1 - 1/(k lambda)| and n^alpha pi_n, n = 1..N.
template <typename Real>
struct ProductProfile {
  Complex<Real> lambda;
  Real alpha;
  RVector<Real> pi;
  RVector<Real> scaled;
  Real p_hat;
  Real q_hat;
};

template <typename Real>
ProductProfile<Real> product_profile(const Complex<Real>& lambda, Index n_max) {
  require_positive_size(n_max, "product_profile");
  require_resolvable(lambda);
  const Real alpha = reciprocal_real_part(lambda);
  ProductProfile<Real> out{lambda, alpha, RVector<Real>(n_max), RVector<Real>(n_max), Real(0), Real(0)};
  Real log_pi(0);
  for (Index i = 0; i < n_max; ++i) {
    const Real k = Real(i + 1);
    log_pi += std::log(std::abs(Real(1) - Real(1) / (k * lambda)));
    out.pi[i] = std::exp(log_pi);
    out.scaled[i] = std::exp(log_pi + alpha * std::log(k));
  }
  out.p_hat = out.scaled.minCoeff();
  out.q_hat = out.scaled.maxCoeff();
  return out;
}

template <typename Real>
struct BandCheck {
  Real p_hat;  ///< min of the scaled profile over n <= horizon
  Real q_hat;  ///< max over n <= horizon
  Real window_min;
  Real window_max;
  bool holds;
};

/// Calibrates [P, Q] on n <= horizon, then requires n in [horizon, N] to stay in [lo P, hi Q].
template <typename Real>
BandCheck<Real> profile_band_check(const ProductProfile<Real>& profile, Index horizon,
                                   Real lo = Real(0.9), Real hi = Real(1.1)) {
  const Index n = profile.scaled.size();
  if (horizon < 1 || horizon > n) throw InvalidDimension("profile_band_check: horizon out of range");
  const auto head = profile.scaled.head(horizon);
  const auto window = profile.scaled.tail(n - horizon + 1);
  BandCheck<Real> out{head.minCoeff(), head.maxCoeff(), window.minCoeff(), window.maxCoeff(), false};
  out.holds = out.p_hat > Real(0) && out.window_min >= lo * out.p_hat && out.window_max <= hi * out.q_hat;
  return out;
}

inline void require_alpha_below_one(double alpha, const char* where) {
  if (!(alpha < 1.0)) {
    throw UnsupportedParameter(std::string(where) + " requires alpha = Re(1/lambda) < 1, got " +
                               std::to_string(alpha));
  }
}

/// Smallest beta with |e_nm| n^{1-alpha} m^alpha <= beta for 1 <= m < n <= N.
template <typename Real>
Real beta_estimate(const Complex<Real>& lambda, Index n_max) {
  require_positive_size(n_max, "beta_estimate");
  require_resolvable(lambda);
  const Real alpha = reciprocal_real_part(lambda);
  require_alpha_below_one(static_cast<double>(alpha), "beta_estimate");
  RVector<Real> log_k(n_max);
  for (Index i = 0; i < n_max; ++i) log_k[i] = std::log(Real(i + 1));
  Real best_log = -std::numeric_limits<Real>::infinity();
  auto weigh = [&](Index i, Index j, Real log_mod) {
    best_log = std::max(best_log, log_mod + (Real(1) - alpha) * log_k[i] + alpha * log_k[j]);
  };
  if (n_max <= kLogDomainThreshold) {
    detail::visit_e_modulus(lambda, n_max, [&](Index i, Index j, Real mod) {
      if (mod > Real(0)) weigh(i, j, std::log(mod));
    });
  } else {
    visit_e_log_modulus(lambda, n_max, weigh);
  }
  return n_max < 2 ? Real(0) : std::exp(best_log);
}

/// Checks E_lambda nonnegative entrywise at lambda = 1/alpha.
template <typename Real>
bool e_part_nonnegative(Real alpha, Index n) {
  if (!(alpha > Real(0) && alpha < Real(1))) throw WrongRegime("requires alpha in (0, 1)");
  return e_part(Complex<Real>(Real(1) / alpha), n).is_real_nonnegative();
}

/// Point of the circle Re(1/z) = alpha parametrized as 1/(alpha + i t).
template <typename Real>
Complex<Real> gamma_circle_point(Real alpha, Real t) {
  return Real(1) / Complex<Real>(alpha, t);
}

template <typename Real>
struct ComparisonSums {
  Real row_sup;
  Index sup_row;  ///< 1-based row attaining row_sup
  /// Row N of G: N^{alpha-1} m^{-alpha}, the finite stand-in for the column limits.
  RVector<Real> column_proxy;
};

/// Row sums of G(alpha) over n <= N and the last row.
template <typename Real>
ComparisonSums<Real> row_sup_and_column_limits(Real alpha, Index n_max) {
  if (!(alpha < Real(1))) throw UnsupportedParameter("row_sup_and_column_limits requires alpha < 1");
  require_positive_size(n_max, "row_sup_and_column_limits");
  ComparisonSums<Real> out{Real(0), 1, RVector<Real>(n_max)};
  Real partial(0);
  for (Index i = 0; i < n_max; ++i) {
    const Real k = Real(i + 1);
    partial += std::pow(k, -alpha);
    const Real row = std::pow(k, alpha - Real(1)) * partial;
    if (row > out.row_sup) {
      out.row_sup = row;
      out.sup_row = i + 1;
    }
  }
  const Real last = std::pow(Real(n_max), alpha - Real(1));
  for (Index j = 0; j < n_max; ++j) out.column_proxy[j] = last * std::pow(Real(j + 1), -alpha);
  return out;
}

/// sup_n n^{alpha-1} sum_{m<=n} m^{-alpha} is at most 1 for alpha <= 0 and 1/(1-alpha) for 0 < alpha < 1.
template <typename Real>
Real analytic_row_bound(Real alpha) {
  return alpha <= Real(0) ? Real(1) : Real(1) / (Real(1) - alpha);
}

template <typename Real>
BoundReport<Real> check_comparison_bounds(Real alpha, Index n, BoundKind kind) {
  if (!(alpha < Real(1))) {
    throw WrongRegime(bound_kind_name(kind) + " requires alpha = Re(1/lambda) < 1");
  }
  detail::MarginTracker<Real> t;
  const Complex<Real> no_lambda(std::numeric_limits<Real>::quiet_NaN(), Real(0));
  if (kind == BoundKind::RowSum) {
    const auto sums = row_sup_and_column_limits(alpha, n);
    const Real bound = analytic_row_bound(alpha);
    t.observe(sums.row_sup, bound, sums.sup_row - 1, 0);
    return detail::make_report(kind, no_lambda, alpha, n, t, std::optional<Real>(bound));
  }
  if (kind == BoundKind::ColumnLimit) {
    if (n < 2) throw InvalidDimension("collimit check needs n >= 2");
    const Index half = (n + 1) / 2;
    const auto at_n = row_sup_and_column_limits(alpha, n).column_proxy;
    const Real half_factor = std::pow(Real(half), alpha - Real(1));
    const Real n_factor = std::pow(Real(n), alpha - Real(1));
    for (Index j = 0; j < half; ++j) {
      const Real at_half = half_factor * std::pow(Real(j + 1), -alpha);
      // Decay down each column, and the row-N entry matches its closed form.
      t.observe(at_n[j], at_half, n - 1, j);
      t.observe(at_n[j], n_factor * std::pow(Real(j + 1), -alpha), n - 1, j);
    }
    return detail::make_report(kind, no_lambda, alpha, n, t, std::optional<Real>(n_factor));
  }
  throw UnsupportedParameter(bound_kind_name(kind) + " is an E_lambda check; use check_entry_bounds");
}

/// Entrywise scan of one inequality over the n x n section.
template <typename Real>
BoundReport<Real> check_entry_bounds(const Complex<Real>& lambda, Index n, BoundKind kind) {
  require_positive_size(n, "check_entry_bounds");
  if (lambda == Complex<Real>(0)) throw WrongRegime("lambda = 0 is excluded from every bound");
  const Real alpha = reciprocal_real_part(lambda);
  detail::MarginTracker<Real> t;

  switch (kind) {
    case BoundKind::DiagonalResolvent: {
      const CVector<Real> d = diagonal_part(lambda, n);
      const Real bound = Real(1) / gamma(lambda);
      for (Index i = 0; i < n; ++i) t.observe(std::abs(d[i]), bound, i, i);
      return detail::make_report(kind, lambda, alpha, n, t, std::optional<Real>(bound));
    }
    case BoundKind::LeftHalfPlane: {
      if (!(alpha <= Real(0))) {
        throw WrongRegime("rho1_54 requires Re(1/lambda) <= 0 (lambda in rho1); got Re(1/lambda) = " +
                          std::to_string(static_cast<double>(alpha)));
      }
      detail::visit_e_modulus(lambda, n, [&](Index i, Index j, Real mod) {
        t.observe(mod, Real(1) / Real(i + 1), i, j);
      });
      return detail::make_report(kind, lambda, alpha, n, t);
    }
    case BoundKind::CircleDomination: {
      if (!(alpha > Real(0) && alpha < Real(1))) {
        throw WrongRegime("gamma_56 requires 0 < Re(1/lambda) < 1 (lambda on a circle Gamma_alpha); got " +
                          std::to_string(static_cast<double>(alpha)));
      }
      const Complex<Real> anchor(Real(1) / alpha);
      if (n <= kLogDomainThreshold) {
        const LowerTriangular<Real> dominating = e_part(anchor, n);
        detail::visit_e_modulus(lambda, n, [&](Index i, Index j, Real mod) {
          t.observe(mod, dominating(i, j).real(), i, j);
        });
      } else {
        const RVector<Real> dominating = e_part_log_modulus(anchor, n);
        visit_e_log_modulus(lambda, n, [&](Index i, Index j, Real log_mod) {
          t.observe(std::exp(log_mod), std::exp(dominating[row_offset(i) + j]), i, j);
        });
      }
      return detail::make_report(kind, lambda, alpha, n, t);
    }
    case BoundKind::PowerWeighted: {
      if (!(alpha < Real(1))) {
        throw WrongRegime("alpha_43 requires Re(1/lambda) < 1, i.e. |lambda - 1/2| > 1/2; got " +
                          std::to_string(static_cast<double>(alpha)));
      }
      const Real beta = beta_estimate(lambda, 2 * n);
      RVector<Real> log_k(n);
      for (Index i = 0; i < n; ++i) log_k[i] = std::log(Real(i + 1));
      detail::visit_e_modulus(lambda, n, [&](Index i, Index j, Real mod) {
        const Real bound = beta * std::exp((alpha - Real(1)) * log_k[i] - alpha * log_k[j]);
        t.observe(mod, bound, i, j);
      });
      return detail::make_report(kind, lambda, alpha, n, t, std::optional<Real>(beta));
    }
    case BoundKind::RowSum:
    case BoundKind::ColumnLimit: {
      auto report = check_comparison_bounds(alpha, n, kind);
      report.lambda = lambda;
      return report;
    }
  }
  throw UnsupportedParameter("unknown bound kind");
}

/// For lambda != 0 and b > 0: (Re(1/lambda) < 1/b, |lambda - b/2| > b/2). The two always agree.
template <typename Real>
std::pair<bool, bool> remark41(const Complex<Real>& lambda, Real b) {
  if (lambda == Complex<Real>(0)) throw UnsupportedParameter("remark41 requires lambda != 0");
  if (!(b > Real(0))) throw UnsupportedParameter("remark41 requires b > 0");
  const Real alpha = reciprocal_real_part(lambda);
  return {alpha < Real(1) / b, std::abs(lambda - Complex<Real>(b / Real(2))) > b / Real(2)};
}

/// Three-way form: sign(1/b - Re(1/lambda)) and sign(|lambda - b/2| - b/2), equal in exact arithmetic.
template <typename Real>
std::pair<int, int> remark41_sides(const Complex<Real>& lambda, Real b) {
  if (lambda == Complex<Real>(0)) throw UnsupportedParameter("remark41 requires lambda != 0");
  auto sign = [](Real v) { return (v > Real(0)) - (v < Real(0)); };
  const Real alpha = reciprocal_real_part(lambda);
  return {sign(Real(1) / b - alpha), sign(std::abs(lambda - Complex<Real>(b / Real(2))) - b / Real(2))};
}

}  // namespace ceslab
