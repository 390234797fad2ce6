#pragma once

// Spectral disks of the Cesaro operator on each space, and operator /
// regular norm estimation for finite lower-triangular sections.
//
// Norm estimation by space:
//   l^inf, c0   exact: maximal absolute row sum.
//   ces(0)      exact for positive matrices (a linear program with a greedy
//               solution, see ces0_positive_norm); otherwise ascent from below,
//               bracketed above by the exact value for the modulus matrix.
//   l^p         exact for diagonal matrices; otherwise Boyd's p-norm power
//               method, which for p = 2 is the power method on A^H A. Upper
//               bound from Riesz-Thorin on the row/column sums.
//   ces(p)      gradient ascent on log ||Ax|| - log ||x||, ces norms throughout.
// Every estimate that is not exact is a lower bound attained by an explicit vector.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ceslab/errors.hpp"
#include "ceslab/lower_triangular.hpp"
#include "ceslab/spaces.hpp"

namespace ceslab {

struct SpectralDisk {
  double center;
  double radius;
};

/// Closed disk |lambda - p'/2| <= p'/2, with p' = 1 for the sup-type spaces.
inline SpectralDisk spectrum_disk(const SpaceTag& space) {
  const double half = space.dual() / 2.0;
  return {half, half};
}

inline constexpr double kDiskTolerance = 1e-12;

template <typename Real>
bool in_spectrum(const SpaceTag& space, const Complex<Real>& lambda, Real tolerance = Real(kDiskTolerance)) {
  const SpectralDisk disk = spectrum_disk(space);
  return std::abs(lambda - Complex<Real>(Real(disk.center))) <= Real(disk.radius) + tolerance;
}

template <typename Real>
struct NormEstimateOptions {
  int restarts = 5;
  int max_iterations = 200;
  Real relative_tolerance = Real(1e-10);
  std::uint64_t seed = 0x5eedULL;
  /// Extra starting vectors tried before the random restarts.
  std::vector<CVector<Real>> warm_starts;
};

template <typename Real>
struct NormEstimate {
  Real value = Real(0);  ///< best lower bound found (exact when `exact`)
  Real upper = std::numeric_limits<Real>::infinity();
  bool exact = false;
  bool converged = false;
  CVector<Real> maximizer;  ///< vector attaining `value`
};

namespace detail {

template <typename Real>
Complex<Real> phase(const Complex<Real>& z) {
  const Real r = std::abs(z);
  return r == Real(0) ? Complex<Real>(0) : z / r;
}

/// sgn(v)|v|^{q-1}, scaled to unit dual norm.
template <typename Real>
CVector<Real> duality_map(const CVector<Real>& v, Real q) {
  const Real scale = v.cwiseAbs().maxCoeff();
  CVector<Real> w(v.size());
  if (scale == Real(0)) return CVector<Real>::Zero(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const Real m = std::abs(v[i]) / scale;
    w[i] = m == Real(0) ? Complex<Real>(0) : phase(v[i]) * std::pow(m, q - Real(1));
  }
  const Real q_dual = q / (q - Real(1));
  const Real nw = detail::lp_of_moduli<Real>(w.cwiseAbs().array().eval(), static_cast<double>(q_dual));
  return w / nw;
}

template <typename Real>
Real max_abs_row_sum(const LowerTriangular<Real>& a) {
  Real best(0);
  for (Index i = 0; i < a.size(); ++i) best = std::max(best, a.row(i).cwiseAbs().sum());
  return best;
}

template <typename Real>
Real max_abs_col_sum(const LowerTriangular<Real>& a) {
  RVector<Real> cols = RVector<Real>::Zero(a.size());
  for (Index i = 0; i < a.size(); ++i) cols.head(i + 1) += a.row(i).cwiseAbs();
  return cols.maxCoeff();
}

template <typename Real>
Real riesz_thorin_bound(const LowerTriangular<Real>& a, double p) {
  const Real one = max_abs_col_sum(a);
  const Real inf = max_abs_row_sum(a);
  const Real inv_p = Real(1) / Real(p);
  return std::pow(one, inv_p) * std::pow(inf, Real(1) - inv_p);
}

template <typename Real>
std::vector<CVector<Real>> starting_vectors(Index n, const NormEstimateOptions<Real>& opts) {
  std::vector<CVector<Real>> starts;
  starts.push_back(CVector<Real>::Ones(n));
  for (const auto& w : opts.warm_starts) {
    if (w.size() != n) throw InvalidDimension("warm start has the wrong length");
    if (w.cwiseAbs().maxCoeff() > Real(0)) starts.push_back(w);
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < opts.restarts; ++r) {
    CVector<Real> x(n);
    for (Index i = 0; i < n; ++i) x[i] = Complex<Real>(Real(gauss(rng)), Real(gauss(rng)));
    starts.push_back(x);
  }
  return starts;
}

template <typename Real>
void keep_best(NormEstimate<Real>& best, Real value, const CVector<Real>& x) {
  if (value > best.value || best.maximizer.size() == 0) {
    best.value = value;
    best.maximizer = x;
  }
}

/// Boyd's power method for ||A||_p, 1 < p < infinity.
template <typename Real>
void lp_power_method(const LowerTriangular<Real>& a, Real p, CVector<Real> x,
                     const NormEstimateOptions<Real>& opts, NormEstimate<Real>& best) {
  const SpaceTag space = SpaceTag::lp(static_cast<double>(p));
  const Real p_dual = p / (p - Real(1));
  x /= norm(space, x);
  Real previous(0);
  bool converged = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const CVector<Real> y = ceslab::apply(a, x);
    const Real ny = norm(space, y);
    keep_best(best, ny, x);
    if (ny == Real(0)) {
      converged = true;
      break;
    }
    const CVector<Real> z = apply_adjoint(a, duality_map(y, p));
    const Real nz = detail::lp_of_moduli<Real>(z.cwiseAbs().array().eval(), static_cast<double>(p_dual));
    const Real zx = (z.adjoint() * x).value().real();
    if (it > 0 && std::abs(ny - previous) <= opts.relative_tolerance * ny) {
      converged = true;
      break;
    }
    if (nz <= zx * (Real(1) + Real(8) * std::numeric_limits<Real>::epsilon())) {
      converged = true;
      break;
    }
    previous = ny;
    x = duality_map(z, p_dual);
  }
  best.converged = best.converged || converged;
}

/// Conjugate gradient of y -> ||C|y|||_q (q finite), and the norm itself.
template <typename Real>
CVector<Real> ces_gradient(const CVector<Real>& y, Real q, Real& value) {
  const Index n = y.size();
  const auto avg = cesaro_averages(y);
  value = detail::lp_of_moduli<Real>(avg, static_cast<double>(q));
  CVector<Real> g = CVector<Real>::Zero(n);
  if (value == Real(0)) return g;
  // C^T (u/N)^{q-1}: suffix sums of weights / row index.
  Real suffix(0);
  for (Index i = n - 1; i >= 0; --i) {
    suffix += std::pow(avg[i] / value, q - Real(1)) / Real(i + 1);
    g[i] = phase(y[i]) * suffix;
  }
  return g;
}

/// Gradient ascent on log ||Ax||_ces - log ||x||_ces. `surrogate_q` replaces the exponent of
/// the ascent objective (used for ces(0)); the tracked value always uses the true space norm.
template <typename Real>
void ces_ascent(const LowerTriangular<Real>& a, const SpaceTag& space, Real surrogate_q, CVector<Real> x,
                const NormEstimateOptions<Real>& opts, NormEstimate<Real>& best) {
  auto ratio = [&](const CVector<Real>& v) {
    const Real nv = norm(space, v);
    return nv == Real(0) ? Real(0) : norm(space, ceslab::apply(a, v)) / nv;
  };
  auto surrogate_ratio = [&](const CVector<Real>& v) {
    Real nx, nax;
    ces_gradient(v, surrogate_q, nx);
    ces_gradient(CVector<Real>(ceslab::apply(a, v)), surrogate_q, nax);
    return nx == Real(0) ? Real(0) : nax / nx;
  };
  if (norm(space, x) == Real(0)) return;
  x /= norm(space, x);
  Real current = surrogate_ratio(x);
  keep_best(best, ratio(x), x);
  Real step(1);
  bool converged = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Real nx, nax;
    const CVector<Real> ax = ceslab::apply(a, x);
    const CVector<Real> gx = ces_gradient(x, surrogate_q, nx);
    const CVector<Real> gax = ces_gradient(ax, surrogate_q, nax);
    if (nax == Real(0)) break;
    const CVector<Real> h = apply_adjoint(a, gax) / nax - gx / nx;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving) {
      CVector<Real> trial = x + step * h;
      const Real nt = norm(space, trial);
      if (nt > Real(0)) {
        trial /= nt;
        const Real value = surrogate_ratio(trial);
        if (value > current) {
          const Real gain = (value - current) / value;
          x = trial;
          current = value;
          keep_best(best, ratio(x), x);
          step *= Real(2);
          improved = true;
          if (gain < opts.relative_tolerance) converged = true;
          break;
        }
      }
      step /= Real(2);
    }
    if (!improved || converged) {
      converged = true;
      break;
    }
  }
  best.converged = best.converged || converged;
}

}  // namespace detail

/// Exact ces(0) norm of a positive matrix. With w = row i of C A the row objective
/// max { w.x : x >= 0, sum_{k<=j} x_k <= j for all j } is sum_j max_{k>=j} w_k: each unit of
/// budget released at index j is spent at the best index at or after j.
template <typename Real>
NormEstimate<Real> ces0_positive_norm(const LowerTriangular<Real>& a) {
  if (!a.is_real_nonnegative()) throw UnsupportedParameter("ces0_positive_norm needs a positive matrix");
  const Index n = a.size();
  NormEstimate<Real> out;
  out.exact = true;
  out.converged = true;
  RVector<Real> w = RVector<Real>::Zero(n);
  RVector<Real> running = RVector<Real>::Zero(n);  // sum of rows 0..i of A
  Index best_row = 0;
  for (Index i = 0; i < n; ++i) {
    running.head(i + 1) += a.row(i).real();
    w = running / Real(i + 1);
    Real suffix_max(0), value(0);
    for (Index j = i; j >= 0; --j) {
      suffix_max = std::max(suffix_max, w[j]);
      value += suffix_max;
    }
    // Budget released after index i is only usable where w vanishes.
    if (value > out.value || i == 0) {
      out.value = value;
      best_row = i;
    }
  }
  // Rebuild the optimal allocation for the best row.
  running.setZero();
  for (Index i = 0; i <= best_row; ++i) running.head(i + 1) += a.row(i).real();
  w = running / Real(best_row + 1);
  out.maximizer = CVector<Real>::Zero(n);
  Index arg = best_row;
  for (Index j = best_row; j >= 0; --j) {
    if (w[j] >= w[arg]) arg = j;
    out.maximizer[arg] += Real(1);
  }
  for (Index j = best_row + 1; j < n; ++j) out.maximizer[j] = Real(1);
  out.upper = out.value;
  return out;
}

template <typename Real>
NormEstimate<Real> operator_norm_estimate(const SpaceTag& space, const LowerTriangular<Real>& a,
                                          const NormEstimateOptions<Real>& opts = {}) {
  const Index n = a.size();
  NormEstimate<Real> best;
  switch (space.kind()) {
    case SpaceTag::Kind::LInfinity:
    case SpaceTag::Kind::C0: {
      Index arg = 0;
      for (Index i = 0; i < n; ++i) {
        const Real s = a.row(i).cwiseAbs().sum();
        if (s > best.value) {
          best.value = s;
          arg = i;
        }
      }
      best.maximizer = CVector<Real>::Ones(n);
      for (Index j = 0; j <= arg; ++j) best.maximizer[j] = std::conj(detail::phase(a(arg, j)));
      for (Index j = 0; j <= arg; ++j)
        if (best.maximizer[j] == Complex<Real>(0)) best.maximizer[j] = Real(1);
      best.upper = best.value;
      best.exact = best.converged = true;
      return best;
    }
    case SpaceTag::Kind::Ces0: {
      const NormEstimate<Real> dominating = ces0_positive_norm(modulus(a));
      if (a.is_real_nonnegative()) return dominating;
      for (const auto& x : detail::starting_vectors(n, opts)) {
        detail::ces_ascent(a, space, Real(64), x, opts, best);
      }
      detail::ces_ascent(a, space, Real(64), dominating.maximizer, opts, best);
      best.upper = dominating.value;
      return best;
    }
    case SpaceTag::Kind::Lp: {
      if (is_diagonal(a)) {
        // Singular values of a diagonal matrix are |a_ii|; the same sup is the l^p norm.
        Index arg = 0;
        for (Index i = 0; i < n; ++i) {
          if (std::abs(a(i, i)) > best.value) {
            best.value = std::abs(a(i, i));
            arg = i;
          }
        }
        best.maximizer = CVector<Real>::Zero(n);
        best.maximizer[arg] = Real(1);
        best.upper = best.value;
        best.exact = best.converged = true;
        return best;
      }
      const Real p = Real(space.p());
      for (const auto& x : detail::starting_vectors(n, opts)) detail::lp_power_method(a, p, x, opts, best);
      best.upper = Real(detail::riesz_thorin_bound(a, space.p()));
      return best;
    }
    case SpaceTag::Kind::CesP: {
      const Real p = Real(space.p());
      for (const auto& x : detail::starting_vectors(n, opts)) detail::ces_ascent(a, space, p, x, opts, best);
      // ||x||_p <= n ||x||_ces(p) and ||C y||_p <= p' ||y||_p.
      best.upper = Real(space.dual()) * Real(n) * detail::riesz_thorin_bound(a, space.p());
      return best;
    }
  }
  return best;
}

/// Operator norm of the modulus matrix, the least positive dominator of a matrix operator.
template <typename Real>
NormEstimate<Real> regular_norm_estimate(const SpaceTag& space, const LowerTriangular<Real>& a,
                                         const NormEstimateOptions<Real>& opts = {}) {
  return operator_norm_estimate(space, modulus(a), opts);
}

// ---------------------------------------------------------------------------
// Growth classification of norm sequences along increasing truncations.

/// One (lambda, n) sample; the CSV row of the sweep engine.
struct SweepRecord {
  std::complex<double> lambda;
  Index n = 0;
  double gamma = 0.0;
  double op_norm_est = 0.0;
  double reg_norm_est = 0.0;
  bool in_disk = false;
};

enum class Verdict { Bounded, Growing, Inconclusive };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "bounded";
    case Verdict::Growing: return "growing";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct GrowthThresholds {
  double growing = 1.5;  ///< last ratio at or above this means growing
  double bounded = 1.1;  ///< all ratios at or below this means bounded
};

struct GrowthVerdict {
  std::complex<double> lambda;
  std::vector<double> ratios;
  Verdict verdict = Verdict::Inconclusive;
};

/// Ratios of successive norms; sizes are only used for validation.
inline GrowthVerdict classify_norms(std::complex<double> lambda, std::span<const double> norms,
                                    const GrowthThresholds& thresholds = {}) {
  if (norms.size() < 2) throw InvalidConfig("growth classification needs at least two sizes");
  GrowthVerdict out{lambda, {}, Verdict::Inconclusive};
  for (std::size_t k = 1; k < norms.size(); ++k) out.ratios.push_back(norms[k] / norms[k - 1]);
  const bool bounded = std::all_of(out.ratios.begin(), out.ratios.end(),
                                   [&](double r) { return r <= thresholds.bounded; });
  if (out.ratios.back() >= thresholds.growing) {
    out.verdict = Verdict::Growing;
  } else if (bounded) {
    out.verdict = Verdict::Bounded;
  }
  return out;
}

inline GrowthVerdict classify_growth(std::span<const SweepRecord> records,
                                     const GrowthThresholds& thresholds = {}) {
  if (records.size() < 2) throw InvalidConfig("growth classification needs at least two records");
  std::vector<double> norms;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (records[k].lambda != records[0].lambda) throw InvalidConfig("records mix different lambda values");
    if (k > 0 && records[k].n <= records[k - 1].n) throw InvalidConfig("sizes must be strictly increasing");
    norms.push_back(records[k].reg_norm_est);
  }
  return classify_norms(records[0].lambda, norms, thresholds);
}

}  // namespace ceslab
