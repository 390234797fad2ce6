#pragma once

// Norms of the sequence spaces l^p, l^inf, c0, ces(p) and ces(0) evaluated on
// finite vectors. At finite length c0 and l^inf carry the same norm; every
// finite vector is null at infinity.

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <string>

#include "ceslab/errors.hpp"

namespace ceslab {

/// Exponents in (1, 1 + kMinExponentGap) are rejected: their duals overflow.
inline constexpr double kMinExponentGap = 1e-6;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void validate_exponent(double p) {
  if (std::isnan(p) || p <= 1.0 + kMinExponentGap) {
    throw UnsupportedExponent("exponent must satisfy p > 1 (+1e-6), got " + std::to_string(p));
  }
}

/// p' = p/(p-1), with p' = 1 at p = infinity.
inline double dual_exponent(double p) {
  validate_exponent(p);
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

class SpaceTag {
public:
  enum class Kind { Lp, LInfinity, C0, CesP, Ces0 };

  /// lp(infinity) yields the l^inf tag.
  static SpaceTag lp(double p) {
    validate_exponent(p);
    if (std::isinf(p)) return SpaceTag(Kind::LInfinity, kInfinity);
    return SpaceTag(Kind::Lp, p);
  }
  static SpaceTag linf() { return SpaceTag(Kind::LInfinity, kInfinity); }
  static SpaceTag c0() { return SpaceTag(Kind::C0, kInfinity); }
  static SpaceTag cesp(double p) {
    validate_exponent(p);
    if (std::isinf(p)) throw UnsupportedExponent("ces(p) requires finite p");
    return SpaceTag(Kind::CesP, p);
  }
  static SpaceTag ces0() { return SpaceTag(Kind::Ces0, kInfinity); }

  Kind kind() const noexcept { return kind_; }
  /// Infinity for the sup-type spaces.
  double p() const noexcept { return p_; }
  double dual() const { return is_sup_type() ? 1.0 : dual_exponent(p_); }

  bool is_sup_type() const noexcept {
    return kind_ == Kind::LInfinity || kind_ == Kind::C0 || kind_ == Kind::Ces0;
  }
  bool is_cesaro_type() const noexcept { return kind_ == Kind::CesP || kind_ == Kind::Ces0; }

  /// Canonical text form: lp:<p>, linf, c0, ces:<p>, ces0.
  std::string name() const;

  friend bool operator==(const SpaceTag& a, const SpaceTag& b) {
    return a.kind_ == b.kind_ && (a.is_sup_type() || a.p_ == b.p_);
  }

private:
  SpaceTag(Kind kind, double p) : kind_(kind), p_(p) {}

  Kind kind_;
  double p_;
};

inline std::string format_exponent(double p) {
  std::string s = std::to_string(p);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

inline std::string SpaceTag::name() const {
  switch (kind_) {
    case Kind::Lp: return "lp:" + format_exponent(p_);
    case Kind::LInfinity: return "linf";
    case Kind::C0: return "c0";
    case Kind::CesP: return "ces:" + format_exponent(p_);
    case Kind::Ces0: return "ces0";
  }
  return "?";
}

namespace detail {

template <typename Real, typename Derived>
Real lp_of_moduli(const Eigen::ArrayBase<Derived>& moduli, double p) {
  if (moduli.size() == 0) return Real(0);
  const Real scale = moduli.maxCoeff();
  if (scale == Real(0) || !std::isfinite(static_cast<double>(scale))) return scale;
  const Real rp = static_cast<Real>(p);
  return scale * std::pow((moduli / scale).pow(rp).sum(), Real(1) / rp);
}

}  // namespace detail

/// Running averages (1/n) sum_{k<=n} |x_k|, i.e. C(|x|).
template <typename Derived>
Eigen::Array<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic, 1>
cesaro_averages(const Eigen::MatrixBase<Derived>& x) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Eigen::Array<Real, Eigen::Dynamic, 1> out(x.size());
  Real running(0);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    running += std::abs(x[k]);
    out[k] = running / Real(k + 1);
  }
  return out;
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real norm(const SpaceTag& space,
                                                               const Eigen::MatrixBase<Derived>& x) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (x.size() == 0) return Real(0);
  switch (space.kind()) {
    case SpaceTag::Kind::Lp:
      return detail::lp_of_moduli<Real>(x.cwiseAbs().array().eval(), space.p());
    case SpaceTag::Kind::LInfinity:
    case SpaceTag::Kind::C0:
      return x.cwiseAbs().maxCoeff();
    case SpaceTag::Kind::CesP:
      return detail::lp_of_moduli<Real>(cesaro_averages(x), space.p());
    case SpaceTag::Kind::Ces0:
      return cesaro_averages(x).maxCoeff();
  }
  return Real(0);
}

}  // namespace ceslab
