#include <doctest.h>

#include "ceslab/bounds.hpp"
#include "ceslab/errors.hpp"
#include "ceslab/resolvent.hpp"
#include "ceslab/spectra.hpp"
#include "oracles.hpp"

using namespace ceslab;
using cd = std::complex<double>;
using LT = LowerTriangular<double>;

namespace {

/// max over x on a fine sample of ||Ax||_space / ||x||_space; a crude lower bound.
double sampled_ratio(const SpaceTag& space, const LT& a, oracle::Sampler& s, int samples) {
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto x = s.complex_vector(a.size());
    best = std::max(best, norm(space, apply(a, x)) / norm(space, x));
  }
  return best;
}

LT random_positive(oracle::Sampler& s, Index n) {
  LT a(n);
  for (auto& z : a.packed()) z = s.uniform(0, 1);
  return a;
}

}  // namespace

TEST_CASE("spectral disks") {
  const auto l2 = spectrum_disk(SpaceTag::lp(2));
  CHECK(l2.center == 1.0);
  CHECK(l2.radius == 1.0);
  const auto c0 = spectrum_disk(SpaceTag::c0());
  CHECK(c0.center == 0.5);
  CHECK(c0.radius == 0.5);
  const auto ces3 = spectrum_disk(SpaceTag::cesp(3));
  CHECK(ces3.center == doctest::Approx(0.75));
  CHECK(ces3.radius == ces3.center);
  CHECK(spectrum_disk(SpaceTag::linf()).radius == 0.5);
  CHECK(spectrum_disk(SpaceTag::ces0()).radius == 0.5);
}

TEST_CASE("disk membership") {
  CHECK(in_spectrum(SpaceTag::lp(2), cd(0.5)));
  CHECK(in_spectrum(SpaceTag::lp(2), cd(2)));
  CHECK_FALSE(in_spectrum(SpaceTag::ces0(), cd(2)));
  CHECK(in_spectrum(SpaceTag::lp(2), cd(0)));
  CHECK_FALSE(in_spectrum(SpaceTag::lp(2), cd(2.01)));
}

TEST_CASE("disk membership matches the half plane of 1/lambda") {
  oracle::Sampler s(73);
  for (double p : {1.3, 2.0, 3.0, 10.0}) {
    const SpaceTag sp = SpaceTag::lp(p);
    const double pd = dual_exponent(p);
    for (int trial = 0; trial < 2000; ++trial) {
      const cd lambda(s.uniform(-1, 2 * pd + 1), s.uniform(-pd - 1, pd + 1));
      const double alpha = (1.0 / lambda).real();
      if (std::abs(alpha - 1.0 / pd) < 1e-9) continue;
      CHECK(in_spectrum(sp, lambda) == (alpha >= 1.0 / pd));
      CHECK(in_spectrum(sp, lambda) == !remark41(lambda, pd).second);
    }
  }
}

TEST_CASE("sup-type norms are exact row sums") {
  for (const auto& space : {SpaceTag::linf(), SpaceTag::c0()}) {
    const auto est = operator_norm_estimate(space, cesaro_matrix(50));
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(est.exact);
    CHECK(est.upper == est.value);
  }
  oracle::Sampler s(79);
  LT a(6);
  for (auto& z : a.packed()) z = cd(s.uniform(-1, 1), s.uniform(-1, 1));
  const auto d = a.to_dense();
  const double ref = d.cwiseAbs().rowwise().sum().maxCoeff();
  CHECK(operator_norm_estimate(SpaceTag::linf(), a).value == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("l2 norm of the 2x2 section") {
  const auto est = operator_norm_estimate(SpaceTag::lp(2), cesaro_matrix(2));
  const double ref = oracle::largest_singular_value(cesaro_matrix(2).to_dense());
  CHECK(est.value == doctest::Approx(ref).epsilon(1e-10));
  CHECK(est.value <= est.upper);
}

TEST_CASE("l2 norm matches the singular value oracle") {
  oracle::Sampler s(83);
  for (int trial = 0; trial < 5; ++trial) {
    LT a(30);
    for (auto& z : a.packed()) z = cd(s.uniform(-1, 1), s.uniform(-1, 1));
    const double ref = oracle::largest_singular_value(a.to_dense());
    CHECK(operator_norm_estimate(SpaceTag::lp(2), a).value == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("l2 norms of the Cesaro sections increase toward 2") {
  double previous = 0.0;
  for (Index n : {64, 256}) {
    const double est = operator_norm_estimate(SpaceTag::lp(2), cesaro_matrix(n)).value;
    CHECK(est == doctest::Approx(oracle::cesaro_l2_norm(n)).epsilon(1e-8));
    CHECK(est > previous);
    CHECK(est < 2.0);
    previous = est;
  }
}

TEST_CASE("general p estimate is a lower bound below the Riesz-Thorin bound") {
  oracle::Sampler s(89);
  for (double p : {1.5, 3.0}) {
    const SpaceTag sp = SpaceTag::lp(p);
    const LT c = cesaro_matrix(40);
    const auto est = operator_norm_estimate(sp, c);
    CHECK(est.value <= est.upper);
    CHECK(est.value < dual_exponent(p));
    CHECK(est.value >= sampled_ratio(sp, c, s, 200));
    CHECK(norm(sp, apply(c, est.maximizer)) / norm(sp, est.maximizer) == doctest::Approx(est.value));
  }
}

TEST_CASE("diagonal matrices are exact in every lp") {
  Eigen::VectorXcd d(4);
  d << 0.3, cd(0, -2), 1.0, cd(1, 1);
  for (double p : {1.2, 2.0, 5.0}) {
    const auto est = operator_norm_estimate(SpaceTag::lp(p), diagonal_matrix<double>(d));
    CHECK(est.exact);
    CHECK(est.value == 2.0);
  }
}

TEST_CASE("ces0 norm of positive matrices is exact") {
  const auto c = operator_norm_estimate(SpaceTag::ces0(), cesaro_matrix(100));
  CHECK(c.exact);
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-13));

  // Brute force over the extreme points for a small positive matrix.
  oracle::Sampler s(97);
  for (int trial = 0; trial < 10; ++trial) {
    const LT a = random_positive(s, 6);
    const auto est = ces0_positive_norm(a);
    REQUIRE(norm(SpaceTag::ces0(), est.maximizer) > 0.0);
    const double achieved =
        norm(SpaceTag::ces0(), apply(a, est.maximizer)) / norm(SpaceTag::ces0(), est.maximizer);
    CHECK(achieved == doctest::Approx(est.value).epsilon(1e-12));
    CHECK(est.value >= sampled_ratio(SpaceTag::ces0(), a, s, 500) * (1 - 1e-12));
  }
  CHECK_THROWS_AS(ces0_positive_norm(cd(-1) * LT::identity(2)), UnsupportedParameter);
}

TEST_CASE("ces(p) estimate of the Cesaro sections") {
  oracle::Sampler s(101);
  for (double p : {1.5, 2.0, 3.0}) {
    const SpaceTag sp = SpaceTag::cesp(p);
    const LT c = cesaro_matrix(64);
    const auto est = operator_norm_estimate(sp, c);
    CHECK(est.value > 1.0);
    CHECK(est.value <= dual_exponent(p));
    CHECK(est.value <= est.upper);
    CHECK(est.value >= sampled_ratio(sp, c, s, 100));
  }
}

TEST_CASE("estimates are seeded") {
  const auto r = resolvent_matrix(cd(0.4, 0.3), 64);
  NormEstimateOptions<double> opts;
  opts.seed = 1234;
  for (const auto& sp : {SpaceTag::lp(3), SpaceTag::cesp(2), SpaceTag::ces0()}) {
    CHECK(operator_norm_estimate(sp, r, opts).value == operator_norm_estimate(sp, r, opts).value);
  }
}

TEST_CASE("positive matrices have equal regular and operator norms") {
  oracle::Sampler s(103);
  const LT a = random_positive(s, 20);
  for (const auto& sp : {SpaceTag::lp(2), SpaceTag::lp(3), SpaceTag::linf(), SpaceTag::c0(), SpaceTag::cesp(2),
                         SpaceTag::ces0()}) {
    CAPTURE(sp.name());
    CHECK(regular_norm_estimate(sp, a).value == operator_norm_estimate(sp, a).value);
  }
}

TEST_CASE("modulus identity gives regular norm 1") {
  Eigen::VectorXcd d(2);
  d << -1.0, cd(0, 1);
  const LT a = diagonal_matrix<double>(d);
  for (const auto& sp : {SpaceTag::lp(2), SpaceTag::lp(4), SpaceTag::linf(), SpaceTag::c0(), SpaceTag::cesp(2),
                         SpaceTag::ces0()}) {
    CAPTURE(sp.name());
    CHECK(regular_norm_estimate(sp, a).value == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("regular norm is at least the operator norm for a resolvent") {
  const auto r = resolvent_matrix(cd(-1), 64);
  const double op = operator_norm_estimate(SpaceTag::lp(2), r).value;
  const double reg = regular_norm_estimate(SpaceTag::lp(2), r).value;
  CHECK(op <= reg + 1e-9);
}

TEST_CASE("growth classification examples") {
  const std::vector<double> bounded{3.0, 3.05}, growing{5, 12, 30}, unsure{5, 6.2};
  CHECK(classify_norms(cd(1), bounded).verdict == Verdict::Bounded);
  CHECK(classify_norms(cd(1), growing).verdict == Verdict::Growing);
  CHECK(classify_norms(cd(1), unsure).verdict == Verdict::Inconclusive);
  const auto g = classify_norms(cd(1), growing);
  REQUIRE(g.ratios.size() == 2);
  CHECK(g.ratios[0] == doctest::Approx(2.4));
  CHECK(g.ratios[1] == doctest::Approx(2.5));
  CHECK(classify_norms(cd(1), unsure, GrowthThresholds{1.2, 1.1}).verdict == Verdict::Growing);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(classify_norms(cd(1), one), InvalidConfig);
}

TEST_CASE("classify_growth validates its records") {
  std::vector<SweepRecord> recs(2);
  recs[0].lambda = recs[1].lambda = cd(2, 2);
  recs[0].n = 128;
  recs[1].n = 512;
  recs[0].reg_norm_est = 1.0;
  recs[1].reg_norm_est = 1.02;
  CHECK(classify_growth(recs).verdict == Verdict::Bounded);
  recs[1].n = 64;
  CHECK_THROWS_AS(classify_growth(recs), InvalidConfig);
  recs[1].n = 512;
  recs[1].lambda = cd(1, 1);
  CHECK_THROWS_AS(classify_growth(recs), InvalidConfig);
  CHECK_THROWS_AS(classify_growth(std::span<const SweepRecord>(recs.data(), 1)), InvalidConfig);
}
