#pragma once

// Resolvent-norm sweeps over a lambda grid and a list of truncation sizes.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ceslab/spaces.hpp"
#include "ceslab/spectra.hpp"

namespace ceslab {

struct GridRect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
  double step = 0.0;
};

/// Either an axis-aligned lattice or an explicit point list (or both: rectangle first).
struct SweepGrid {
  std::optional<GridRect> rect;
  std::vector<std::complex<double>> points;
};

/// Row-major: imaginary part outer (ascending), real part inner (ascending).
/// Throws InvalidConfig for a malformed or empty grid.
std::vector<std::complex<double>> grid_points(const SweepGrid& grid);

struct SweepOptions {
  NormEstimateOptions<double> estimate;
  GrowthThresholds thresholds;
  /// Points with dist(lambda, Sigma0) at or below this are skipped.
  double gamma_skip = 1e-3;
  /// 0 selects CESLAB_THREADS, falling back to the hardware concurrency.
  unsigned threads = 0;
};

struct SkippedPoint {
  std::complex<double> lambda;
  std::string reason;
};

struct SweepResult {
  SpaceTag space = SpaceTag::lp(2.0);
  std::vector<Index> sizes;
  /// Grid order, ascending n within each lambda.
  std::vector<SweepRecord> records;
  /// One per retained lambda; empty when fewer than two sizes were requested.
  std::vector<GrowthVerdict> verdicts;
  std::vector<SkippedPoint> skipped;

  /// Verdict name for the lambda of records[k]; "inconclusive" without a verdict.
  std::string verdict_for(std::size_t record_index) const;
};

/// Worker count honoring CESLAB_THREADS as a cap.
unsigned worker_count(unsigned requested, std::size_t tasks);

/// Deterministic for fixed options: per-task seeds depend only on the task position.
SweepResult sweep(const SpaceTag& space, const SweepGrid& grid, const std::vector<Index>& sizes,
                  const SweepOptions& options = {});

/// One (lambda, n) sample: resolvent section, both norm estimates, disk membership.
SweepRecord sweep_sample(const SpaceTag& space, std::complex<double> lambda, Index n,
                         const NormEstimateOptions<double>& estimate);

}  // namespace ceslab
