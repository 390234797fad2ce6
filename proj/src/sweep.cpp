#include "ceslab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "ceslab/errors.hpp"
#include "ceslab/resolvent.hpp"

namespace ceslab {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Index axis_count(double lo, double hi, double step, const char* axis) {
  if (!(lo < hi)) throw InvalidConfig(std::string(axis) + ": min must be below max");
  const double extent = hi - lo;
  if (step > extent) throw InvalidConfig(std::string(axis) + ": step exceeds the extent, grid is empty");
  return static_cast<Index>(std::floor(extent / step + 1e-9)) + 1;
}

struct TaskOutcome {
  SweepRecord record;
  std::string error;
};

}  // namespace

std::vector<std::complex<double>> grid_points(const SweepGrid& grid) {
  std::vector<std::complex<double>> out;
  if (grid.rect) {
    const GridRect& r = *grid.rect;
    if (!(r.step > 0.0) || !std::isfinite(r.step)) throw InvalidConfig("grid step must be positive");
    const Index nre = axis_count(r.re_min, r.re_max, r.step, "real axis");
    const Index nim = axis_count(r.im_min, r.im_max, r.step, "imaginary axis");
    for (Index b = 0; b < nim; ++b) {
      for (Index a = 0; a < nre; ++a) {
        out.emplace_back(r.re_min + static_cast<double>(a) * r.step, r.im_min + static_cast<double>(b) * r.step);
      }
    }
  }
  for (const auto& p : grid.points) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) throw InvalidConfig("grid point is not finite");
    out.push_back(p);
  }
  if (out.empty()) throw InvalidConfig("grid is empty");
  return out;
}

std::string SweepResult::verdict_for(std::size_t record_index) const {
  const auto& lambda = records.at(record_index).lambda;
  for (const auto& v : verdicts) {
    if (v.lambda == lambda) return verdict_name(v.verdict);
  }
  return verdict_name(Verdict::Inconclusive);
}

unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CESLAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(tasks, 1))));
}

SweepRecord sweep_sample(const SpaceTag& space, std::complex<double> lambda, Index n,
                         const NormEstimateOptions<double>& estimate) {
  const LowerTriangular<double> r = resolvent_matrix(lambda, n);
  const NormEstimate<double> op = operator_norm_estimate(space, r, estimate);
  // Seeding the modulus ascent with |x| for the best x guarantees reg >= op: |Rx| <= |R||x|.
  NormEstimateOptions<double> reg_options = estimate;
  reg_options.warm_starts.push_back(op.maximizer.cwiseAbs().cast<std::complex<double>>());
  const NormEstimate<double> reg = regular_norm_estimate(space, r, reg_options);
  SweepRecord rec;
  rec.lambda = lambda;
  rec.n = n;
  rec.gamma = gamma(lambda);
  rec.op_norm_est = op.value;
  rec.reg_norm_est = reg.value;
  rec.in_disk = in_spectrum(space, lambda);
  return rec;
}

SweepResult sweep(const SpaceTag& space, const SweepGrid& grid, const std::vector<Index>& sizes,
                  const SweepOptions& options) {
  if (sizes.empty()) throw InvalidConfig("sweep needs at least one truncation size");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 1) throw InvalidConfig("truncation sizes must be positive");
    if (k > 0 && sizes[k] <= sizes[k - 1]) throw InvalidConfig("truncation sizes must be strictly ascending");
  }
  const auto all_points = grid_points(grid);

  SweepResult result;
  result.space = space;
  result.sizes = sizes;
  std::vector<std::complex<double>> retained;
  for (const auto& lambda : all_points) {
    const auto d = sigma_zero_distance(lambda);
    if (d.distance <= options.gamma_skip) {
      result.skipped.push_back({lambda, "within " + std::to_string(options.gamma_skip) + " of " +
                                            sigma_zero_point_name(d.nearest) + " in Sigma0"});
    } else {
      retained.push_back(lambda);
    }
  }

  const std::size_t n_sizes = sizes.size();
  const std::size_t n_tasks = retained.size() * n_sizes;
  std::vector<TaskOutcome> outcomes(n_tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) {
      const std::size_t point = t / n_sizes;
      NormEstimateOptions<double> est = options.estimate;
      est.seed = splitmix64(options.estimate.seed ^ splitmix64(static_cast<std::uint64_t>(t)));
      try {
        outcomes[t].record = sweep_sample(space, retained[point], sizes[t % n_sizes], est);
      } catch (const std::exception& e) {
        outcomes[t].error = e.what();
      }
    }
  };
  const unsigned n_workers = worker_count(options.threads, n_tasks);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t point = 0; point < retained.size(); ++point) {
    const auto first = outcomes.begin() + static_cast<std::ptrdiff_t>(point * n_sizes);
    const auto last = first + static_cast<std::ptrdiff_t>(n_sizes);
    const auto failed = std::find_if(first, last, [](const TaskOutcome& o) { return !o.error.empty(); });
    if (failed != last) {
      result.skipped.push_back({retained[point], failed->error});
      continue;
    }
    const std::size_t begin = result.records.size();
    for (auto it = first; it != last; ++it) result.records.push_back(it->record);
    if (n_sizes >= 2) {
      result.verdicts.push_back(classify_growth(
          std::span<const SweepRecord>(result.records.data() + begin, n_sizes), options.thresholds));
    }
  }
  return result;
}

}  // namespace ceslab
