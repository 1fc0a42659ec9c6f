#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "angio/error.hpp"
#include "angio/random.hpp"

namespace angio {

// ---------------------------------------------------------------------------
// Descriptive helpers

double mean(std::span<const double> v);
/// Standard deviation with `ddof` degrees of freedom removed (1 = sample).
double stddev(std::span<const double> v, int ddof);
/// Linear-interpolated percentile of an ascending-sorted sample, q in [0,1].
double percentile_sorted(std::span<const double> sorted, double q);

// ---------------------------------------------------------------------------
// Mann-Whitney U

struct MannWhitneyOptions {
  /// Count only x_i < y_j. Off: ties contribute 0.5 to U.
  bool strict = false;
  /// Largest n*m evaluated by exact enumeration of the permutation
  /// distribution; larger samples use the tie-corrected normal approximation.
  std::size_t exact_limit = 10000;
};

struct MannWhitneyResult {
  double u = 0.0;  // sum over pairs of [x_i < y_j] (+ 0.5 [x_i == y_j] unless strict)
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t m = 0;
  bool exact = true;
};

/// Two-sided test. The p-value is the null probability, under random
/// relabelling of the pooled sample (ties kept), of a tie-corrected U at
/// least as far from n*m/2 as the observed one. Throws InputError on an
/// empty sample or non-finite values.
MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                                 const MannWhitneyOptions& opts = {});

/// Exact two-sided p-value by dynamic programming over tie groups.
double mann_whitney_exact_p(std::span<const double> x, std::span<const double> y);

/// Normal approximation with continuity and tie correction.
double mann_whitney_normal_p(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Bootstrap

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct BootstrapOptions {
  std::size_t iterations = 1000;
  double level = 0.95;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

/// Percentile bootstrap interval of `stat` over resamples (with
/// replacement) of `values`. Resample i draws from its own stream derived
/// from (seed, i), so any `jobs` gives the serial result. Resamples for
/// which `stat` returns NaN are discarded; throws UndefinedMetric if all are.
template <typename T, typename Stat>
Interval bootstrap_ci(std::span<const T> values, Stat&& stat, const BootstrapOptions& opts = {}) {
  if (values.empty()) throw InputError("bootstrap of an empty sample");
  if (opts.iterations == 0) throw InputError("bootstrap needs at least one iteration");
  if (!(opts.level > 0.0 && opts.level < 1.0)) throw InputError("confidence level must be in (0,1)");

  const std::size_t n = values.size();
  std::vector<double> stats(opts.iterations, std::numeric_limits<double>::quiet_NaN());
  auto run = [&](std::size_t begin, std::size_t step) {
    std::vector<T> resample(n);
    for (std::size_t it = begin; it < opts.iterations; it += step) {
      Rng rng(derive_seed(opts.seed, {it}));
      for (std::size_t k = 0; k < n; ++k) resample[k] = values[rng.below(n)];
      stats[it] = stat(std::span<const T>(resample));
    }
  };
  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(run, j, jobs);
  }

  std::erase_if(stats, [](double v) { return std::isnan(v); });
  if (stats.empty()) throw UndefinedMetric("statistic undefined on every bootstrap resample");
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - opts.level) / 2.0;
  return {percentile_sorted(stats, tail), percentile_sorted(stats, 1.0 - tail)};
}

// ---------------------------------------------------------------------------
// Bland-Altman

struct BlandAltmanPoint {
  double mean = 0.0;  // (pred + gt) / 2
  double diff = 0.0;  // pred - gt
};

struct BlandAltmanResult {
  double mean_diff = 0.0;
  double sd = 0.0;  // sample SD of the differences
  double loa_low = 0.0;
  double loa_high = 0.0;
  double mad = 0.0;  // mean absolute difference
  std::vector<BlandAltmanPoint> points;
};

/// Limits of agreement are mean_diff -/+ 1.96 sd. Throws InputError on
/// length mismatch or fewer than two pairs.
BlandAltmanResult bland_altman(std::span<const double> pred, std::span<const double> gt);

// ---------------------------------------------------------------------------
// Thresholded severity agreement

struct AgreementOptions {
  double gt_thresh = 4.0;    // gt positive iff gt_mld <= gt_thresh
  double pred_thresh = 6.0;  // pred positive iff pred_mld <= pred_thresh
  BootstrapOptions bootstrap{};
};

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

struct MetricWithCi {
  double value = 0.0;
  Interval ci;
};

struct AgreementReport {
  double mad = 0.0;          // mean |pred - gt|
  double abs_diff_sd = 0.0;  // sample SD of |pred - gt|
  double mean_diff = 0.0;
  double sd = 0.0;
  double loa_low = 0.0;
  double loa_high = 0.0;
  Confusion confusion;
  MetricWithCi prec;
  MetricWithCi rec;
  MetricWithCi f1;
  MetricWithCi bal_acc;
  std::vector<BlandAltmanPoint> points;
};

struct MldPair {
  double pred = 0.0;
  double gt = 0.0;
};

Confusion threshold_confusion(std::span<const MldPair> pairs, double gt_thresh, double pred_thresh);

/// Classification metrics of a confusion matrix; NaN where undefined.
struct ClassMetrics {
  double prec;
  double rec;
  double f1;
  double bal_acc;
};
ClassMetrics class_metrics(const Confusion& c) noexcept;

/// MAD +/- SD, Bland-Altman statistics, and precision / recall / F1 /
/// balanced accuracy of low-MLD detection with percentile-bootstrap CIs
/// over resampled (pred, gt) pairs. Throws InputError on length mismatch
/// or fewer than two pairs, and UndefinedMetric when a point estimate has a
/// zero denominator (for example all ground truths in one class).
AgreementReport severity_agreement(std::span<const double> pred, std::span<const double> gt,
                                   const AgreementOptions& opts = {});

}  // namespace angio
