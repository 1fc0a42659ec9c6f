#include "angio/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace angio {

double mean(std::span<const double> v) {
  if (v.empty()) throw InputError("mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v, int ddof) {
  if (v.size() <= static_cast<std::size_t>(ddof)) throw InputError("too few values for stddev");
  const double mu = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - ddof));
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InputError("percentile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

namespace {

void check_samples(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw InputError("Mann-Whitney test needs two non-empty samples");
  for (double v : x)
    if (!std::isfinite(v)) throw InputError("non-finite value in sample");
  for (double v : y)
    if (!std::isfinite(v)) throw InputError("non-finite value in sample");
}

// Twice the tie-corrected U of x against y (an integer).
long long doubled_u(std::span<const double> x, std::span<const double> y) {
  long long u2 = 0;
  for (double a : x)
    for (double b : y) u2 += a < b ? 2 : (a == b ? 1 : 0);
  return u2;
}

// Sizes of tie groups of the pooled sample, ordered by descending value,
// and for each group how many members belong to x.
struct TieGroups {
  std::vector<std::size_t> size;
};

TieGroups tie_groups(std::span<const double> x, std::span<const double> y) {
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::sort(pooled.begin(), pooled.end(), std::greater<>());
  TieGroups g;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    g.size.push_back(j - i);
    i = j;
  }
  return g;
}

}  // namespace

double mann_whitney_exact_p(std::span<const double> x, std::span<const double> y) {
  check_samples(x, y);
  // |U_x - nm/2| == |U_y - nm/2|, so enumerate over the smaller sample.
  if (x.size() > y.size()) std::swap(x, y);
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const long long nm = static_cast<long long>(n * m);
  const long long observed = std::llabs(doubled_u(x, y) - nm);
  const std::size_t smax = 2 * n * m;

  // count[k][s]: weighted number of ways to place k x-labels among the
  // groups processed so far (highest values first) with doubled U = s.
  const TieGroups groups = tie_groups(x, y);
  std::vector<std::vector<double>> count(n + 1, std::vector<double>(smax + 1, 0.0));
  std::vector<std::vector<double>> next = count;
  std::vector<std::size_t> reach(n + 1, 0);  // largest s with non-zero mass per k
  std::vector<std::size_t> next_reach(n + 1, 0);
  count[0][0] = 1.0;
  std::size_t processed = 0;

  for (std::size_t t : groups.size) {
    // Binomial coefficients C(t, j) for j <= min(t, n).
    const std::size_t jmax_all = std::min(t, n);
    std::vector<double> binom(jmax_all + 1, 1.0);
    for (std::size_t j = 1; j <= jmax_all; ++j)
      binom[j] = binom[j - 1] * static_cast<double>(t - j + 1) / static_cast<double>(j);

    for (auto& row : next) std::fill(row.begin(), row.end(), 0.0);
    std::fill(next_reach.begin(), next_reach.end(), 0);
    const std::size_t kmax = std::min(n, processed);
    for (std::size_t k = 0; k <= kmax; ++k) {
      if (processed - k > m) continue;  // more y's than exist
      const std::size_t y_above = processed - k;
      const std::size_t jmax = std::min(t, n - k);
      for (std::size_t j = 0; j <= jmax; ++j) {
        if ((t - j) + y_above > m) continue;
        const std::size_t add = j * 2 * y_above + j * (t - j);
        const double w = binom[j];
        const auto& src = count[k];
        auto& dst = next[k + j];
        for (std::size_t s = 0; s <= reach[k]; ++s)
          if (src[s] != 0.0) dst[s + add] += w * src[s];
        next_reach[k + j] = std::max(next_reach[k + j], reach[k] + add);
      }
    }
    std::swap(count, next);
    std::swap(reach, next_reach);
    processed += t;
  }

  double total = 0.0;
  double tail = 0.0;
  for (std::size_t s = 0; s <= smax; ++s) {
    const double c = count[n][s];
    if (c == 0.0) continue;
    total += c;
    if (std::llabs(static_cast<long long>(s) - nm) >= observed) tail += c;
  }
  return std::min(1.0, tail / total);
}

double mann_whitney_normal_p(std::span<const double> x, std::span<const double> y) {
  check_samples(x, y);
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  const double big_n = n + m;
  double tie_term = 0.0;
  for (std::size_t t : tie_groups(x, y).size) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double var = n * m / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double u = static_cast<double>(doubled_u(x, y)) / 2.0;
  const double dev = std::max(0.0, std::fabs(u - n * m / 2.0) - 0.5);
  return std::min(1.0, std::erfc(dev / std::sqrt(var) / std::sqrt(2.0)));
}

MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                                 const MannWhitneyOptions& opts) {
  check_samples(x, y);
  MannWhitneyResult r;
  r.n = x.size();
  r.m = y.size();
  if (opts.strict) {
    long long u = 0;
    for (double a : x)
      for (double b : y) u += a < b ? 1 : 0;
    r.u = static_cast<double>(u);
  } else {
    r.u = static_cast<double>(doubled_u(x, y)) / 2.0;
  }
  r.exact = r.n * r.m <= opts.exact_limit;
  r.p_value = r.exact ? mann_whitney_exact_p(x, y) : mann_whitney_normal_p(x, y);
  return r;
}

BlandAltmanResult bland_altman(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size()) throw InputError("pred and gt lengths differ");
  if (pred.size() < 2) throw InputError("Bland-Altman analysis needs at least two pairs");
  BlandAltmanResult r;
  std::vector<double> diffs(pred.size());
  std::vector<double> abs_diffs(pred.size());
  r.points.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!std::isfinite(pred[i]) || !std::isfinite(gt[i])) throw InputError("non-finite MLD value");
    diffs[i] = pred[i] - gt[i];
    abs_diffs[i] = std::fabs(diffs[i]);
    r.points.push_back({(pred[i] + gt[i]) / 2.0, diffs[i]});
  }
  r.mean_diff = mean(diffs);
  r.sd = stddev(diffs, 1);
  r.loa_low = r.mean_diff - 1.96 * r.sd;
  r.loa_high = r.mean_diff + 1.96 * r.sd;
  r.mad = mean(abs_diffs);
  return r;
}

Confusion threshold_confusion(std::span<const MldPair> pairs, double gt_thresh,
                              double pred_thresh) {
  Confusion c;
  for (const auto& p : pairs) {
    const bool g = p.gt <= gt_thresh;
    const bool q = p.pred <= pred_thresh;
    if (g && q) ++c.tp;
    else if (!g && q) ++c.fp;
    else if (g && !q) ++c.fn;
    else ++c.tn;
  }
  return c;
}

ClassMetrics class_metrics(const Confusion& c) noexcept {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  const auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? kNaN : static_cast<double>(a) / static_cast<double>(b);
  };
  ClassMetrics m{};
  m.prec = ratio(c.tp, c.tp + c.fp);
  m.rec = ratio(c.tp, c.tp + c.fn);
  if (std::isnan(m.prec) || std::isnan(m.rec)) {
    m.f1 = kNaN;
  } else {
    m.f1 = (m.prec + m.rec) > 0.0 ? 2.0 * m.prec * m.rec / (m.prec + m.rec) : 0.0;
  }
  const double tnr = ratio(c.tn, c.tn + c.fp);
  m.bal_acc = (std::isnan(m.rec) || std::isnan(tnr)) ? kNaN : (m.rec + tnr) / 2.0;
  return m;
}

AgreementReport severity_agreement(std::span<const double> pred, std::span<const double> gt,
                                   const AgreementOptions& opts) {
  const BlandAltmanResult ba = bland_altman(pred, gt);
  AgreementReport r;
  r.mean_diff = ba.mean_diff;
  r.sd = ba.sd;
  r.loa_low = ba.loa_low;
  r.loa_high = ba.loa_high;
  r.mad = ba.mad;
  r.points = ba.points;
  std::vector<double> abs_diffs(pred.size());
  std::vector<MldPair> pairs(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    abs_diffs[i] = std::fabs(pred[i] - gt[i]);
    pairs[i] = {pred[i], gt[i]};
  }
  r.abs_diff_sd = stddev(abs_diffs, 1);

  r.confusion = threshold_confusion(pairs, opts.gt_thresh, opts.pred_thresh);
  const ClassMetrics point = class_metrics(r.confusion);
  if (std::isnan(point.prec)) throw UndefinedMetric("precision undefined: no predicted positives");
  if (std::isnan(point.rec)) throw UndefinedMetric("recall undefined: no ground-truth positives");
  if (std::isnan(point.bal_acc))
    throw UndefinedMetric("balanced accuracy undefined: no ground-truth negatives");

  const std::span<const MldPair> ps(pairs);
  const auto ci = [&](double ClassMetrics::*field) {
    return bootstrap_ci(
        ps,
        [&](std::span<const MldPair> s) {
          return class_metrics(threshold_confusion(s, opts.gt_thresh, opts.pred_thresh)).*field;
        },
        opts.bootstrap);
  };
  r.prec = {point.prec, ci(&ClassMetrics::prec)};
  r.rec = {point.rec, ci(&ClassMetrics::rec)};
  r.f1 = {point.f1, ci(&ClassMetrics::f1)};
  r.bal_acc = {point.bal_acc, ci(&ClassMetrics::bal_acc)};
  return r;
}

}  // namespace angio
