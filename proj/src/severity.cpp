#include "angio/severity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace angio {

RadiusProfile radius_profile(const BinaryMask& mask) {
  if (count_foreground(mask) == 0) throw InputError("mask has no foreground pixels");
  RadiusProfile p;
  p.path = longest_path(skeletonize(mask));
  const DistanceMap dm = distance_transform(mask);
  p.radii.reserve(p.path.size());
  for (const auto& c : p.path.points) p.radii.push_back(dm(c.x, c.y));
  return p;
}

double peak_prominence(const std::vector<double>& profile, std::size_t peak) {
  const double h = profile[peak];
  double left_min = h;
  for (std::size_t i = peak; i-- > 0;) {
    if (profile[i] > h) break;
    left_min = std::min(left_min, profile[i]);
  }
  double right_min = h;
  for (std::size_t i = peak + 1; i < profile.size(); ++i) {
    if (profile[i] > h) break;
    right_min = std::min(right_min, profile[i]);
  }
  return h - std::max(left_min, right_min);
}

std::vector<std::size_t> detect_peaks(const std::vector<double>& profile, double min_prominence,
                                      std::size_t min_separation) {
  const std::size_t n = profile.size();
  std::vector<std::size_t> candidates;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (profile[i - 1] < profile[i]) {
      std::size_t ahead = i + 1;
      while (ahead + 1 < n && profile[ahead] == profile[i]) ++ahead;
      if (profile[ahead] < profile[i]) {
        candidates.push_back((i + ahead - 1) / 2);
        i = ahead;
        continue;
      }
    }
    ++i;
  }

  std::erase_if(candidates, [&](std::size_t c) {
    return peak_prominence(profile, c) < min_prominence;
  });
  if (min_separation <= 1 || candidates.size() < 2) return candidates;

  // Keep higher peaks first; ties go to the smaller index.
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profile[candidates[a]] > profile[candidates[b]];
  });
  std::vector<bool> keep(candidates.size(), true);
  for (std::size_t oi : order) {
    if (!keep[oi]) continue;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (j == oi || !keep[j]) continue;
      const std::size_t d = candidates[j] > candidates[oi] ? candidates[j] - candidates[oi]
                                                           : candidates[oi] - candidates[j];
      if (d < min_separation) keep[j] = false;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < candidates.size(); ++j)
    if (keep[j]) out.push_back(candidates[j]);
  return out;
}

SeverityReport severity_from_profile(const RadiusProfile& profile, const SeverityOptions& opts) {
  const auto& r = profile.radii;
  const std::size_t n = r.size();
  if (n < 3 || profile.path.size() != n)
    throw InputError("centerline too short for severity estimation");

  // The lumen closes beyond both ends of the centerline, so the profile is
  // framed by zero radii. A centerline that stops inside a wide segment
  // (thinning often ends at a bulb centre) then still yields a peak there.
  std::vector<double> framed(n + 2, 0.0);
  std::copy(r.begin(), r.end(), framed.begin() + 1);
  SeverityReport rep;
  for (std::size_t p : detect_peaks(framed, opts.peaks.min_prominence, opts.peaks.min_separation))
    rep.peak_indices.push_back(p - 1);

  std::size_t lo = 0;
  std::size_t hi = n;  // search window [lo, hi) for the minimum
  double max_radius = 0.0;
  if (rep.peak_indices.size() >= 2) {
    lo = rep.peak_indices.front() + 1;
    hi = rep.peak_indices.back();
    for (std::size_t p : rep.peak_indices) max_radius = std::max(max_radius, r[p]);
  } else {
    rep.fallback = true;
    const auto trim = static_cast<std::size_t>(std::floor(opts.fallback_trim * n));
    lo = trim;
    hi = n - trim;
    max_radius = *std::max_element(r.begin() + lo, r.begin() + hi);
  }

  // std::min_element returns the first minimum: ties resolve to the smallest index.
  const auto min_it = std::min_element(r.begin() + lo, r.begin() + hi);
  const auto min_idx = static_cast<std::size_t>(min_it - r.begin());
  rep.mld_px = 2.0 * *min_it;
  rep.mad_px = 2.0 * max_radius;
  rep.ds_percent = (1.0 - rep.mld_px / rep.mad_px) * 100.0;
  const auto& c = profile.path.points[min_idx];
  rep.mld_point = {static_cast<double>(c.x), static_cast<double>(c.y)};
  return rep;
}

SeverityReport estimate_severity(const BinaryMask& mask, const SeverityOptions& opts) {
  return severity_from_profile(radius_profile(mask), opts);
}

SeverityReport severity_from_crop(const BinaryMask& crop_mask, const CropContext& ctx,
                                  const SeverityOptions& opts) {
  SeverityReport rep = estimate_severity(crop_mask, opts);
  rep.mld_point = uncrop_point(rep.mld_point, ctx);
  return rep;
}

}  // namespace angio
