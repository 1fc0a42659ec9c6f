#pragma once

#include <cstddef>
#include <vector>

#include "angio/geometry.hpp"
#include "angio/morphology.hpp"

namespace angio {

/// Arterial radius at every point of the ordered centerline.
struct RadiusProfile {
  std::vector<double> radii;
  SkeletonPath path;
};

struct PeakOptions {
  double min_prominence = 0.5;  // pixels
  std::size_t min_separation = 3;  // samples
};

/// Parameters of the severity estimate; defaults are the library's
/// published configuration.
struct SeverityOptions {
  PeakOptions peaks;
  /// Fraction of samples trimmed at each profile end when fewer than two
  /// peaks are found.
  double fallback_trim = 0.05;
};

struct SeverityReport {
  double mld_px = 0.0;      // minimum lumen diameter
  double mad_px = 0.0;      // maximal (healthy) arterial diameter
  double ds_percent = 0.0;  // (1 - mld/mad) * 100
  Point mld_point;
  std::vector<std::size_t> peak_indices;
  /// True when fewer than two peaks were found and the trimmed global
  /// min/max was used instead.
  bool fallback = false;
};

/// EDT radii sampled along longest_path(skeletonize(mask)).
/// Throws InputError on an empty mask.
RadiusProfile radius_profile(const BinaryMask& mask);

/// Strict local maxima (plateaus collapsed to their centre) whose
/// topographic prominence is at least `min_prominence`; among those, peaks
/// closer than `min_separation` samples to a higher kept peak are dropped.
/// Result is in ascending index order.
std::vector<std::size_t> detect_peaks(const std::vector<double>& profile, double min_prominence,
                                      std::size_t min_separation);

/// Prominence of the sample at `peak`: its height above the higher of the
/// two lowest points reached before meeting a strictly higher sample on
/// either side (or the profile end).
double peak_prominence(const std::vector<double>& profile, std::size_t peak);

/// Severity from a precomputed profile. Throws InputError if the profile
/// has fewer than 3 samples.
SeverityReport severity_from_profile(const RadiusProfile& profile,
                                     const SeverityOptions& opts = {});

/// MLD, MAD, and diameter stenosis of a segmented lesion mask.
///
/// Peaks are searched on the profile framed by a zero radius at each end,
/// so a centerline ending inside a wide segment can peak at its endpoint.
/// With two or more radius peaks the MLD is twice the smallest radius
/// strictly between the first and last peak and the MAD twice the largest
/// peak radius. Otherwise both come from the profile with
/// `fallback_trim` of its samples removed at each end. Throws InputError
/// when the centerline has fewer than 3 points.
SeverityReport estimate_severity(const BinaryMask& mask, const SeverityOptions& opts = {});

/// estimate_severity on a crop-space mask, with mld_point mapped back to
/// image space. Diameters stay in crop-space pixels.
SeverityReport severity_from_crop(const BinaryMask& crop_mask, const CropContext& ctx,
                                  const SeverityOptions& opts = {});

}  // namespace angio
