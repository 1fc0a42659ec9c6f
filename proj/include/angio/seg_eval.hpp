#pragma once

#include "angio/image.hpp"

namespace angio {

struct PixelMetrics {
  double acc = 0.0;
  double prec = 0.0;
  double rec = 0.0;
  double dice = 0.0;
  double iou = 0.0;
};

struct SegScore {
  double acc = 0.0;
  double prec = 0.0;
  double rec = 0.0;
  double dice = 0.0;
  double iou = 0.0;
  double cldice = 0.0;
  double mhd = 0.0;
};

/// Confusion-matrix ratios over pixels.
///
/// When both masks are empty every ratio is 1. Otherwise an undefined
/// precision (no predicted foreground) or recall (no true foreground) is 0.
/// Throws InputError on a size mismatch.
PixelMetrics pixel_metrics(const BinaryMask& pred, const BinaryMask& gt);

/// Centerline Dice: harmonic mean of |skel(pred) & gt| / |skel(pred)| and
/// |skel(gt) & pred| / |skel(gt)|. 1 when both masks are empty, 0 when only
/// one is.
double cl_dice(const BinaryMask& pred, const BinaryMask& gt);

/// Modified Hausdorff distance: the larger of the mean nearest-foreground
/// distances from pred to gt and from gt to pred. Throws InputError if
/// either mask is empty or the sizes differ.
double mhd(const BinaryMask& pred, const BinaryMask& gt);

/// Mean distance from each foreground pixel of `from` to the nearest
/// foreground pixel of `to`.
double directed_mean_distance(const BinaryMask& from, const BinaryMask& to);

/// All seven segmentation metrics. mhd requires both masks non-empty;
/// callers scoring possibly-empty pairs should use the individual functions.
SegScore score_segmentation(const BinaryMask& pred, const BinaryMask& gt);

}  // namespace angio
