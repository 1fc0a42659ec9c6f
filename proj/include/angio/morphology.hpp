#pragma once

#include <vector>

#include "angio/image.hpp"

namespace angio {

/// Per-pixel Euclidean distance to the nearest background pixel.
using DistanceMap = Grid<double>;

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Ordered centerline; consecutive points are 8-neighbours.
struct SkeletonPath {
  std::vector<PixelCoord> points;
  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Zhang-Suen thinning with 8-connectivity.
///
/// Each sub-iteration marks candidates in parallel using the classic
/// Zhang-Suen conditions, then commits them in row-major order, skipping
/// any candidate that is no longer a simple point once earlier deletions of
/// the same sub-iteration are applied. Without that check the parallel rule
/// erases 2x2 blocks and two-pixel diagonals entirely. The result is a
/// subset of the input with the same number of 8-connected components, and
/// is a fixed point of the procedure (idempotent).
BinaryMask skeletonize(const BinaryMask& mask);

/// Exact Euclidean distance transform (separable lower envelope of
/// parabolas). Pixels outside the image count as background, so a lone
/// foreground pixel gets distance 1.
DistanceMap distance_transform(const BinaryMask& mask);

/// How pixels beyond the image edge are treated by the distance transform.
enum class Border {
  background,  // a virtual background frame surrounds the image
  none,        // only in-image background counts; all-foreground gives +inf
};

/// Squared distances as produced by the transform before the square root;
/// values are exact integers (or +inf with Border::none and no background).
Grid<double> squared_distance_transform(const BinaryMask& mask, Border border = Border::background);

/// Labels of 8-connected foreground components (0 = background, labels
/// 1..n in row-major order of first pixel). Returns n.
int label_components(const BinaryMask& mask, Grid<int>& labels);

/// Number of 8-connected foreground components.
int count_components(const BinaryMask& mask);

/// Number of 8-neighbours in the foreground.
int neighbour_count(const BinaryMask& mask, int x, int y) noexcept;

/// Longest geodesic path through the largest 8-connected component of a
/// skeleton: BFS from the component's first pixel to its farthest pixel a,
/// then BFS from a to its farthest pixel b; returns the BFS-tree path a..b.
/// Throws InputError on an empty skeleton.
SkeletonPath longest_path(const BinaryMask& skeleton);

}  // namespace angio
