#pragma once

#include <optional>
#include <string>
#include <vector>

#include "angio/image.hpp"

namespace angio {

/// Continuous pixel coordinate; origin top-left, pixel (i, j) sits at (i, j).
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box stored as a corner pair.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  [[nodiscard]] double width() const noexcept { return x_max - x_min; }
  [[nodiscard]] double height() const noexcept { return y_max - y_min; }
  [[nodiscard]] double area() const noexcept { return width() * height(); }
  /// x_min < x_max, y_min < y_max, all corners finite and non-negative.
  [[nodiscard]] bool valid() const noexcept;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Throws InputError unless b.valid().
BoundingBox checked_box(const BoundingBox& b);

/// Intersection over union; 0 for disjoint boxes.
double bbox_iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Closed containment: boundary points count as inside.
bool bbox_contains(const BoundingBox& b, const Point& p) noexcept;

/// Intersection of `b` with [0,w]x[0,h]; may be degenerate.
BoundingBox clip_box(const BoundingBox& b, double w, double h) noexcept;

struct LesionAnnotation {
  BoundingBox bbox;
  std::optional<Point> mld_point;
  std::optional<double> mld_px;
  friend bool operator==(const LesionAnnotation&, const LesionAnnotation&) = default;
};

/// Throws InputError when the MLD point lies outside the box or mld_px <= 0.
void validate_annotation(const LesionAnnotation& a);

struct Detection {
  std::string image_id;
  BoundingBox bbox;
  double confidence = 0.0;
  /// MLD measured on the segmented crop of this detection, when known.
  std::optional<double> mld_px;
};

struct ManifestImage {
  std::string id;
  std::string path;
  int width = 0;
  int height = 0;
  std::vector<LesionAnnotation> lesions;
};

struct DatasetManifest {
  std::vector<ManifestImage> images;

  [[nodiscard]] const ManifestImage* find(const std::string& id) const noexcept;
};

/// Checks id uniqueness, positive sizes, and that lesions fit their image.
void validate_manifest(const DatasetManifest& m);

// ---------------------------------------------------------------------------
// Crop / resize glue between the detection and segmentation stages.

/// Affine map from crop space back to image space: p_img = p_crop / scale + offset.
struct CropContext {
  double offset_x = 0.0;
  double offset_y = 0.0;
  double scale_x = 1.0;
  double scale_y = 1.0;
  friend bool operator==(const CropContext&, const CropContext&) = default;
};

struct CropResult {
  GrayImage image;
  CropContext context;
};

/// Bilinear crop of `b` (clipped to the image) resampled to out_w x out_h.
/// Output pixel (u, v) samples the source at (x_min + u / sx, y_min + v / sy).
/// Throws InputError when the clipped box is degenerate or out size is zero.
CropResult crop_resize(const GrayImage& img, const BoundingBox& b, int out_w, int out_h);

/// Image-space point to crop space.
Point crop_point(const Point& p, const CropContext& ctx) noexcept;

/// Crop-space point back to image space.
Point uncrop_point(const Point& p, const CropContext& ctx) noexcept;

/// Bilinear sample with coordinates clamped to the image.
double sample_bilinear(const GrayImage& img, double x, double y) noexcept;

}  // namespace angio
