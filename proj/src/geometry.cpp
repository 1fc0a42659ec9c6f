#include "angio/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace angio {

bool BoundingBox::valid() const noexcept {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_min >= 0.0 && y_min >= 0.0 && x_min < x_max && y_min < y_max;
}

BoundingBox checked_box(const BoundingBox& b) {
  if (!b.valid()) throw InputError("invalid bounding box");
  return b;
}

double bbox_iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool bbox_contains(const BoundingBox& b, const Point& p) noexcept {
  return b.x_min <= p.x && p.x <= b.x_max && b.y_min <= p.y && p.y <= b.y_max;
}

BoundingBox clip_box(const BoundingBox& b, double w, double h) noexcept {
  return {std::clamp(b.x_min, 0.0, w), std::clamp(b.y_min, 0.0, h), std::clamp(b.x_max, 0.0, w),
          std::clamp(b.y_max, 0.0, h)};
}

void validate_annotation(const LesionAnnotation& a) {
  checked_box(a.bbox);
  if (a.mld_point) {
    if (!std::isfinite(a.mld_point->x) || !std::isfinite(a.mld_point->y))
      throw InputError("mld_point must be finite");
    if (!bbox_contains(a.bbox, *a.mld_point)) throw InputError("mld_point lies outside its bbox");
  }
  if (a.mld_px && !(*a.mld_px > 0.0)) throw InputError("mld_px must be positive");
}

const ManifestImage* DatasetManifest::find(const std::string& id) const noexcept {
  for (const auto& im : images)
    if (im.id == id) return &im;
  return nullptr;
}

void validate_manifest(const DatasetManifest& m) {
  std::set<std::string> seen;
  for (const auto& im : m.images) {
    if (!seen.insert(im.id).second) throw InputError("duplicate image id '" + im.id + "'");
    if (im.width <= 0 || im.height <= 0)
      throw InputError("image '" + im.id + "' has non-positive size");
    for (const auto& l : im.lesions) {
      validate_annotation(l);
      if (l.bbox.x_max > im.width || l.bbox.y_max > im.height)
        throw InputError("lesion bbox exceeds bounds of image '" + im.id + "'");
    }
  }
}

double sample_bilinear(const GrayImage& img, double x, double y) noexcept {
  x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img(x0, y0) * (1.0 - fx) + img(x1, y0) * fx;
  const double bot = img(x0, y1) * (1.0 - fx) + img(x1, y1) * fx;
  return top * (1.0 - fy) + bot * fy;
}

CropResult crop_resize(const GrayImage& img, const BoundingBox& b, int out_w, int out_h) {
  if (img.empty()) throw InputError("cannot crop an empty image");
  if (out_w <= 0 || out_h <= 0) throw InputError("crop output size must be positive");
  const BoundingBox c = clip_box(b, img.width(), img.height());
  if (!(c.width() > 0.0) || !(c.height() > 0.0)) throw InputError("degenerate crop box");

  CropContext ctx{c.x_min, c.y_min, out_w / c.width(), out_h / c.height()};
  GrayImage out(out_w, out_h);
  for (int v = 0; v < out_h; ++v) {
    const double sy = c.y_min + v / ctx.scale_y;
    for (int u = 0; u < out_w; ++u) {
      const double sx = c.x_min + u / ctx.scale_x;
      out(u, v) = static_cast<std::uint8_t>(
          std::clamp(std::lround(sample_bilinear(img, sx, sy)), 0L, 255L));
    }
  }
  return {std::move(out), ctx};
}

Point crop_point(const Point& p, const CropContext& ctx) noexcept {
  return {(p.x - ctx.offset_x) * ctx.scale_x, (p.y - ctx.offset_y) * ctx.scale_y};
}

Point uncrop_point(const Point& p, const CropContext& ctx) noexcept {
  return {p.x / ctx.scale_x + ctx.offset_x, p.y / ctx.scale_y + ctx.offset_y};
}

}  // namespace angio
