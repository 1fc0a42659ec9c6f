#include "angio/seg_eval.hpp"

#include <cmath>

#include "angio/morphology.hpp"

namespace angio {
namespace {

void check_same_size(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InputError("mask dimensions differ");
}

double ratio_or(std::size_t num, std::size_t den, double fallback) {
  return den == 0 ? fallback : static_cast<double>(num) / static_cast<double>(den);
}

// |a & b|
std::size_t overlap(const BinaryMask& a, const BinaryMask& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a.data()[i] && b.data()[i]) ? 1 : 0;
  return n;
}

}  // namespace

PixelMetrics pixel_metrics(const BinaryMask& pred, const BinaryMask& gt) {
  check_same_size(pred, gt);
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred.data()[i] != 0;
    const bool g = gt.data()[i] != 0;
    if (p && g) ++tp;
    else if (p) ++fp;
    else if (g) ++fn;
    else ++tn;
  }
  PixelMetrics m;
  m.acc = ratio_or(tp + tn, pred.size(), 1.0);
  if (tp + fp + fn == 0) {
    m.prec = m.rec = m.dice = m.iou = 1.0;
    return m;
  }
  m.prec = ratio_or(tp, tp + fp, 0.0);
  m.rec = ratio_or(tp, tp + fn, 0.0);
  m.dice = static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
  m.iou = static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
  return m;
}

double cl_dice(const BinaryMask& pred, const BinaryMask& gt) {
  check_same_size(pred, gt);
  const bool pred_empty = count_foreground(pred) == 0;
  const bool gt_empty = count_foreground(gt) == 0;
  if (pred_empty && gt_empty) return 1.0;
  if (pred_empty || gt_empty) return 0.0;

  const BinaryMask sp = skeletonize(pred);
  const BinaryMask sg = skeletonize(gt);
  const double tprec = ratio_or(overlap(sp, gt), count_foreground(sp), 0.0);
  const double tsens = ratio_or(overlap(sg, pred), count_foreground(sg), 0.0);
  return tprec + tsens > 0.0 ? 2.0 * tprec * tsens / (tprec + tsens) : 0.0;
}

double directed_mean_distance(const BinaryMask& from, const BinaryMask& to) {
  check_same_size(from, to);
  // Distance to the nearest `to` pixel: EDT of the complement of `to`.
  BinaryMask complement(to.width(), to.height());
  for (std::size_t i = 0; i < to.size(); ++i) complement.data()[i] = to.data()[i] ? 0 : 1;
  const Grid<double> d2 = squared_distance_transform(complement, Border::none);

  double sum = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < from.height(); ++y)
    for (int x = 0; x < from.width(); ++x)
      if (from(x, y)) {
        sum += std::sqrt(d2(x, y));
        ++n;
      }
  if (n == 0) throw InputError("directed distance from an empty mask");
  return sum / static_cast<double>(n);
}

double mhd(const BinaryMask& pred, const BinaryMask& gt) {
  check_same_size(pred, gt);
  if (count_foreground(pred) == 0 || count_foreground(gt) == 0)
    throw InputError("MHD undefined for an empty mask");
  return std::max(directed_mean_distance(pred, gt), directed_mean_distance(gt, pred));
}

SegScore score_segmentation(const BinaryMask& pred, const BinaryMask& gt) {
  const PixelMetrics pm = pixel_metrics(pred, gt);
  return {pm.acc, pm.prec, pm.rec, pm.dice, pm.iou, cl_dice(pred, gt), mhd(pred, gt)};
}

}  // namespace angio
