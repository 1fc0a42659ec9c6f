#include "angio/detect_eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace angio {

MatchOutcome& MatchOutcome::operator+=(const MatchOutcome& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  matches.insert(matches.end(), other.matches.begin(), other.matches.end());
  fp_detections.insert(fp_detections.end(), other.fp_detections.begin(),
                       other.fp_detections.end());
  fn_annotations.insert(fn_annotations.end(), other.fn_annotations.begin(),
                        other.fn_annotations.end());
  return *this;
}

std::vector<std::size_t> confidence_order(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });
  return order;
}

MatchOutcome match_at_iou(std::span<const Detection> dets, std::span<const LesionAnnotation> gts,
                          double iou_thresh) {
  MatchOutcome out;
  std::vector<bool> used(gts.size(), false);
  for (std::size_t d : confidence_order(dets)) {
    std::size_t best = gts.size();
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      const double iou = bbox_iou(dets[d].bbox, gts[g].bbox);
      if (iou >= iou_thresh && iou > best_iou) {
        best = g;
        best_iou = iou;
      }
    }
    if (best < gts.size()) {
      used[best] = true;
      out.matches.push_back({d, best, best_iou});
    } else {
      out.fp_detections.push_back(d);
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g)
    if (!used[g]) out.fn_annotations.push_back(g);
  out.tp = out.matches.size();
  out.fp = out.fp_detections.size();
  out.fn = out.fn_annotations.size();
  return out;
}

double average_precision(std::span<const ScoredDetection> ranked, std::size_t num_gt) {
  if (num_gt == 0) throw UndefinedMetric("average precision undefined without ground truth");
  std::vector<std::size_t> order(ranked.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranked[a].confidence > ranked[b].confidence;
  });

  const std::size_t n = order.size();
  std::vector<double> recall(n), precision(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked[order[i]].tp) ++tp;
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_gt);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);

  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / 101.0;
}

std::vector<double> coco_iou_thresholds() {
  std::vector<double> t;
  for (int k = 0; k < 10; ++k) t.push_back((50 + 5 * k) / 100.0);
  return t;
}

double fitness(double map50, double map5095) noexcept { return 0.9 * map5095 + 0.1 * map50; }

namespace {

// Detections grouped per manifest image, preserving input order.
std::vector<std::vector<Detection>> group_by_image(std::span<const Detection> dets,
                                                   const DatasetManifest& manifest) {
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < manifest.images.size(); ++i) slot[manifest.images[i].id] = i;
  std::vector<std::vector<Detection>> grouped(manifest.images.size());
  for (const auto& d : dets) {
    const auto it = slot.find(d.image_id);
    if (it == slot.end()) throw InputError("detection references unknown image '" + d.image_id + "'");
    grouped[it->second].push_back(d);
  }
  return grouped;
}

struct Aggregate {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  [[nodiscard]] std::optional<double> mean_opt() const {
    if (values.empty()) return std::nullopt;
    return mean(values);
  }
  [[nodiscard]] double sd() const { return values.empty() ? 0.0 : stddev(values, 0); }
};

}  // namespace

MapSuite map_suite(std::span<const Detection> dets, const DatasetManifest& manifest) {
  const auto grouped = group_by_image(dets, manifest);
  const std::vector<double> thresholds = coco_iou_thresholds();

  std::size_t total_gt = 0;
  for (const auto& im : manifest.images) total_gt += im.lesions.size();
  if (total_gt == 0) throw UndefinedMetric("manifest has no ground-truth lesions");

  // Global ranked lists per threshold, in manifest order then confidence order.
  std::vector<std::vector<ScoredDetection>> global(thresholds.size());
  std::size_t tp50 = 0;
  std::size_t ndet = 0;
  Aggregate img_prec, img_rec, img_map50, img_map5095;

  for (std::size_t i = 0; i < manifest.images.size(); ++i) {
    const auto& gts = manifest.images[i].lesions;
    const auto& idets = grouped[i];
    std::vector<double> aps;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const MatchOutcome mo = match_at_iou(idets, gts, thresholds[t]);
      std::vector<bool> is_tp(idets.size(), false);
      for (const auto& m : mo.matches) is_tp[m.detection] = true;
      std::vector<ScoredDetection> scored;
      for (std::size_t d = 0; d < idets.size(); ++d)
        scored.push_back({idets[d].confidence, is_tp[d]});
      global[t].insert(global[t].end(), scored.begin(), scored.end());
      if (!gts.empty()) aps.push_back(average_precision(scored, gts.size()));
      if (t == 0) {
        tp50 += mo.tp;
        ndet += idets.size();
        if (!idets.empty())
          img_prec.add(static_cast<double>(mo.tp) / static_cast<double>(idets.size()));
        if (!gts.empty()) img_rec.add(static_cast<double>(mo.tp) / static_cast<double>(gts.size()));
      }
    }
    if (!gts.empty()) {
      img_map50.add(aps.front());
      img_map5095.add(std::accumulate(aps.begin(), aps.end(), 0.0) / static_cast<double>(aps.size()));
    }
  }

  MapSuite out;
  auto& img = out.image_level;
  img.level = EvalLevel::image;
  img.precision = img_prec.mean_opt();
  img.precision_sd = img_prec.sd();
  img.recall = img_rec.mean_opt();
  img.recall_sd = img_rec.sd();
  img.map50 = img_map50.mean_opt();
  img.map50_sd = img_map50.sd();
  img.map5095 = img_map5095.mean_opt();
  img.map5095_sd = img_map5095.sd();
  img.precision_images = img_prec.values.size();
  img.gt_images = img_rec.values.size();

  auto& les = out.lesion_level;
  les.level = EvalLevel::lesion;
  if (ndet > 0) les.precision = static_cast<double>(tp50) / static_cast<double>(ndet);
  les.recall = static_cast<double>(tp50) / static_cast<double>(total_gt);
  double sum = 0.0;
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const double ap = average_precision(global[t], total_gt);
    if (t == 0) les.map50 = ap;
    sum += ap;
  }
  les.map5095 = sum / static_cast<double>(thresholds.size());
  les.precision_images = img.precision_images;
  les.gt_images = img.gt_images;
  return out;
}

MatchOutcome mld_match(std::span<const Detection> dets, std::span<const LesionAnnotation> gts) {
  for (const auto& g : gts)
    if (!g.mld_point) throw InputError("ground truth lacks an mld_point");
  MatchOutcome out;
  std::vector<bool> used(gts.size(), false);
  for (std::size_t d : confidence_order(dets)) {
    bool matched = false;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || !bbox_contains(dets[d].bbox, *gts[g].mld_point)) continue;
      used[g] = true;
      out.matches.push_back({d, g, bbox_iou(dets[d].bbox, gts[g].bbox)});
      matched = true;
      break;
    }
    if (!matched) out.fp_detections.push_back(d);
  }
  for (std::size_t g = 0; g < gts.size(); ++g)
    if (!used[g]) out.fn_annotations.push_back(g);
  out.tp = out.matches.size();
  out.fp = out.fp_detections.size();
  out.fn = out.fn_annotations.size();
  return out;
}

MatchOutcome mld_match_all(std::span<const Detection> dets, const DatasetManifest& manifest) {
  const auto grouped = group_by_image(dets, manifest);
  MatchOutcome total;
  for (std::size_t i = 0; i < manifest.images.size(); ++i)
    total += mld_match(grouped[i], manifest.images[i].lesions);
  return total;
}

MldEvalResult mld_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp + fp == 0) throw UndefinedMetric("MLD-precision undefined: no detections");
  if (tp + fn == 0) throw UndefinedMetric("MLD-recall undefined: no ground truth");
  MldEvalResult r;
  r.mld_precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.mld_recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double s = r.mld_precision + r.mld_recall;
  r.mld_f1 = s > 0.0 ? 2.0 * r.mld_precision * r.mld_recall / s : 0.0;
  return r;
}

MldEvalResult mld_metrics(const MatchOutcome& m) { return mld_metrics(m.tp, m.fp, m.fn); }

MldEvalResult reclassify_ctp(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t moved) {
  if (moved > fp) throw InputError("cannot reclassify more candidates than false positives");
  MldEvalResult r = mld_metrics(tp + moved, fp - moved, fn);
  r.ctp_count = moved;
  r.mode = CtpMode::as_tp;
  return r;
}

std::vector<double> ctp_p_values(std::span<const double> fp_mlds, std::span<const double> gt_mlds,
                                 const MannWhitneyOptions& mw) {
  if (gt_mlds.empty()) throw InputError("empty ground-truth MLD distribution");
  std::vector<double> p;
  p.reserve(fp_mlds.size());
  for (double v : fp_mlds) {
    const double one[1] = {v};
    p.push_back(mann_whitney_u(one, gt_mlds, mw).p_value);
  }
  return p;
}

CtpAnalysis ctp_analysis(std::span<const double> fp_mlds, std::span<const double> gt_mlds,
                         const MatchOutcome& base, double alpha, const MannWhitneyOptions& mw) {
  if (fp_mlds.size() != base.fp)
    throw InputError("need exactly one MLD per false-positive detection");
  CtpAnalysis a;
  a.p_values = ctp_p_values(fp_mlds, gt_mlds, mw);
  std::size_t ctp = 0;
  for (double p : a.p_values) {
    a.is_ctp.push_back(p > alpha);
    if (p > alpha) ++ctp;
  }
  a.as_fp = mld_metrics(base);
  a.as_fp.ctp_count = ctp;
  a.as_tp = reclassify_ctp(base.tp, base.fp, base.fn, ctp);
  return a;
}

}  // namespace angio
