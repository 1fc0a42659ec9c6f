#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "angio/geometry.hpp"
#include "angio/stats.hpp"

namespace angio {

struct Match {
  std::size_t detection = 0;   // index into the detection list
  std::size_t annotation = 0;  // index into the ground-truth list
  double iou = 0.0;
};

/// Outcome of matching one image's detections against its ground truth.
struct MatchOutcome {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<Match> matches;
  std::vector<std::size_t> fp_detections;
  std::vector<std::size_t> fn_annotations;

  /// Sums counts and concatenates index lists (indices keep their
  /// per-image meaning).
  MatchOutcome& operator+=(const MatchOutcome& other);
};

/// Indices of `dets` sorted by descending confidence; ties keep input order.
std::vector<std::size_t> confidence_order(std::span<const Detection> dets);

/// Greedy matching in descending confidence: each detection takes the
/// still-unmatched ground truth with the highest IoU >= iou_thresh (ties to
/// the lower index). Unmatched detections are FP, unmatched ground truths FN.
MatchOutcome match_at_iou(std::span<const Detection> dets, std::span<const LesionAnnotation> gts,
                          double iou_thresh);

/// One ranked detection for AP accumulation.
struct ScoredDetection {
  double confidence = 0.0;
  bool tp = false;
};

/// 101-point interpolated average precision (precision envelope sampled at
/// recall 0.00, 0.01, ..., 1.00). Detections are ranked by descending
/// confidence with ties kept in input order. Throws UndefinedMetric when
/// num_gt is zero.
double average_precision(std::span<const ScoredDetection> ranked, std::size_t num_gt);

/// The ten IoU thresholds 0.50, 0.55, ..., 0.95.
std::vector<double> coco_iou_thresholds();

enum class EvalLevel { image, lesion };

/// Precision, recall, mAP@0.50, and mAP@0.50-0.95 at one aggregation level.
/// Lesion level reports totals over all images (sd fields are zero).
/// Image level reports the mean and population SD of per-image values;
/// precision only covers images with at least one detection and the other
/// metrics only images with at least one ground-truth lesion. A metric with
/// no contributing images (or zero denominators at lesion level) is absent.
struct EvalSummary {
  EvalLevel level = EvalLevel::lesion;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> map50;
  std::optional<double> map5095;
  double precision_sd = 0.0;
  double recall_sd = 0.0;
  double map50_sd = 0.0;
  double map5095_sd = 0.0;
  std::size_t precision_images = 0;  // images contributing to precision
  std::size_t gt_images = 0;         // images contributing to recall / mAP
};

struct MapSuite {
  EvalSummary image_level;
  EvalSummary lesion_level;
};

/// Overlap-based evaluation of `dets` against `manifest`. Throws
/// InputError when a detection names an unknown image, and UndefinedMetric
/// when the manifest has no ground-truth lesions.
MapSuite map_suite(std::span<const Detection> dets, const DatasetManifest& manifest);

/// 0.9 * mAP@0.50-0.95 + 0.1 * mAP@0.50.
double fitness(double map50, double map5095) noexcept;

// ---------------------------------------------------------------------------
// MLD containment metrics

/// Greedy by descending confidence: a detection is TP when it contains
/// the MLD point of a still-unmatched ground truth (lowest index first), FP
/// otherwise; ground truths whose MLD no detection claimed are FN. Throws
/// InputError if any ground truth lacks an mld_point.
MatchOutcome mld_match(std::span<const Detection> dets, std::span<const LesionAnnotation> gts);

/// mld_match over every image of the manifest, in manifest order. Throws
/// InputError on unknown image ids.
MatchOutcome mld_match_all(std::span<const Detection> dets, const DatasetManifest& manifest);

enum class CtpMode { as_fp, as_tp };

struct MldEvalResult {
  double mld_precision = 0.0;
  double mld_recall = 0.0;
  double mld_f1 = 0.0;
  std::size_t ctp_count = 0;
  CtpMode mode = CtpMode::as_fp;
};

/// Precision TP/(TP+FP), recall TP/(TP+FN), F1 their harmonic mean (0 when
/// both are 0). Throws UndefinedMetric when a denominator is zero.
MldEvalResult mld_metrics(std::size_t tp, std::size_t fp, std::size_t fn);
MldEvalResult mld_metrics(const MatchOutcome& m);

/// Counts after moving `moved` false positives to true positives.
MldEvalResult reclassify_ctp(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t moved);

struct CtpAnalysis {
  std::vector<bool> is_ctp;          // one flag per FP MLD
  std::vector<double> p_values;      // Mann-Whitney p of {fp_mld} vs gt_mlds
  MldEvalResult as_fp;               // CTPs left as false positives
  MldEvalResult as_tp;               // CTPs counted as true positives
};

/// Two-sided Mann-Whitney p-value of each singleton {fp_mld} against
/// gt_mlds. Throws InputError on an empty gt distribution.
std::vector<double> ctp_p_values(std::span<const double> fp_mlds, std::span<const double> gt_mlds,
                                 const MannWhitneyOptions& mw = {});

/// Flags an FP as a candidate TP when the two-sided Mann-Whitney p-value of
/// the singleton {fp_mld} against gt_mlds exceeds alpha, then recomputes
/// the metrics with those FPs counted as TPs. `fp_mlds` must have one
/// entry per FP of `base`. Throws InputError on an empty gt distribution.
CtpAnalysis ctp_analysis(std::span<const double> fp_mlds, std::span<const double> gt_mlds,
                         const MatchOutcome& base, double alpha = 0.05,
                         const MannWhitneyOptions& mw = {});

}  // namespace angio
