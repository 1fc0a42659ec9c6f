#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "angio/geometry.hpp"
#include "angio/random.hpp"

namespace angio {

// ---------------------------------------------------------------------------
// Configuration. Every magnitude is configurable; defaults below.

struct StaticConfig {
  double clahe_clip = 4.0;
  int clahe_tiles = 8;  // tiles per axis
  double noise_lo = 0.9;
  double noise_hi = 1.1;
  int median_kernel = 5;
  int motion_length = 9;
  int defocus_radius = 3;
  int shuffle_windows = 1000;
  int shuffle_min_side = 4;
  int shuffle_max_side = 16;
};

struct DynamicConfig {
  double p_scale = 0.5;
  double scale_lo = 0.8;
  double scale_hi = 1.2;
  double p_erase = 0.5;
  double erase_area_lo = 0.02;
  double erase_area_hi = 0.1;
  double erase_aspect_lo = 0.3;
  double erase_aspect_hi = 3.3;
  double p_translate = 0.5;
  double translate_frac = 0.1;
  double p_jiggle = 0.5;
  double brightness_lo = 0.8;
  double brightness_hi = 1.2;
  double contrast_lo = 0.8;
  double contrast_hi = 1.2;
  double p_flip = 0.5;
  double min_area_frac = 0.25;
};

struct CompositeConfig {
  bool mosaic = true;
  double jitter = 0.5;  // centre drawn within this central fraction of the canvas
  int target_width = 0;   // 0: width of the first input
  int target_height = 0;  // 0: height of the first input
  double min_side = 2.0;
  double min_area_frac = 0.25;
};

struct AugmentConfig {
  StaticConfig static_tier;
  DynamicConfig dynamic_tier;
  CompositeConfig composite_tier;
  std::uint64_t master_seed = 0;

  /// Throws InputError on probabilities outside [0,1], reversed ranges, or
  /// kernel sizes that are even or below 3.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Samples

struct Provenance {
  std::string source_id;
  std::vector<std::string> sources;     // every source image id that contributed
  std::vector<std::string> tiers;       // tiers applied, lowest first
  std::vector<std::string> transforms;  // transform tags, in application order
  std::uint64_t seed = 0;               // stream seed of the last stage
  std::uint64_t epoch = 0;
};

struct AugmentedSample {
  std::string id;
  GrayImage image;
  std::vector<LesionAnnotation> annotations;
  Provenance provenance;
};

// ---------------------------------------------------------------------------
// Static (photometric) transforms. None of them moves annotations.

/// Contrast-limited adaptive histogram equalisation on a tiles x tiles grid
/// (image reflected to a whole number of tiles), bilinear between tile LUTs.
GrayImage clahe(const GrayImage& img, double clip_limit, int tiles);
/// 255 - p.
GrayImage invert(const GrayImage& img);
/// p * f with f uniform in [lo, hi) per pixel, rounded and clamped.
GrayImage multiplicative_noise(const GrayImage& img, double lo, double hi, Rng& rng);
/// Median over a k x k window, edges replicated.
GrayImage median_blur(const GrayImage& img, int k);
/// Normalised line kernel of `length` taps at `angle_deg` (integer weights).
Grid<int> motion_kernel(int length, double angle_deg);
/// Normalised disc kernel of the given radius.
Grid<int> disc_kernel(int radius);
/// Convolution with an integer kernel normalised by its sum, edges replicated.
GrayImage convolve_normalized(const GrayImage& img, const Grid<int>& kernel);

struct ShuffleWindow {
  int x = 0;
  int y = 0;
  int side = 0;
};

/// Shuffles pixels within `count` random square windows, applied in order.
/// Returns the windows used.
std::vector<ShuffleWindow> local_pixel_shuffle(GrayImage& img, int count, int min_side,
                                               int max_side, Rng& rng);

/// Original plus one sample per static transform (8 total), annotations
/// copied unchanged. Each transform draws from its own stream derived from
/// (seed, id, transform).
std::vector<AugmentedSample> static_expand(const std::string& id, const GrayImage& img,
                                           const std::vector<LesionAnnotation>& anns,
                                           const AugmentConfig& cfg, std::uint64_t seed);

/// Tags of the eight static samples, in output order.
const std::vector<std::string>& static_transform_tags();

// ---------------------------------------------------------------------------
// Geometric remapping

/// x' = sx * x + tx, y' = sy * y + ty.
struct Affine {
  double sx = 1.0;
  double sy = 1.0;
  double tx = 0.0;
  double ty = 0.0;
  [[nodiscard]] Affine inverse() const noexcept {
    return {1.0 / sx, 1.0 / sy, -tx / sx, -ty / sy};
  }
  [[nodiscard]] Point apply(const Point& p) const noexcept {
    return {sx * p.x + tx, sy * p.y + ty};
  }
};

/// Image of a box under the affine map (corners re-ordered, no clipping).
BoundingBox remap_box(const BoundingBox& b, const Affine& a) noexcept;

struct RemapRules {
  double min_area_frac = 0.25;  // clipped area / remapped area
  double min_side = 0.0;
};

/// Remaps annotations onto a width x height canvas. A box is dropped when
/// clipping leaves less than min_area_frac of its remapped area or a side
/// shorter than min_side. MLD points are moved with their box and cleared
/// when they fall outside it; mld_px scales with the map.
std::vector<LesionAnnotation> remap_annotations(std::span<const LesionAnnotation> anns,
                                                const Affine& a, int width, int height,
                                                const RemapRules& rules);

// ---------------------------------------------------------------------------
// Dynamic transforms

/// Zoom by `factor` about the canvas centre, canvas size kept (pad 0).
AugmentedSample random_scale(const AugmentedSample& s, double factor, double min_area_frac);
/// Fills the rectangle with the rounded image mean.
AugmentedSample random_erase(const AugmentedSample& s, int x, int y, int w, int h);
/// Integer shift, vacated pixels set to 0.
AugmentedSample random_translate(const AugmentedSample& s, int dx, int dy, double min_area_frac);
/// Brightness then contrast about the scaled mean.
AugmentedSample color_jiggle(const AugmentedSample& s, double brightness, double contrast);
/// Mirror columns; box x -> width - x.
AugmentedSample horizontal_flip(const AugmentedSample& s);

/// Scaling, erasing, translation, colour jiggle, and horizontal flip, each
/// applied independently with its probability, in that order.
AugmentedSample apply_dynamic(const AugmentedSample& s, const AugmentConfig& cfg, Rng& rng);

/// 2x2 composition around a jittered centre; each input is resized into
/// its quadrant. Throws InputError unless exactly four samples are given.
AugmentedSample mosaic(std::span<const AugmentedSample> samples, const AugmentConfig& cfg,
                       Rng& rng);

/// Mosaic with an explicit centre (cx, cy) on a width x height canvas.
AugmentedSample mosaic_at(std::span<const AugmentedSample> samples, int width, int height, int cx,
                          int cy, const CompositeConfig& cfg);

// ---------------------------------------------------------------------------
// Training stream

struct TierSet {
  bool static_tier = false;
  bool dynamic_tier = false;
  bool composite_tier = false;

  /// Parses a comma-separated list of "static", "dynamic", "composite".
  /// Throws InputError on unknown names or composite without dynamic.
  static TierSet parse(const std::string& list);
  void validate() const;
};

struct SourceImage {
  std::string id;
  GrayImage image;
  std::vector<LesionAnnotation> lesions;
};

struct StreamOptions {
  std::uint64_t epoch = 0;
  /// Final training epochs: the composite tier is skipped.
  bool final_epochs = false;
  unsigned jobs = 1;
};

/// Static tier first (8x expansion), then dynamic on every sample, then
/// mosaic of each sample with three others drawn from the same pool. The
/// output is a pure function of (sources, cfg, tiers, epoch) regardless of
/// `jobs`.
std::vector<AugmentedSample> build_training_stream(std::span<const SourceImage> sources,
                                                   const AugmentConfig& cfg, TierSet tiers,
                                                   const StreamOptions& opts = {});

}  // namespace angio
