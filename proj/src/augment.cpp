#include "angio/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "angio/parallel.hpp"

namespace angio {
namespace {

std::uint8_t clamp_byte(double v) noexcept {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

int reflect101(int i, int n) noexcept {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
  return i;
}

void require(bool ok, const char* what) {
  if (!ok) throw InputError(std::string("invalid augment config: ") + what);
}

bool is_prob(double p) { return p >= 0.0 && p <= 1.0; }

constexpr std::uint64_t kTierStatic = 1;
constexpr std::uint64_t kTierDynamic = 2;
constexpr std::uint64_t kTierComposite = 3;

}  // namespace

void AugmentConfig::validate() const {
  const auto& s = static_tier;
  require(s.clahe_clip > 0.0, "clahe_clip must be positive");
  require(s.clahe_tiles >= 1, "clahe_tiles must be >= 1");
  require(s.noise_lo >= 0.0 && s.noise_lo <= s.noise_hi, "noise range");
  require(s.median_kernel >= 3 && s.median_kernel % 2 == 1, "median_kernel must be odd and >= 3");
  require(s.motion_length >= 3 && s.motion_length % 2 == 1, "motion_length must be odd and >= 3");
  require(s.defocus_radius >= 1, "defocus_radius must be >= 1");
  require(s.shuffle_windows >= 0, "shuffle_windows must be >= 0");
  require(s.shuffle_min_side >= 1 && s.shuffle_min_side <= s.shuffle_max_side, "shuffle side range");

  const auto& d = dynamic_tier;
  require(is_prob(d.p_scale) && is_prob(d.p_erase) && is_prob(d.p_translate) &&
              is_prob(d.p_jiggle) && is_prob(d.p_flip),
          "probabilities must be in [0,1]");
  require(d.scale_lo > 0.0 && d.scale_lo <= d.scale_hi, "scale range");
  require(d.erase_area_lo >= 0.0 && d.erase_area_lo <= d.erase_area_hi && d.erase_area_hi <= 1.0,
          "erase area range");
  require(d.erase_aspect_lo > 0.0 && d.erase_aspect_lo <= d.erase_aspect_hi, "erase aspect range");
  require(d.translate_frac >= 0.0 && d.translate_frac <= 1.0, "translate_frac");
  require(d.brightness_lo >= 0.0 && d.brightness_lo <= d.brightness_hi, "brightness range");
  require(d.contrast_lo >= 0.0 && d.contrast_lo <= d.contrast_hi, "contrast range");
  require(is_prob(d.min_area_frac), "min_area_frac must be in [0,1]");

  const auto& c = composite_tier;
  require(is_prob(c.jitter), "jitter must be in [0,1]");
  require(c.target_width >= 0 && c.target_height >= 0, "target size");
  require(c.min_side >= 0.0 && is_prob(c.min_area_frac), "composite box filters");
}

// ---------------------------------------------------------------------------
// Static transforms

GrayImage clahe(const GrayImage& img, double clip_limit, int tiles) {
  const int w = img.width();
  const int h = img.height();
  if (img.empty()) return img;
  const int tw = (w + tiles - 1) / tiles;
  const int th = (h + tiles - 1) / tiles;
  const int area = tw * th;
  const int clip = std::max(1, static_cast<int>(clip_limit * area / 256.0));
  const double lut_scale = 255.0 / area;

  std::vector<std::array<std::uint8_t, 256>> luts(static_cast<std::size_t>(tiles) * tiles);
  for (int ty = 0; ty < tiles; ++ty) {
    for (int tx = 0; tx < tiles; ++tx) {
      std::array<int, 256> hist{};
      for (int y = ty * th; y < (ty + 1) * th; ++y)
        for (int x = tx * tw; x < (tx + 1) * tw; ++x) ++hist[img(reflect101(x, w), reflect101(y, h))];

      int excess = 0;
      for (int& v : hist) {
        if (v > clip) {
          excess += v - clip;
          v = clip;
        }
      }
      const int batch = excess / 256;
      int residual = excess - batch * 256;
      for (int& v : hist) v += batch;
      if (residual > 0) {
        const int step = std::max(256 / residual, 1);
        for (int i = 0; i < 256 && residual > 0; i += step, --residual) ++hist[i];
      }

      auto& lut = luts[static_cast<std::size_t>(ty) * tiles + tx];
      int sum = 0;
      for (int i = 0; i < 256; ++i) {
        sum += hist[i];
        lut[i] = clamp_byte(sum * lut_scale);
      }
    }
  }

  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const double fy = (y + 0.5) / th - 0.5;
    const int ty1 = static_cast<int>(std::floor(fy));
    const double wy = fy - ty1;
    const int ty0c = std::clamp(ty1, 0, tiles - 1);
    const int ty1c = std::clamp(ty1 + 1, 0, tiles - 1);
    for (int x = 0; x < w; ++x) {
      const double fx = (x + 0.5) / tw - 0.5;
      const int tx1 = static_cast<int>(std::floor(fx));
      const double wx = fx - tx1;
      const int tx0c = std::clamp(tx1, 0, tiles - 1);
      const int tx1c = std::clamp(tx1 + 1, 0, tiles - 1);
      const std::uint8_t p = img(x, y);
      const auto lut = [&](int tyi, int txi) {
        return static_cast<double>(luts[static_cast<std::size_t>(tyi) * tiles + txi][p]);
      };
      const double top = lut(ty0c, tx0c) * (1.0 - wx) + lut(ty0c, tx1c) * wx;
      const double bot = lut(ty1c, tx0c) * (1.0 - wx) + lut(ty1c, tx1c) * wx;
      out(x, y) = clamp_byte(top * (1.0 - wy) + bot * wy);
    }
  }
  return out;
}

GrayImage invert(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  std::transform(img.data().begin(), img.data().end(), out.data().begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(255 - v); });
  return out;
}

GrayImage multiplicative_noise(const GrayImage& img, double lo, double hi, Rng& rng) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    out.data()[i] = clamp_byte(img.data()[i] * rng.uniform(lo, hi));
  return out;
}

GrayImage median_blur(const GrayImage& img, int k) {
  const int r = k / 2;
  GrayImage out(img.width(), img.height());
  std::vector<std::uint8_t> window(static_cast<std::size_t>(k) * k);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      std::size_t n = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          window[n++] = img(std::clamp(x + dx, 0, img.width() - 1),
                            std::clamp(y + dy, 0, img.height() - 1));
      std::nth_element(window.begin(), window.begin() + n / 2, window.end());
      out(x, y) = window[n / 2];
    }
  }
  return out;
}

Grid<int> motion_kernel(int length, double angle_deg) {
  const int r = length / 2;
  Grid<int> k(length, length, 0);
  const double a = angle_deg * std::numbers::pi / 180.0;
  for (int t = -r; t <= r; ++t) {
    const int x = static_cast<int>(std::lround(t * std::cos(a)));
    const int y = static_cast<int>(std::lround(t * std::sin(a)));
    k(x + r, y + r) = 1;
  }
  return k;
}

Grid<int> disc_kernel(int radius) {
  const int n = 2 * radius + 1;
  Grid<int> k(n, n, 0);
  for (int y = -radius; y <= radius; ++y)
    for (int x = -radius; x <= radius; ++x)
      if (x * x + y * y <= radius * radius) k(x + radius, y + radius) = 1;
  return k;
}

GrayImage convolve_normalized(const GrayImage& img, const Grid<int>& kernel) {
  const int rx = kernel.width() / 2;
  const int ry = kernel.height() / 2;
  long long total = 0;
  for (int v : kernel.data()) total += v;
  if (total <= 0) throw InputError("kernel weights must sum to a positive value");

  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      long long acc = 0;
      for (int ky = 0; ky < kernel.height(); ++ky)
        for (int kx = 0; kx < kernel.width(); ++kx) {
          const int wgt = kernel(kx, ky);
          if (wgt == 0) continue;
          acc += static_cast<long long>(wgt) *
                 img(std::clamp(x + kx - rx, 0, img.width() - 1),
                     std::clamp(y + ky - ry, 0, img.height() - 1));
        }
      out(x, y) = static_cast<std::uint8_t>((acc + total / 2) / total);
    }
  }
  return out;
}

std::vector<ShuffleWindow> local_pixel_shuffle(GrayImage& img, int count, int min_side,
                                               int max_side, Rng& rng) {
  std::vector<ShuffleWindow> windows;
  if (img.empty()) return windows;
  const int limit = std::min(img.width(), img.height());
  std::vector<std::uint8_t> buf;
  for (int i = 0; i < count; ++i) {
    const int side = std::min(rng.between(min_side, max_side), limit);
    const int x0 = rng.between(0, img.width() - side);
    const int y0 = rng.between(0, img.height() - side);
    buf.clear();
    for (int y = y0; y < y0 + side; ++y)
      for (int x = x0; x < x0 + side; ++x) buf.push_back(img(x, y));
    for (std::size_t j = buf.size(); j > 1; --j) std::swap(buf[j - 1], buf[rng.below(j)]);
    std::size_t n = 0;
    for (int y = y0; y < y0 + side; ++y)
      for (int x = x0; x < x0 + side; ++x) img(x, y) = buf[n++];
    windows.push_back({x0, y0, side});
  }
  return windows;
}

const std::vector<std::string>& static_transform_tags() {
  static const std::vector<std::string> tags = {
      "original",     "clahe",       "inversion",    "multiplicative_noise",
      "median_blur",  "motion_blur", "defocus_blur", "local_pixel_shuffling"};
  return tags;
}

std::vector<AugmentedSample> static_expand(const std::string& id, const GrayImage& img,
                                           const std::vector<LesionAnnotation>& anns,
                                           const AugmentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto& s = cfg.static_tier;
  const auto& tags = static_transform_tags();
  std::vector<AugmentedSample> out;
  out.reserve(tags.size());
  for (std::size_t k = 0; k < tags.size(); ++k) {
    const std::uint64_t sample_seed = derive_seed(seed, {fnv1a(id), kTierStatic, k});
    Rng rng(sample_seed);
    GrayImage res;
    switch (k) {
      case 0: res = img; break;
      case 1: res = clahe(img, s.clahe_clip, s.clahe_tiles); break;
      case 2: res = invert(img); break;
      case 3: res = multiplicative_noise(img, s.noise_lo, s.noise_hi, rng); break;
      case 4: res = median_blur(img, s.median_kernel); break;
      case 5: res = convolve_normalized(img, motion_kernel(s.motion_length, rng.uniform(0.0, 180.0))); break;
      case 6: res = convolve_normalized(img, disc_kernel(s.defocus_radius)); break;
      default:
        res = img;
        local_pixel_shuffle(res, s.shuffle_windows, s.shuffle_min_side, s.shuffle_max_side, rng);
        break;
    }
    AugmentedSample smp;
    smp.id = id + "__" + tags[k];
    smp.image = std::move(res);
    smp.annotations = anns;
    smp.provenance.source_id = id;
    smp.provenance.sources = {id};
    smp.provenance.tiers = {"static"};
    smp.provenance.transforms = {tags[k]};
    smp.provenance.seed = sample_seed;
    out.push_back(std::move(smp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Geometry

BoundingBox remap_box(const BoundingBox& b, const Affine& a) noexcept {
  const Point p = a.apply({b.x_min, b.y_min});
  const Point q = a.apply({b.x_max, b.y_max});
  return {std::min(p.x, q.x), std::min(p.y, q.y), std::max(p.x, q.x), std::max(p.y, q.y)};
}

std::vector<LesionAnnotation> remap_annotations(std::span<const LesionAnnotation> anns,
                                                const Affine& a, int width, int height,
                                                const RemapRules& rules) {
  std::vector<LesionAnnotation> out;
  const double linear_scale = std::sqrt(std::fabs(a.sx * a.sy));
  for (const auto& ann : anns) {
    const BoundingBox moved = remap_box(ann.bbox, a);
    const BoundingBox clipped = clip_box(moved, width, height);
    if (!(clipped.width() > 0.0) || !(clipped.height() > 0.0)) continue;
    if (clipped.area() < rules.min_area_frac * moved.area()) continue;
    if (clipped.width() < rules.min_side || clipped.height() < rules.min_side) continue;
    LesionAnnotation r;
    r.bbox = clipped;
    if (ann.mld_point) {
      const Point p = a.apply(*ann.mld_point);
      if (bbox_contains(clipped, p)) {
        r.mld_point = p;
        if (ann.mld_px) r.mld_px = *ann.mld_px * linear_scale;
      }
    } else if (ann.mld_px) {
      r.mld_px = *ann.mld_px * linear_scale;
    }
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dynamic transforms

AugmentedSample random_scale(const AugmentedSample& s, double factor, double min_area_frac) {
  const int w = s.image.width();
  const int h = s.image.height();
  const double cx = w / 2.0;
  const double cy = h / 2.0;
  AugmentedSample out = s;
  for (int v = 0; v < h; ++v) {
    const double sy = (v - cy) / factor + cy;
    for (int u = 0; u < w; ++u) {
      const double sx = (u - cx) / factor + cx;
      const bool inside = sx > -1.0 && sy > -1.0 && sx < w && sy < h;
      out.image(u, v) = inside ? clamp_byte(sample_bilinear(s.image, sx, sy)) : 0;
    }
  }
  const Affine a{factor, factor, cx - factor * cx, cy - factor * cy};
  out.annotations = remap_annotations(s.annotations, a, w, h, {min_area_frac, 0.0});
  return out;
}

AugmentedSample random_erase(const AugmentedSample& s, int x, int y, int w, int h) {
  AugmentedSample out = s;
  if (s.image.empty()) return out;
  double sum = 0.0;
  for (auto v : s.image.data()) sum += v;
  const std::uint8_t fill = clamp_byte(sum / static_cast<double>(s.image.size()));
  for (int yy = std::max(0, y); yy < std::min(y + h, s.image.height()); ++yy)
    for (int xx = std::max(0, x); xx < std::min(x + w, s.image.width()); ++xx) out.image(xx, yy) = fill;
  return out;
}

AugmentedSample random_translate(const AugmentedSample& s, int dx, int dy, double min_area_frac) {
  AugmentedSample out = s;
  const int w = s.image.width();
  const int h = s.image.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.image(x, y) = s.image.at_or(x - dx, y - dy, 0);
  out.annotations = remap_annotations(s.annotations, Affine{1.0, 1.0, double(dx), double(dy)}, w,
                                      h, {min_area_frac, 0.0});
  return out;
}

AugmentedSample color_jiggle(const AugmentedSample& s, double brightness, double contrast) {
  AugmentedSample out = s;
  if (s.image.empty()) return out;
  double sum = 0.0;
  for (auto v : s.image.data()) sum += v;
  const double m = sum / static_cast<double>(s.image.size()) * brightness;
  for (std::size_t i = 0; i < s.image.size(); ++i)
    out.image.data()[i] = clamp_byte((s.image.data()[i] * brightness - m) * contrast + m);
  return out;
}

AugmentedSample horizontal_flip(const AugmentedSample& s) {
  AugmentedSample out = s;
  out.image = flip_horizontal(s.image);
  const int w = s.image.width();
  out.annotations = remap_annotations(s.annotations, Affine{-1.0, 1.0, double(w), 0.0}, w,
                                      s.image.height(), {0.0, 0.0});
  return out;
}

AugmentedSample apply_dynamic(const AugmentedSample& s, const AugmentConfig& cfg, Rng& rng) {
  const auto& d = cfg.dynamic_tier;
  AugmentedSample cur = s;
  // Every draw happens regardless of the outcome so a transform's
  // parameters do not depend on whether earlier ones fired.
  const bool do_scale = rng.bernoulli(d.p_scale);
  const double factor = rng.uniform(d.scale_lo, d.scale_hi);
  if (do_scale) {
    cur = random_scale(cur, factor, d.min_area_frac);
    cur.provenance.transforms.push_back("random_scaling");
  }

  const bool do_erase = rng.bernoulli(d.p_erase);
  const double area_frac = rng.uniform(d.erase_area_lo, d.erase_area_hi);
  const double aspect = rng.uniform(d.erase_aspect_lo, d.erase_aspect_hi);
  const double ex = rng.uniform();
  const double ey = rng.uniform();
  if (do_erase && !cur.image.empty()) {
    const double area = area_frac * cur.image.width() * cur.image.height();
    const int ew = std::clamp(static_cast<int>(std::lround(std::sqrt(area * aspect))), 1, cur.image.width());
    const int eh = std::clamp(static_cast<int>(std::lround(std::sqrt(area / aspect))), 1, cur.image.height());
    const int x0 = static_cast<int>(ex * (cur.image.width() - ew + 1));
    const int y0 = static_cast<int>(ey * (cur.image.height() - eh + 1));
    cur = random_erase(cur, x0, y0, ew, eh);
    cur.provenance.transforms.push_back("random_erasing");
  }

  const bool do_translate = rng.bernoulli(d.p_translate);
  const double fx = rng.uniform(-d.translate_frac, d.translate_frac);
  const double fy = rng.uniform(-d.translate_frac, d.translate_frac);
  if (do_translate) {
    const int dx = static_cast<int>(std::lround(fx * cur.image.width()));
    const int dy = static_cast<int>(std::lround(fy * cur.image.height()));
    cur = random_translate(cur, dx, dy, d.min_area_frac);
    cur.provenance.transforms.push_back("random_translation");
  }

  const bool do_jiggle = rng.bernoulli(d.p_jiggle);
  const double brightness = rng.uniform(d.brightness_lo, d.brightness_hi);
  const double contrast = rng.uniform(d.contrast_lo, d.contrast_hi);
  if (do_jiggle) {
    cur = color_jiggle(cur, brightness, contrast);
    cur.provenance.transforms.push_back("random_color_jiggle");
  }

  if (rng.bernoulli(d.p_flip)) {
    cur = horizontal_flip(cur);
    cur.provenance.transforms.push_back("random_horizontal_flip");
  }
  return cur;
}

AugmentedSample mosaic_at(std::span<const AugmentedSample> samples, int width, int height, int cx,
                          int cy, const CompositeConfig& cfg) {
  if (samples.size() != 4) throw InputError("mosaic needs exactly four samples");
  if (width <= 0 || height <= 0) throw InputError("mosaic canvas must be non-empty");
  cx = std::clamp(cx, 0, width);
  cy = std::clamp(cy, 0, height);

  AugmentedSample out;
  out.image = GrayImage(width, height, 0);
  const std::array<std::array<int, 4>, 4> quads = {{{0, 0, cx, cy},
                                                    {cx, 0, width, cy},
                                                    {0, cy, cx, height},
                                                    {cx, cy, width, height}}};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& src = samples[k];
    const auto [x0, y0, x1, y1] = quads[k];
    const int qw = x1 - x0;
    const int qh = y1 - y0;
    if (qw <= 0 || qh <= 0 || src.image.empty()) continue;
    const double sx = static_cast<double>(qw) / src.image.width();
    const double sy = static_cast<double>(qh) / src.image.height();
    for (int v = 0; v < qh; ++v)
      for (int u = 0; u < qw; ++u)
        out.image(x0 + u, y0 + v) = clamp_byte(sample_bilinear(src.image, u / sx, v / sy));
    const auto anns = remap_annotations(src.annotations, Affine{sx, sy, double(x0), double(y0)},
                                        width, height, {cfg.min_area_frac, cfg.min_side});
    out.annotations.insert(out.annotations.end(), anns.begin(), anns.end());
  }

  out.id = samples[0].id + "__mosaic";
  auto& prov = out.provenance;
  prov = samples[0].provenance;
  prov.sources.clear();
  for (const auto& s : samples)
    for (const auto& id : s.provenance.sources)
      if (std::find(prov.sources.begin(), prov.sources.end(), id) == prov.sources.end())
        prov.sources.push_back(id);
  prov.tiers.push_back("composite");
  prov.transforms.push_back("mosaic");
  return out;
}

AugmentedSample mosaic(std::span<const AugmentedSample> samples, const AugmentConfig& cfg,
                       Rng& rng) {
  if (samples.size() != 4) throw InputError("mosaic needs exactly four samples");
  const auto& c = cfg.composite_tier;
  const int w = c.target_width > 0 ? c.target_width : samples[0].image.width();
  const int h = c.target_height > 0 ? c.target_height : samples[0].image.height();
  const double jx = rng.uniform(-c.jitter / 2.0, c.jitter / 2.0);
  const double jy = rng.uniform(-c.jitter / 2.0, c.jitter / 2.0);
  const int cx = static_cast<int>(std::lround(w * (0.5 + jx)));
  const int cy = static_cast<int>(std::lround(h * (0.5 + jy)));
  return mosaic_at(samples, w, h, cx, cy, c);
}

// ---------------------------------------------------------------------------
// Stream

TierSet TierSet::parse(const std::string& list) {
  TierSet t;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item == "static") t.static_tier = true;
    else if (item == "dynamic") t.dynamic_tier = true;
    else if (item == "composite") t.composite_tier = true;
    else if (!item.empty()) throw InputError("unknown augmentation tier '" + item + "'");
  }
  t.validate();
  return t;
}

void TierSet::validate() const {
  if (composite_tier && !dynamic_tier)
    throw InputError("composite tier requires the dynamic tier beneath it");
}

std::vector<AugmentedSample> build_training_stream(std::span<const SourceImage> sources,
                                                   const AugmentConfig& cfg, TierSet tiers,
                                                   const StreamOptions& opts) {
  cfg.validate();
  tiers.validate();
  const std::uint64_t seed = cfg.master_seed;

  const std::size_t per_source = tiers.static_tier ? static_transform_tags().size() : 1;
  std::vector<AugmentedSample> pool(sources.size() * per_source);
  parallel_for(sources.size(), opts.jobs, [&](std::size_t i) {
    const auto& src = sources[i];
    if (tiers.static_tier) {
      auto expanded = static_expand(src.id, src.image, src.lesions, cfg, seed);
      std::move(expanded.begin(), expanded.end(), pool.begin() + static_cast<std::ptrdiff_t>(i * per_source));
    } else {
      AugmentedSample s;
      s.id = src.id;
      s.image = src.image;
      s.annotations = src.lesions;
      s.provenance.source_id = src.id;
      s.provenance.sources = {src.id};
      pool[i] = std::move(s);
    }
  });

  if (tiers.dynamic_tier) {
    parallel_for(pool.size(), opts.jobs, [&](std::size_t i) {
      const std::uint64_t s = derive_seed(seed, {fnv1a(pool[i].id), kTierDynamic, opts.epoch});
      Rng rng(s);
      pool[i] = apply_dynamic(pool[i], cfg, rng);
      pool[i].provenance.tiers.push_back("dynamic");
      pool[i].provenance.seed = s;
      pool[i].provenance.epoch = opts.epoch;
    });
  }

  if (!tiers.composite_tier || opts.final_epochs || !cfg.composite_tier.mosaic) return pool;
  if (pool.size() < 4) throw InputError("mosaic needs at least four samples in the pool");

  std::vector<AugmentedSample> mixed(pool.size());
  parallel_for(pool.size(), opts.jobs, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, {fnv1a(pool[i].id), kTierComposite, opts.epoch});
    Rng rng(s);
    std::vector<std::size_t> picks{i};
    while (picks.size() < 4) {
      const auto c = static_cast<std::size_t>(rng.below(pool.size()));
      if (std::find(picks.begin(), picks.end(), c) == picks.end()) picks.push_back(c);
    }
    const std::array<AugmentedSample, 4> group = {pool[picks[0]], pool[picks[1]], pool[picks[2]],
                                                  pool[picks[3]]};
    mixed[i] = mosaic(group, cfg, rng);
    mixed[i].provenance.seed = s;
    mixed[i].provenance.epoch = opts.epoch;
  });
  return mixed;
}

}  // namespace angio
