#include "doctest.h"

#include <algorithm>
#include <map>

#include "angio/augment.hpp"
#include "synth.hpp"

using namespace angio;

namespace {

std::vector<LesionAnnotation> sample_anns() {
  return {{{10, 10, 30, 25}, Point{20, 17}, 3.0}, {{40, 5, 60, 40}, std::nullopt, std::nullopt}};
}

AugmentConfig zero_dynamic() {
  AugmentConfig c;
  auto& d = c.dynamic_tier;
  d.p_scale = d.p_erase = d.p_translate = d.p_jiggle = d.p_flip = 0.0;
  return c;
}

}  // namespace

TEST_CASE("static tier expands eightfold") {
  Rng rng(1);
  const GrayImage img = synth::textured_image(rng, 64, 48);
  const auto anns = sample_anns();
  const auto out = static_expand("img", img, anns, AugmentConfig{}, 42);
  REQUIRE(out.size() == 8);
  CHECK(out[0].image == img);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].annotations == anns);
    CHECK(out[i].id == "img__" + static_transform_tags()[i]);
  }
  const auto again = static_expand("img", img, anns, AugmentConfig{}, 42);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].image == again[i].image);
}

TEST_CASE("constant image stays constant under smoothing transforms") {
  const GrayImage c(40, 30, 90);
  CHECK(median_blur(c, 5) == c);
  CHECK(convolve_normalized(c, motion_kernel(9, 30)) == c);
  CHECK(convolve_normalized(c, disc_kernel(3)) == c);
  const GrayImage e = clahe(c, 4.0, 8);
  const auto v0 = e(0, 0);
  for (auto v : e.data()) CHECK(v == v0);
}

TEST_CASE("inversion is an involution") {
  Rng rng(2);
  const GrayImage img = synth::random_image(rng, 17, 9);
  CHECK(invert(img)(3, 4) == 255 - img(3, 4));
  CHECK(invert(invert(img)) == img);
}

TEST_CASE("multiplicative noise bounds") {
  Rng rng(3);
  const GrayImage img = synth::random_image(rng, 32, 32);
  Rng noise(4);
  const GrayImage out = multiplicative_noise(img, 0.9, 1.1, noise);
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    const double p = img.data()[i];
    CHECK(out.data()[i] >= std::floor(0.9 * p));
    CHECK(out.data()[i] <= std::min(255.0, std::ceil(1.1 * p)));
  }
}

TEST_CASE("pixel shuffle keeps window multisets") {
  Rng rng(5);
  GrayImage img = synth::random_image(rng, 40, 40);
  Rng srng(6);
  for (int k = 0; k < 30; ++k) {
    const GrayImage before = img;
    const auto w = local_pixel_shuffle(img, 1, 4, 16, srng);
    REQUIRE(w.size() == 1);
    std::vector<int> a, b;
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 40; ++x) {
        const bool inside = x >= w[0].x && x < w[0].x + w[0].side && y >= w[0].y && y < w[0].y + w[0].side;
        if (inside) {
          a.push_back(before(x, y));
          b.push_back(img(x, y));
        } else {
          REQUIRE(before(x, y) == img(x, y));
        }
      }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("all-zero probabilities leave the sample alone") {
  Rng rng(7);
  AugmentedSample s{"s", synth::textured_image(rng, 50, 50), sample_anns(), {}};
  Rng r(8);
  const AugmentedSample o = apply_dynamic(s, zero_dynamic(), r);
  CHECK(o.image == s.image);
  CHECK(o.annotations == s.annotations);
}

TEST_CASE("flip remaps boxes and is an involution") {
  Rng rng(9);
  AugmentedSample s{"s", synth::textured_image(rng, 64, 48), sample_anns(), {}};
  const AugmentedSample f = horizontal_flip(s);
  CHECK(f.annotations[0].bbox.x_min == 64 - 30);
  CHECK(f.annotations[0].bbox.x_max == 64 - 10);
  CHECK(f.annotations[0].mld_point->x == 64 - 20);
  const AugmentedSample ff = horizontal_flip(f);
  CHECK(ff.image == s.image);
  CHECK(ff.annotations == s.annotations);
}

TEST_CASE("translate shifts boxes") {
  Rng rng(10);
  AugmentedSample s{"s", synth::textured_image(rng, 100, 100), sample_anns(), {}};
  const AugmentedSample t = random_translate(s, 10, 5, 0.25);
  CHECK(t.annotations[0].bbox.x_min == 20);
  CHECK(t.annotations[0].bbox.y_min == 15);
  CHECK(t.annotations[0].bbox.x_max == 40);
  CHECK(t.image(20, 15) == s.image(10, 10));
}

TEST_CASE("affine remap round trip") {
  const Affine a{1.3, 0.8, 7.5, -3.0};
  const BoundingBox b{10, 20, 30, 45};
  const BoundingBox back = remap_box(remap_box(b, a), a.inverse());
  CHECK(back.x_min == doctest::Approx(b.x_min));
  CHECK(back.y_max == doctest::Approx(b.y_max));
}

TEST_CASE("mosaic keeps boxes on the canvas") {
  Rng rng(11);
  std::vector<AugmentedSample> four;
  for (int i = 0; i < 4; ++i)
    four.push_back({"m" + std::to_string(i), synth::textured_image(rng, 64, 64), sample_anns(), {}});
  const AugmentedSample m = mosaic_at(four, 64, 64, 32, 32, CompositeConfig{});
  CHECK(m.image.width() == 64);
  CHECK(m.annotations.size() <= 8);
  for (const auto& a : m.annotations) {
    CHECK(a.bbox.x_min >= 0);
    CHECK(a.bbox.x_max <= 64);
    CHECK(a.bbox.y_max <= 64);
  }
  Rng r(1);
  CHECK_THROWS_AS(mosaic(std::span(four).first(3), AugmentConfig{}, r), InputError);
}

TEST_CASE("tiers") {
  CHECK_THROWS_AS(TierSet::parse("static,composite"), InputError);
  CHECK_THROWS_AS(TierSet::parse("static,bogus"), InputError);
  const TierSet t = TierSet::parse("static,dynamic,composite");
  CHECK(t.composite_tier);
}

TEST_CASE("training stream is deterministic across worker counts") {
  Rng rng(12);
  std::vector<SourceImage> src;
  for (int i = 0; i < 3; ++i) src.push_back({"s" + std::to_string(i), synth::textured_image(rng, 48, 40), sample_anns()});
  AugmentConfig cfg;
  cfg.master_seed = 99;
  const TierSet all = TierSet::parse("static,dynamic,composite");
  const auto a = build_training_stream(src, cfg, all, {3, false, 1});
  const auto b = build_training_stream(src, cfg, all, {3, false, 4});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].image == b[i].image);
    CHECK(a[i].annotations == b[i].annotations);
  }
  CHECK(build_training_stream(src, cfg, TierSet::parse("static")).size() == 24);
  const auto fin = build_training_stream(src, cfg, all, {3, true, 1});
  for (const auto& s : fin)
    CHECK(std::find(s.provenance.tiers.begin(), s.provenance.tiers.end(), "composite") == s.provenance.tiers.end());
  bool saw_composite = false;
  for (const auto& s : a)
    saw_composite |= std::find(s.provenance.tiers.begin(), s.provenance.tiers.end(), "composite") != s.provenance.tiers.end();
  CHECK(saw_composite);
}
