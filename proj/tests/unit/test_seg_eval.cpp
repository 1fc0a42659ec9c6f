#include "doctest.h"

#include "angio/seg_eval.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace angio;

TEST_CASE("pixel metrics conventions") {
  BinaryMask a(6, 6);
  a(1, 1) = a(2, 2) = 1;
  const PixelMetrics same = pixel_metrics(a, a);
  CHECK(same.acc == 1.0);
  CHECK(same.dice == 1.0);
  CHECK(same.iou == 1.0);
  const PixelMetrics none = pixel_metrics(BinaryMask(6, 6), a);
  CHECK(none.prec == 0.0);
  CHECK(none.rec == 0.0);
  CHECK(none.dice == 0.0);
  const PixelMetrics both = pixel_metrics(BinaryMask(6, 6), BinaryMask(6, 6));
  CHECK(both.dice == 1.0);
  CHECK(both.iou == 1.0);
  CHECK_THROWS_AS(pixel_metrics(BinaryMask(6, 6), BinaryMask(5, 6)), InputError);
}

TEST_CASE("pixel metrics match direct counts") {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const BinaryMask p = synth::random_mask(rng, 16, 16, 0.4), g = synth::random_mask(rng, 16, 16, 0.4);
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        const bool a = p(x, y), b = g(x, y);
        tp += a && b;
        fp += a && !b;
        fn += !a && b;
        tn += !a && !b;
      }
    const PixelMetrics m = pixel_metrics(p, g);
    CHECK(m.acc == doctest::Approx((tp + tn) / 256.0));
    CHECK(m.prec == doctest::Approx(tp / (tp + fp)));
    CHECK(m.rec == doctest::Approx(tp / (tp + fn)));
    CHECK(m.dice == doctest::Approx(2 * tp / (2 * tp + fp + fn)));
    CHECK(m.iou == doctest::Approx(tp / (tp + fp + fn)));
    CHECK(m.dice >= m.iou);
    CHECK(std::abs(m.dice - 2 * m.iou / (1 + m.iou)) < 1e-9);
  }
}

TEST_CASE("cldice simple cases") {
  BinaryMask a(10, 10);
  for (int x = 1; x <= 8; ++x) a(x, 5) = 1;
  CHECK(cl_dice(a, a) == 1.0);
  BinaryMask b(10, 10);
  for (int x = 1; x <= 8; ++x) b(x, 1) = 1;
  CHECK(cl_dice(a, b) == 0.0);
  CHECK(cl_dice(BinaryMask(10, 10), BinaryMask(10, 10)) == 1.0);
  CHECK(cl_dice(a, BinaryMask(10, 10)) == 0.0);
}

TEST_CASE("mhd simple cases") {
  BinaryMask a(8, 8), b(8, 8);
  a(0, 0) = 1;
  b(3, 4) = 1;
  CHECK(mhd(a, b) == doctest::Approx(5.0));
  CHECK(mhd(a, a) == 0.0);
  CHECK_THROWS_AS(mhd(a, BinaryMask(8, 8)), InputError);
}

TEST_CASE("mhd grows with a far spurious pixel") {
  BinaryMask a(16, 16), b(16, 16);
  for (int x = 2; x < 6; ++x) a(x, 2) = b(x, 3) = 1;
  const double before = mhd(a, b);
  a(15, 15) = 1;
  CHECK(mhd(a, b) > before);
}

TEST_CASE("mhd matches all-pairs oracle") {
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const int w = rng.between(2, 16), h = rng.between(2, 16);
    BinaryMask p = synth::random_mask(rng, w, h, 0.2), g = synth::random_mask(rng, w, h, 0.2);
    p(0, 0) = 1;
    g(w - 1, h - 1) = 1;
    CHECK(std::abs(mhd(p, g) - oracle::mhd(oracle::to_bits(p), oracle::to_bits(g))) < 1e-9);
    CHECK(mhd(p, g) == mhd(g, p));
  }
}
