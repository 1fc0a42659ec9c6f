#include "doctest.h"

#include "angio/geometry.hpp"
#include "angio/image.hpp"

using namespace angio;

TEST_CASE("grid rejects bad sizes and data") {
  CHECK_THROWS_AS(GrayImage(-1, 3), InputError);
  CHECK_THROWS_AS(GrayImage(2, 2, std::vector<std::uint8_t>(3)), InputError);
  GrayImage g(3, 2, 7);
  CHECK(g(2, 1) == 7);
  CHECK(g.at_or(5, 5, 9) == 9);
}

TEST_CASE("threshold at 128") {
  GrayImage g(3, 1, std::vector<std::uint8_t>{127, 128, 255});
  const BinaryMask m = threshold_mask(g);
  CHECK(m(0, 0) == 0);
  CHECK(m(1, 0) == 1);
  CHECK(count_foreground(m) == 2);
}

TEST_CASE("flips are involutions") {
  GrayImage g(3, 2, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  CHECK(flip_horizontal(g)(0, 0) == 3);
  CHECK(flip_vertical(g)(0, 0) == 4);
  CHECK(flip_horizontal(flip_horizontal(g)) == g);
  CHECK(flip_vertical(flip_vertical(g)) == g);
}

TEST_CASE("iou") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(bbox_iou(a, a) == doctest::Approx(1.0));
  CHECK(bbox_iou(a, {20, 20, 30, 30}) == 0.0);
  CHECK(bbox_iou(a, {5, 0, 15, 10}) == doctest::Approx(50.0 / 150.0));
}

TEST_CASE("containment is closed") {
  const BoundingBox b{0, 0, 10, 10};
  CHECK(bbox_contains(b, {0, 0}));
  CHECK(bbox_contains(b, {10, 10}));
  CHECK_FALSE(bbox_contains(b, {10.01, 5}));
}

TEST_CASE("annotation validation") {
  CHECK_THROWS_AS(checked_box({5, 0, 1, 4}), InputError);
  LesionAnnotation a{{0, 0, 10, 10}, Point{20, 20}, 3.0};
  CHECK_THROWS_AS(validate_annotation(a), InputError);
  a.mld_point = Point{4, 4};
  a.mld_px = -1;
  CHECK_THROWS_AS(validate_annotation(a), InputError);
  a.mld_px = 2;
  CHECK_NOTHROW(validate_annotation(a));
}

TEST_CASE("crop and uncrop are inverse maps") {
  GrayImage img(40, 30);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) img(x, y) = static_cast<std::uint8_t>(x + 3 * y);
  const CropResult c = crop_resize(img, {10, 5, 30, 25}, 80, 40);
  CHECK(c.image.width() == 80);
  CHECK(c.image.height() == 40);
  const Point p{17.25, 11.5};
  const Point q = uncrop_point(crop_point(p, c.context), c.context);
  CHECK(q.x == doctest::Approx(p.x).epsilon(1e-12));
  CHECK(q.y == doctest::Approx(p.y).epsilon(1e-12));
  // Pixel (0,0) of the crop samples the box corner.
  CHECK(c.image(0, 0) == img(10, 5));
}

TEST_CASE("uncrop with offset only shifts") {
  const CropContext ctx{10, 20, 1, 1};
  const Point p = uncrop_point({3, 4}, ctx);
  CHECK(p.x == 13);
  CHECK(p.y == 24);
}

TEST_CASE("degenerate crop throws") {
  GrayImage img(10, 10);
  CHECK_THROWS_AS(crop_resize(img, {12, 12, 20, 20}, 8, 8), InputError);
}
