#include "doctest.h"

#include "angio/severity.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace angio;

TEST_CASE("peaks on small profiles") {
  CHECK(detect_peaks({1, 3, 1, 4, 1}, 1.0, 1) == std::vector<std::size_t>{1, 3});
  CHECK(detect_peaks({1, 2, 3, 4, 5}, 0.0, 1).empty());
  CHECK(detect_peaks({5, 4, 3}, 0.0, 1).empty());
  // Plateau collapses to its centre.
  CHECK(detect_peaks({0, 2, 2, 2, 0}, 0.5, 1) == std::vector<std::size_t>{2});
  // Edge plateau is not a peak.
  CHECK(detect_peaks({2, 2, 1, 0}, 0.0, 1).empty());
  // Separation keeps the higher of two close peaks.
  CHECK(detect_peaks({0, 3, 1, 4, 0}, 0.5, 3) == std::vector<std::size_t>{3});
}

TEST_CASE("prominence and peaks match brute force") {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> p(rng.between(1, 100));
    for (auto& v : p) v = static_cast<double>(rng.below(12)) * 0.5;
    const double prom = rng.uniform(0.0, 3.0);
    const std::size_t sep = rng.below(6);
    REQUIRE(detect_peaks(p, prom, sep) == oracle::peaks(p, prom, sep));
    for (std::size_t i = 0; i < p.size(); ++i)
      REQUIRE(peak_prominence(p, i) == doctest::Approx(oracle::prominence(p, i)));
  }
}

TEST_CASE("ribbon radii near half-width") {
  BinaryMask m(60, 20);
  for (int y = 8; y < 13; ++y)
    for (int x = 10; x < 50; ++x) m(x, y) = 1;
  const RadiusProfile rp = radius_profile(m);
  REQUIRE(rp.radii.size() == rp.path.size());
  for (std::size_t i = 5; i + 5 < rp.radii.size(); ++i) CHECK(std::abs(rp.radii[i] - 2.5) <= 0.5);
}

TEST_CASE("single pixel profile") {
  BinaryMask m(3, 3);
  m(1, 1) = 1;
  const RadiusProfile rp = radius_profile(m);
  CHECK(rp.radii == std::vector<double>{1.0});
  CHECK_THROWS_AS(estimate_severity(m), InputError);
  CHECK_THROWS_AS(radius_profile(BinaryMask(4, 4)), InputError);
}

TEST_CASE("constant bar gives zero stenosis") {
  BinaryMask m(80, 20);
  for (int y = 7; y < 12; ++y)
    for (int x = 5; x < 75; ++x) m(x, y) = 1;
  const SeverityReport r = estimate_severity(m);
  CHECK(r.fallback);
  CHECK(r.mld_px == r.mad_px);
  CHECK(r.ds_percent == 0.0);
}

TEST_CASE("dumbbell phantom") {
  const auto ph = synth::dumbbell(160, 12, 3, 60);
  const SeverityReport r = estimate_severity(ph.mask);
  CHECK(std::abs(r.mld_px - 6.0) <= 1.0);
  CHECK(std::abs(r.mad_px - 24.0) <= 1.0);
  CHECK(std::abs(r.ds_percent - 75.0) <= 3.0);
  CHECK(r.peak_indices.size() >= 2);
  CHECK(r.ds_percent == doctest::Approx((1.0 - r.mld_px / r.mad_px) * 100.0).epsilon(1e-12));
}

TEST_CASE("near occlusion") {
  const auto ph = synth::dumbbell(160, 12, 1, 60);
  CHECK(estimate_severity(ph.mask).ds_percent >= 90.0);
}

TEST_CASE("crop context maps the MLD point only") {
  const auto ph = synth::dumbbell(120, 10, 3, 40);
  const SeverityReport a = estimate_severity(ph.mask);
  const SeverityReport b = severity_from_crop(ph.mask, {10, 20, 1, 1});
  CHECK(b.mld_px == a.mld_px);
  CHECK(b.mld_point.x == a.mld_point.x + 10);
  CHECK(b.mld_point.y == a.mld_point.y + 20);
  const SeverityReport c = severity_from_crop(ph.mask, {});
  CHECK(c.mld_point == a.mld_point);
}

TEST_CASE("flips and translation keep the diameters") {
  const auto ph = synth::dumbbell(120, 10, 3, 40);
  const SeverityReport a = estimate_severity(ph.mask);
  const SeverityReport h = estimate_severity(flip_horizontal(ph.mask));
  const SeverityReport v = estimate_severity(flip_vertical(ph.mask));
  // The neck is a uniform bar, so its minimum is exact in every orientation.
  CHECK(h.mld_px == a.mld_px);
  CHECK(v.mld_px == a.mld_px);
  CHECK(h.mad_px == a.mad_px);
  CHECK(v.mad_px == a.mad_px);

  BinaryMask shifted(160, 160);
  for (int y = 0; y < 120; ++y)
    for (int x = 0; x < 120; ++x) shifted(x + 17, y + 9) = ph.mask(x, y);
  const SeverityReport t = estimate_severity(shifted);
  CHECK(t.mld_px == a.mld_px);
  CHECK(t.mad_px == a.mad_px);
  CHECK(t.mld_point.x == a.mld_point.x + 17);
  CHECK(t.mld_point.y == a.mld_point.y + 9);
}

TEST_CASE("2x upsampling roughly doubles the diameters") {
  // A bar of half-width h covers 2h-1 rows, so 2x upsampling maps the
  // diameter 2h to 4h-2; h = 6 keeps that within the 10% bound.
  const auto ph = synth::dumbbell(110, 14, 6, 30);
  BinaryMask up(220, 220);
  for (int y = 0; y < 220; ++y)
    for (int x = 0; x < 220; ++x) up(x, y) = ph.mask(x / 2, y / 2);
  const SeverityReport a = estimate_severity(ph.mask);
  const SeverityReport b = estimate_severity(up);
  CHECK(std::abs(b.mld_px / a.mld_px - 2.0) <= 0.2);
  CHECK(std::abs(b.mad_px / a.mad_px - 2.0) <= 0.2);
  CHECK(std::abs(b.ds_percent - a.ds_percent) <= 5.0);
}
