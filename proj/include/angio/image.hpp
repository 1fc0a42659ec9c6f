#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "angio/error.hpp"

namespace angio {

/// Row-major 2-D raster. Width and height may be zero only for the
/// default-constructed empty grid.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw InputError("grid dimensions must be non-negative");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 ||
        data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw InputError("grid data length does not match width*height");
    }
  }

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  [[nodiscard]] std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  /// Value at (x, y), or `outside` when the coordinate is off the grid.
  [[nodiscard]] T at_or(int x, int y, T outside) const noexcept {
    return in_bounds(x, y) ? data_[index(x, y)] : outside;
  }

  [[nodiscard]] std::span<T> data() noexcept { return data_; }
  [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
  [[nodiscard]] const std::vector<T>& values() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// 8-bit grayscale image.
using GrayImage = Grid<std::uint8_t>;

/// Foreground mask, one byte per pixel; any non-zero value is foreground.
/// Distinct from GrayImage so intensities and labels cannot be mixed up.
class BinaryMask : public Grid<std::uint8_t> {
 public:
  using Grid<std::uint8_t>::Grid;
  BinaryMask() = default;
  explicit BinaryMask(Grid<std::uint8_t> g) : Grid<std::uint8_t>(std::move(g)) {}

  [[nodiscard]] bool fg(int x, int y) const noexcept { return at_or(x, y, 0) != 0; }
  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

/// Binarize a grayscale raster: foreground where value >= threshold.
BinaryMask threshold_mask(const GrayImage& img, std::uint8_t threshold = 128);

/// Number of foreground pixels.
std::size_t count_foreground(const BinaryMask& m);

/// Flip columns (x -> w-1-x).
template <typename G>
G flip_horizontal(const G& g) {
  G out(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) out(g.width() - 1 - x, y) = g(x, y);
  return out;
}

/// Flip rows (y -> h-1-y).
template <typename G>
G flip_vertical(const G& g) {
  G out(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) out(x, g.height() - 1 - y) = g(x, y);
  return out;
}

}  // namespace angio
