#include "angio/image.hpp"

#include <algorithm>

namespace angio {

BinaryMask threshold_mask(const GrayImage& img, std::uint8_t threshold) {
  BinaryMask m(img.width(), img.height());
  std::transform(img.data().begin(), img.data().end(), m.data().begin(),
                 [threshold](std::uint8_t v) -> std::uint8_t { return v >= threshold ? 1 : 0; });
  return m;
}

std::size_t count_foreground(const BinaryMask& m) {
  return static_cast<std::size_t>(
      std::count_if(m.data().begin(), m.data().end(), [](std::uint8_t v) { return v != 0; }));
}

}  // namespace angio
