#include "angio/morphology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

namespace angio {
namespace {

// Zhang-Suen neighbour order P2..P9: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<int, 8> kDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, 0, 1, 1, 1, 0, -1};

// Padded working copy so neighbour reads never leave the buffer.
class PaddedMask {
 public:
  explicit PaddedMask(const BinaryMask& m) : w_(m.width() + 2), h_(m.height() + 2) {
    px_.assign(static_cast<std::size_t>(w_) * h_, 0);
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x) px_[idx(x + 1, y + 1)] = m(x, y) ? 1 : 0;
    for (int k = 0; k < 8; ++k) offs_[k] = kDy[k] * w_ + kDx[k];
  }

  [[nodiscard]] std::size_t idx(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * w_ + x;
  }
  std::uint8_t& operator[](std::size_t i) noexcept { return px_[i]; }

  // Neighbours P2..P9 of padded index i.
  [[nodiscard]] std::array<std::uint8_t, 8> ring(std::size_t i) const noexcept {
    std::array<std::uint8_t, 8> p{};
    for (int k = 0; k < 8; ++k) p[k] = px_[i + offs_[k]];
    return p;
  }

  [[nodiscard]] int width() const noexcept { return w_; }
  [[nodiscard]] int height() const noexcept { return h_; }

 private:
  int w_;
  int h_;
  std::vector<std::uint8_t> px_;
  std::array<std::ptrdiff_t, 8> offs_{};
};

int ring_count(const std::array<std::uint8_t, 8>& p) noexcept {
  int b = 0;
  for (auto v : p) b += v;
  return b;
}

// Number of 0->1 transitions in the cyclic sequence P2..P9,P2.
int ring_transitions(const std::array<std::uint8_t, 8>& p) noexcept {
  int a = 0;
  for (int k = 0; k < 8; ++k) a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
  return a;
}

bool zs_candidate(const std::array<std::uint8_t, 8>& p, bool first) noexcept {
  const int b = ring_count(p);
  if (b < 2 || b > 6) return false;
  if (ring_transitions(p) != 1) return false;
  // p[0]=P2 (N), p[2]=P4 (E), p[4]=P6 (S), p[6]=P8 (W)
  if (first) return (p[0] & p[2] & p[4]) == 0 && (p[2] & p[4] & p[6]) == 0;
  return (p[0] & p[2] & p[6]) == 0 && (p[0] & p[4] & p[6]) == 0;
}

// Simple point for (8,4) topology: the foreground neighbours form one run
// and at least one 4-neighbour is background.
bool is_simple(const std::array<std::uint8_t, 8>& p) noexcept {
  if (ring_count(p) == 0) return false;
  if (ring_transitions(p) != 1) return false;
  return p[0] == 0 || p[2] == 0 || p[4] == 0 || p[6] == 0;
}

// 1-D squared distance transform over f (lower envelope of parabolas).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    while (k >= 0) {
      const int p = v[k];
      const double s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf
                  : ((f[q] + double(q) * q) - (f[v[k - 1]] + double(v[k - 1]) * v[k - 1])) /
                        (2.0 * (q - v[k - 1]));
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.begin() + n, kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

int neighbour_count(const BinaryMask& mask, int x, int y) noexcept {
  int n = 0;
  for (int k = 0; k < 8; ++k) n += mask.fg(x + kDx[k], y + kDy[k]) ? 1 : 0;
  return n;
}

BinaryMask skeletonize(const BinaryMask& mask) {
  PaddedMask pm(mask);
  std::vector<std::size_t> fg;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask(x, y)) fg.push_back(pm.idx(x + 1, y + 1));

  std::vector<std::size_t> marked;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      marked.clear();
      for (std::size_t i : fg)
        if (zs_candidate(pm.ring(i), pass == 0)) marked.push_back(i);
      for (std::size_t i : marked) {
        if (!is_simple(pm.ring(i))) continue;
        pm[i] = 0;
        changed = true;
      }
      if (!marked.empty())
        std::erase_if(fg, [&pm](std::size_t i) { return pm[i] == 0; });
    }
  }

  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) out(x, y) = pm[pm.idx(x + 1, y + 1)];
  return out;
}

Grid<double> squared_distance_transform(const BinaryMask& mask, Border border) {
  const int w = mask.width();
  const int h = mask.height();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Work on a one-pixel frame around the image.
  const int pw = w + 2;
  const int ph = h + 2;
  Grid<double> g(pw, ph, border == Border::background ? 0.0 : kInf);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) g(x + 1, y + 1) = mask(x, y) ? kInf : 0.0;

  const int n = std::max(pw, ph);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  f.resize(ph);
  d.resize(ph);
  for (int x = 1; x < pw - 1; ++x) {
    for (int y = 0; y < ph; ++y) f[y] = g(x, y);
    edt_1d(f, d, v, z);
    for (int y = 0; y < ph; ++y) g(x, y) = d[y];
  }
  f.resize(pw);
  d.resize(pw);
  for (int y = 1; y < ph - 1; ++y) {
    for (int x = 0; x < pw; ++x) f[x] = g(x, y);
    edt_1d(f, d, v, z);
    for (int x = 0; x < pw; ++x) g(x, y) = d[x];
  }

  Grid<double> out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(x, y) = g(x + 1, y + 1);
  return out;
}

DistanceMap distance_transform(const BinaryMask& mask) {
  DistanceMap dm = squared_distance_transform(mask);
  for (double& v : dm.data()) v = std::sqrt(v);
  return dm;
}

int label_components(const BinaryMask& mask, Grid<int>& labels) {
  labels = Grid<int>(mask.width(), mask.height(), 0);
  int next = 0;
  std::vector<PixelCoord> stack;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || labels(x, y) != 0) continue;
      ++next;
      labels(x, y) = next;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const PixelCoord c = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          const int nx = c.x + kDx[k];
          const int ny = c.y + kDy[k];
          if (mask.fg(nx, ny) && labels(nx, ny) == 0) {
            labels(nx, ny) = next;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  return next;
}

int count_components(const BinaryMask& mask) {
  Grid<int> labels;
  return label_components(mask, labels);
}

namespace {

struct BfsResult {
  Grid<int> dist;
  Grid<int> parent;  // row-major index of predecessor, -1 at the root
  PixelCoord farthest;
};

BfsResult bfs(const BinaryMask& skel, const Grid<int>& labels, int label, PixelCoord start) {
  BfsResult r{Grid<int>(skel.width(), skel.height(), -1),
              Grid<int>(skel.width(), skel.height(), -1), start};
  std::deque<PixelCoord> queue{start};
  r.dist(start.x, start.y) = 0;
  int best = 0;
  while (!queue.empty()) {
    const PixelCoord c = queue.front();
    queue.pop_front();
    const int dc = r.dist(c.x, c.y);
    if (dc > best) {
      best = dc;
      r.farthest = c;
    }
    for (int k = 0; k < 8; ++k) {
      const int nx = c.x + kDx[k];
      const int ny = c.y + kDy[k];
      if (!skel.in_bounds(nx, ny) || labels(nx, ny) != label || r.dist(nx, ny) >= 0) continue;
      r.dist(nx, ny) = dc + 1;
      r.parent(nx, ny) = static_cast<int>(skel.index(c.x, c.y));
      queue.push_back({nx, ny});
    }
  }
  return r;
}

}  // namespace

SkeletonPath longest_path(const BinaryMask& skeleton) {
  Grid<int> labels;
  const int n = label_components(skeleton, labels);
  if (n == 0) throw InputError("empty skeleton");

  std::vector<int> sizes(n + 1, 0);
  std::vector<PixelCoord> first(n + 1);
  for (int y = 0; y < skeleton.height(); ++y)
    for (int x = 0; x < skeleton.width(); ++x) {
      const int l = labels(x, y);
      if (l == 0) continue;
      if (sizes[l]++ == 0) first[l] = {x, y};
    }
  int label = 1;
  for (int l = 2; l <= n; ++l)
    if (sizes[l] > sizes[label]) label = l;

  const PixelCoord a = bfs(skeleton, labels, label, first[label]).farthest;
  const BfsResult from_a = bfs(skeleton, labels, label, a);

  SkeletonPath path;
  int cur = static_cast<int>(skeleton.index(from_a.farthest.x, from_a.farthest.y));
  while (cur >= 0) {
    const int x = cur % skeleton.width();
    const int y = cur / skeleton.width();
    path.points.push_back({x, y});
    cur = from_a.parent(x, y);
  }
  std::reverse(path.points.begin(), path.points.end());
  return path;
}

}  // namespace angio
