// Brute-force reference implementations used only by the tests. None of
// them calls into the library beyond its plain data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "angio/geometry.hpp"
#include "angio/image.hpp"

namespace oracle {

using Bits = std::vector<std::vector<int>>;  // [y][x], 0/1

inline Bits to_bits(const angio::BinaryMask& m) {
  Bits b(m.height(), std::vector<int>(m.width(), 0));
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) b[y][x] = m(x, y) ? 1 : 0;
  return b;
}

inline angio::BinaryMask from_bits(const Bits& b) {
  const int h = static_cast<int>(b.size());
  const int w = h ? static_cast<int>(b[0].size()) : 0;
  angio::BinaryMask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m(x, y) = b[y][x] ? 1 : 0;
  return m;
}

// Distance from each foreground pixel to the nearest background pixel,
// by minimisation over every background pixel of the image plus the
// one-pixel frame around it. O(n^2).
inline std::vector<double> edt(const Bits& b) {
  const int h = static_cast<int>(b.size());
  const int w = h ? static_cast<int>(b[0].size()) : 0;
  std::vector<std::pair<int, int>> bg;
  for (int y = -1; y <= h; ++y)
    for (int x = -1; x <= w; ++x) {
      const bool inside = x >= 0 && y >= 0 && x < w && y < h;
      if (!inside || !b[y][x]) bg.emplace_back(x, y);
    }
  std::vector<double> out(static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!b[y][x]) continue;
      long best = std::numeric_limits<long>::max();
      for (auto [bx, by] : bg) best = std::min<long>(best, long(bx - x) * (bx - x) + long(by - y) * (by - y));
      out[static_cast<std::size_t>(y) * w + x] = std::sqrt(static_cast<double>(best));
    }
  return out;
}

inline int px(const Bits& b, int x, int y) {
  if (y < 0 || y >= static_cast<int>(b.size()) || x < 0 || x >= static_cast<int>(b[0].size())) return 0;
  return b[y][x];
}

// P2..P9 clockwise from north.
inline std::vector<int> zs_ring(const Bits& b, int x, int y) {
  return {px(b, x, y - 1), px(b, x + 1, y - 1), px(b, x + 1, y),     px(b, x + 1, y + 1),
          px(b, x, y + 1), px(b, x - 1, y + 1), px(b, x - 1, y),     px(b, x - 1, y - 1)};
}

// Zhang-Suen with the sequential simple-point commit: candidates are found
// on a frozen copy, then deleted one by one (row-major) if the pixel still
// has a single 0->1 run, a foreground neighbour, and a background
// 4-neighbour in the partially updated image.
inline Bits zhang_suen(Bits b) {
  const int h = static_cast<int>(b.size());
  const int w = h ? static_cast<int>(b[0].size()) : 0;
  auto runs = [](const std::vector<int>& p) {
    int a = 0;
    for (int k = 0; k < 8; ++k) a += (!p[k] && p[(k + 1) % 8]);
    return a;
  };
  for (;;) {
    bool any = false;
    for (int step = 1; step <= 2; ++step) {
      std::vector<std::pair<int, int>> cand;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          if (!b[y][x]) continue;
          const auto p = zs_ring(b, x, y);
          const int n = std::accumulate(p.begin(), p.end(), 0);
          if (n < 2 || n > 6 || runs(p) != 1) continue;
          const int P2 = p[0], P4 = p[2], P6 = p[4], P8 = p[6];
          const bool ok = step == 1 ? (P2 * P4 * P6 == 0 && P4 * P6 * P8 == 0)
                                    : (P2 * P4 * P8 == 0 && P2 * P6 * P8 == 0);
          if (ok) cand.emplace_back(x, y);
        }
      for (auto [x, y] : cand) {
        const auto p = zs_ring(b, x, y);
        const int n = std::accumulate(p.begin(), p.end(), 0);
        if (n == 0 || runs(p) != 1) continue;
        if (p[0] && p[2] && p[4] && p[6]) continue;
        b[y][x] = 0;
        any = true;
      }
    }
    if (!any) return b;
  }
}

inline int components8(const Bits& b) {
  const int h = static_cast<int>(b.size());
  const int w = h ? static_cast<int>(b[0].size()) : 0;
  std::vector<int> parent(static_cast<std::size_t>(w) * h);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!b[y][x]) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (px(b, x + dx, y + dy)) parent[find(y * w + x)] = find((y + dy) * w + x + dx);
    }
  int n = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) n += b[y][x] && find(y * w + x) == y * w + x;
  return n;
}

// Number of pixels on the longest shortest path (8-connected) between any
// two pixels of the largest component, by BFS from every pixel.
inline int diameter_pixels(const Bits& b) {
  const int h = static_cast<int>(b.size());
  const int w = h ? static_cast<int>(b[0].size()) : 0;
  std::vector<std::pair<int, int>> fg;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (b[y][x]) fg.emplace_back(x, y);
  int best = 0;
  for (auto [sx, sy] : fg) {
    std::vector<int> d(static_cast<std::size_t>(w) * h, -1);
    std::queue<std::pair<int, int>> q;
    q.emplace(sx, sy);
    d[sy * w + sx] = 0;
    while (!q.empty()) {
      auto [x, y] = q.front();
      q.pop();
      best = std::max(best, d[y * w + x] + 1);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (px(b, x + dx, y + dy) && d[(y + dy) * w + x + dx] < 0) {
            d[(y + dy) * w + x + dx] = d[y * w + x] + 1;
            q.emplace(x + dx, y + dy);
          }
    }
  }
  return best;
}

// Topographic prominence by scanning outward until a strictly higher sample.
inline double prominence(const std::vector<double>& p, std::size_t i) {
  double left = p[i];
  for (std::size_t j = i; j-- > 0;) {
    if (p[j] > p[i]) break;
    left = std::min(left, p[j]);
  }
  double right = p[i];
  for (std::size_t j = i + 1; j < p.size(); ++j) {
    if (p[j] > p[i]) break;
    right = std::min(right, p[j]);
  }
  return p[i] - std::max(left, right);
}

// Local maxima (plateau centres, left-biased), prominence filter, then
// greedy separation by height.
inline std::vector<std::size_t> peaks(const std::vector<double>& p, double min_prom, std::size_t min_sep) {
  std::vector<std::size_t> found;
  const std::size_t n = p.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(p[i - 1] < p[i])) continue;
    std::size_t j = i;
    while (j + 1 < n && p[j + 1] == p[i]) ++j;
    if (j + 1 < n && p[j + 1] < p[i]) found.push_back((i + j) / 2);
  }
  std::vector<std::size_t> prom;
  for (auto i : found)
    if (prominence(p, i) >= min_prom) prom.push_back(i);
  std::vector<std::size_t> by_height = prom;
  std::stable_sort(by_height.begin(), by_height.end(), [&](auto a, auto b) { return p[a] > p[b]; });
  std::vector<std::size_t> kept;
  for (auto i : by_height) {
    bool ok = true;
    for (auto k : kept)
      if ((i > k ? i - k : k - i) < min_sep) ok = false;
    if (ok) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

struct Box {
  double x1, y1, x2, y2;
};

inline double iou(const Box& a, const Box& b) {
  const double iw = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double ih = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = iw * ih;
  const double uni = (a.x2 - a.x1) * (a.y2 - a.y1) + (b.x2 - b.x1) * (b.y2 - b.y1) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

struct Det {
  Box box;
  double conf;
};

// Greedy matching: returns per-detection TP flag.
inline std::vector<bool> greedy(const std::vector<Det>& dets, const std::vector<Box>& gts, double thr) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return dets[a].conf != dets[b].conf ? dets[a].conf > dets[b].conf : a < b;
  });
  std::vector<bool> taken(gts.size(), false), tp(dets.size(), false);
  for (auto d : order) {
    int best = -1;
    double bv = 0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(dets[d].box, gts[g]);
      if (v >= thr && (best < 0 || v > bv)) best = static_cast<int>(g), bv = v;
    }
    if (best >= 0) taken[best] = true, tp[d] = true;
  }
  return tp;
}

// 101-point AP from (confidence, tp) pairs.
inline double ap101(std::vector<std::pair<double, bool>> ranked, std::size_t num_gt) {
  std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.first > b.first; });
  std::vector<double> rec, prec;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    tp += ranked[i].second;
    rec.push_back(double(tp) / double(num_gt));
    prec.push_back(double(tp) / double(i + 1));
  }
  double s = 0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    double best = 0;
    for (std::size_t i = 0; i < rec.size(); ++i)
      if (rec[i] >= r) best = std::max(best, prec[i]);
    s += best;
  }
  return s / 101.0;
}

struct Image {
  std::vector<Box> gts;
  std::vector<Det> dets;
};

struct Summary {
  double img_prec = NAN, img_rec = NAN, img_map50 = NAN, img_map = NAN;
  double les_prec = NAN, les_rec = NAN, les_map50 = NAN, les_map = NAN;
};

inline Summary evaluate(const std::vector<Image>& images) {
  Summary s;
  std::vector<double> thr;
  for (int k = 0; k < 10; ++k) thr.push_back(0.5 + 0.05 * k);
  std::vector<double> ip, ir, i50, imap;
  std::size_t total_gt = 0, total_det = 0, tp50 = 0;
  std::vector<std::vector<std::pair<double, bool>>> global(thr.size());
  for (const auto& im : images) {
    total_gt += im.gts.size();
    total_det += im.dets.size();
    double sum = 0;
    for (std::size_t t = 0; t < thr.size(); ++t) {
      const auto tp = greedy(im.dets, im.gts, thr[t]);
      std::vector<std::pair<double, bool>> ranked;
      for (std::size_t d = 0; d < im.dets.size(); ++d) ranked.emplace_back(im.dets[d].conf, tp[d]);
      global[t].insert(global[t].end(), ranked.begin(), ranked.end());
      const double ntp = static_cast<double>(std::count(tp.begin(), tp.end(), true));
      if (t == 0) {
        tp50 += static_cast<std::size_t>(ntp);
        if (!im.dets.empty()) ip.push_back(ntp / im.dets.size());
        if (!im.gts.empty()) ir.push_back(ntp / im.gts.size());
      }
      if (!im.gts.empty()) {
        const double a = ap101(ranked, im.gts.size());
        if (t == 0) i50.push_back(a);
        sum += a;
      }
    }
    if (!im.gts.empty()) imap.push_back(sum / 10.0);
  }
  auto avg = [](const std::vector<double>& v) {
    return v.empty() ? NAN : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  s.img_prec = avg(ip);
  s.img_rec = avg(ir);
  s.img_map50 = avg(i50);
  s.img_map = avg(imap);
  if (total_det) s.les_prec = double(tp50) / total_det;
  s.les_rec = double(tp50) / total_gt;
  double sum = 0;
  for (std::size_t t = 0; t < thr.size(); ++t) {
    const double a = ap101(global[t], total_gt);
    if (t == 0) s.les_map50 = a;
    sum += a;
  }
  s.les_map = sum / 10.0;
  return s;
}

// Two-sided Mann-Whitney p by enumerating every split of the pooled
// sample into groups of sizes n and m. U counts x<y as 1 and ties as 1/2;
// kept doubled so the comparison is exact.
inline double mw_permutation_p(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> pool = x;
  pool.insert(pool.end(), y.begin(), y.end());
  const int n = static_cast<int>(x.size()), N = static_cast<int>(pool.size());
  const long nm = long(n) * long(N - n);
  auto u2 = [&](std::uint32_t maskbits) {
    long u = 0;
    for (int i = 0; i < N; ++i) {
      if (!(maskbits >> i & 1u)) continue;
      for (int j = 0; j < N; ++j) {
        if (maskbits >> j & 1u) continue;
        u += pool[i] < pool[j] ? 2 : pool[i] == pool[j] ? 1 : 0;
      }
    }
    return u;
  };
  const long obs = std::labs(u2((1u << n) - 1) - nm);
  long hit = 0, total = 0;
  for (std::uint32_t s = 0; s < (1u << N); ++s) {
    if (__builtin_popcount(s) != n) continue;
    ++total;
    hit += std::labs(u2(s) - nm) >= obs;
  }
  return double(hit) / double(total);
}

// Mean over a's foreground of the distance to the nearest b foreground.
inline double directed_mean(const Bits& a, const Bits& b) {
  std::vector<std::pair<int, int>> pa, pb;
  for (std::size_t y = 0; y < a.size(); ++y)
    for (std::size_t x = 0; x < a[0].size(); ++x) {
      if (a[y][x]) pa.emplace_back(int(x), int(y));
      if (b[y][x]) pb.emplace_back(int(x), int(y));
    }
  double sum = 0;
  for (auto [ax, ay] : pa) {
    double best = INFINITY;
    for (auto [bx, by] : pb) best = std::min(best, std::hypot(double(ax - bx), double(ay - by)));
    sum += best;
  }
  return sum / pa.size();
}

inline double mhd(const Bits& a, const Bits& b) { return std::max(directed_mean(a, b), directed_mean(b, a)); }

}  // namespace oracle
