#pragma once

// Test-only oracles. Deliberately naive: brute-force scans over voxel pairs and
// direct set arithmetic, sharing no code with the library kernels they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "bfseg/volume.hpp"

namespace oracle {

using bfseg::Dims;
using bfseg::Kind;
using bfseg::Mask;
using bfseg::Spacing;
using bfseg::Volume;

inline double physical_distance(std::int64_t x0, std::int64_t y0, std::int64_t z0, std::int64_t x1,
                                std::int64_t y1, std::int64_t z1, const Spacing& s) {
  const double dx = double(x0 - x1) * s.sx;
  const double dy = double(y0 - y1) * s.sy;
  const double dz = double(z0 - z1) * s.sz;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// O(n^2) nearest-background scan.
inline std::vector<double> brute_edt(const Mask& m, const Spacing& s) {
  const auto [nx, ny, nz] = m.dims();
  std::vector<double> out(m.size(), 0.0);
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        if (m(x, y, z) == 0.0f) continue;
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t zz = 0; zz < nz; ++zz)
          for (std::int64_t yy = 0; yy < ny; ++yy)
            for (std::int64_t xx = 0; xx < nx; ++xx)
              if (m(xx, yy, zz) == 0.0f)
                best = std::min(best, physical_distance(x, y, z, xx, yy, zz, s));
        out[m.index(x, y, z)] = best;
      }
  return out;
}

/// In-slice Chebyshev dilation: any foreground within `r`; outside is background.
inline Mask dilate_slice(const Mask& m, int r) {
  const auto [nx, ny, nz] = m.dims();
  Mask out(m.dims(), m.spacing(), Kind::label);
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        bool any = false;
        for (std::int64_t yy = y - r; yy <= y + r; ++yy)
          for (std::int64_t xx = x - r; xx <= x + r; ++xx)
            if (xx >= 0 && yy >= 0 && xx < nx && yy < ny && m(xx, yy, z) != 0.0f) any = true;
        out(x, y, z) = any ? 1.0f : 0.0f;
      }
  return out;
}

/// In-slice Chebyshev erosion: every window voxel foreground. Window cells
/// beyond the slice count as background unless `outside_is_foreground`.
inline Mask erode_slice(const Mask& m, int r, bool outside_is_foreground) {
  const auto [nx, ny, nz] = m.dims();
  Mask out(m.dims(), m.spacing(), Kind::label);
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        bool all = true;
        for (std::int64_t yy = y - r; yy <= y + r; ++yy)
          for (std::int64_t xx = x - r; xx <= x + r; ++xx) {
            const bool inside = xx >= 0 && yy >= 0 && xx < nx && yy < ny;
            const bool fg = inside ? m(xx, yy, z) != 0.0f : outside_is_foreground;
            all = all && fg;
          }
        out(x, y, z) = all ? 1.0f : 0.0f;
      }
  return out;
}

/// A AND NOT B.
inline Mask set_minus(const Mask& a, const Mask& b) {
  Mask out(a.dims(), a.spacing(), Kind::label);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] != 0.0f && b[i] == 0.0f) ? 1.0f : 0.0f;
  return out;
}

struct Point {
  std::int64_t x, y, z;
};

/// 6-neighbour surface by explicit neighbour counting.
inline std::vector<Point> surface_points(const Mask& m) {
  const auto [nx, ny, nz] = m.dims();
  std::vector<Point> out;
  const int off[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        if (m(x, y, z) == 0.0f) continue;
        int fg_neighbours = 0;
        for (const auto& o : off) {
          const std::int64_t xx = x + o[0], yy = y + o[1], zz = z + o[2];
          if (xx >= 0 && yy >= 0 && zz >= 0 && xx < nx && yy < ny && zz < nz && m(xx, yy, zz) != 0.0f)
            ++fg_neighbours;
        }
        if (fg_neighbours < 6) out.push_back({x, y, z});
      }
  return out;
}

inline std::vector<double> brute_directed(const std::vector<Point>& from, const std::vector<Point>& to,
                                          const Spacing& s) {
  std::vector<double> d;
  for (const auto& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : to) best = std::min(best, physical_distance(p.x, p.y, p.z, q.x, q.y, q.z, s));
    d.push_back(best);
  }
  return d;
}

inline double brute_hausdorff(const Mask& a, const Mask& b, const Spacing& s) {
  const auto sa = surface_points(a), sb = surface_points(b);
  const auto ab = brute_directed(sa, sb, s), ba = brute_directed(sb, sa, s);
  return std::max(*std::max_element(ab.begin(), ab.end()), *std::max_element(ba.begin(), ba.end()));
}

inline double brute_asd(const Mask& a, const Mask& b, const Spacing& s) {
  const auto sa = surface_points(a), sb = surface_points(b);
  const auto ab = brute_directed(sa, sb, s), ba = brute_directed(sb, sa, s);
  double total = 0.0;
  for (double v : ab) total += v;
  for (double v : ba) total += v;
  return total / double(ab.size() + ba.size());
}

inline double scalar_ce(double s, double g) {
  const double eps = 1e-7;
  s = std::min(std::max(s, eps), 1.0 - eps);
  return -(g * std::log(s) + (1.0 - g) * std::log(1.0 - s));
}

inline Mask random_mask(std::mt19937_64& rng, Dims d, Spacing s, double density) {
  std::bernoulli_distribution fg(density);
  Mask m(d, s, Kind::label);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = fg(rng) ? 1.0f : 0.0f;
  return m;
}

inline Volume random_prob(std::mt19937_64& rng, Dims d, Spacing s, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Volume v(d, s, Kind::probability);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(u(rng));
  return v;
}

inline Spacing random_spacing(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.3, 3.0);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace oracle
