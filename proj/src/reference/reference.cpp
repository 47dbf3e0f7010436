#include "bfseg/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace bfseg::reference {

std::vector<double> squared_edt(const Mask& mask, Spacing spacing) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Dims d = mask.dims();
  const auto src = mask.values();
  std::vector<double> field(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) field[i] = src[i] != 0.0f ? inf : 0.0;

  const std::array<std::int64_t, 3> n{d.nx, d.ny, d.nz};
  const std::array<std::int64_t, 3> stride{1, d.nx, d.nx * d.ny};
  const std::array<double, 3> w{spacing.sx * spacing.sx, spacing.sy * spacing.sy,
                                spacing.sz * spacing.sz};
  std::vector<double> line;
  for (int axis = 0; axis < 3; ++axis) {
    const int a = axis == 0 ? 1 : 0;
    const int b = axis == 2 ? 1 : 2;
    line.resize(static_cast<std::size_t>(n[axis]));
    for (std::int64_t ib = 0; ib < n[b]; ++ib) {
      for (std::int64_t ia = 0; ia < n[a]; ++ia) {
        const std::int64_t base = ia * stride[a] + ib * stride[b];
        for (std::int64_t p = 0; p < n[axis]; ++p)
          line[static_cast<std::size_t>(p)] = field[static_cast<std::size_t>(base + p * stride[axis])];
        for (std::int64_t p = 0; p < n[axis]; ++p) {
          double best = inf;
          for (std::int64_t q = 0; q < n[axis]; ++q) {
            const double fq = line[static_cast<std::size_t>(q)];
            if (fq == inf) continue;
            const double dq = static_cast<double>(p - q);
            best = std::min(best, fq + w[axis] * dq * dq);
          }
          field[static_cast<std::size_t>(base + p * stride[axis])] = best;
        }
      }
    }
  }
  return field;
}

Volume edt(const Mask& mask, Spacing spacing) {
  if (count_foreground(mask) == mask.size())
    throw Error(ErrorKind::no_background, "edt: mask has no background voxel");
  const auto sq = squared_edt(mask, spacing);
  Volume out(mask.dims(), spacing, Kind::distance);
  for (std::size_t i = 0; i < sq.size(); ++i) out[i] = static_cast<float>(std::sqrt(sq[i]));
  return out;
}

Volume maxpool2d_slice(const Volume& v, int kernel, float pad_value) {
  if (kernel < 1 || kernel % 2 == 0)
    throw Error(ErrorKind::invalid_argument, "max-pool kernel must be odd and positive");
  const std::int64_t r = kernel / 2;
  const auto [nx, ny, nz] = v.dims();
  Volume out(v.dims(), v.spacing(), v.kind());
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        float m = -std::numeric_limits<float>::infinity();
        for (std::int64_t dy = -r; dy <= r; ++dy)
          for (std::int64_t dx = -r; dx <= r; ++dx) {
            const std::int64_t xx = x + dx;
            const std::int64_t yy = y + dy;
            const bool inside = xx >= 0 && xx < nx && yy >= 0 && yy < ny;
            m = std::max(m, inside ? v(xx, yy, z) : pad_value);
          }
        out(x, y, z) = m;
      }
  return out;
}

Mask boundary_mask(const Mask& mask, BorderMode border) {
  Volume negated(mask.dims(), mask.spacing(), Kind::distance);
  for (std::size_t i = 0; i < mask.size(); ++i) negated[i] = -mask[i];
  const Volume dilated = reference::maxpool2d_slice(mask, 5, 0.0f);
  const Volume eroded =
      reference::maxpool2d_slice(negated, 3, border == BorderMode::outside_background ? 0.0f : -1.0f);
  Mask band(mask.dims(), mask.spacing(), Kind::label);
  for (std::size_t i = 0; i < band.size(); ++i) band[i] = dilated[i] + eroded[i];
  return band;
}

double serial_sum(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace bfseg::reference
