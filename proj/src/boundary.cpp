#include "bfseg/boundary.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace bfseg {

Volume maxpool2d_slice(const Volume& v, int kernel, float pad_value) {
  if (kernel < 1 || kernel % 2 == 0)
    throw Error(ErrorKind::invalid_argument,
                "max-pool kernel must be odd and positive, got " + std::to_string(kernel));
  const std::int64_t r = kernel / 2;
  const auto [nx, ny, nz] = v.dims();
  Volume out(v.dims(), v.spacing(), v.kind());
  const auto src = v.values();
  auto dst = out.values();

  // Square-window max is separable: rows first, then columns.
#pragma omp parallel
  {
    std::vector<float> rows(static_cast<std::size_t>(nx * ny));
#pragma omp for schedule(static)
    for (std::int64_t z = 0; z < nz; ++z) {
      const std::size_t slice = static_cast<std::size_t>(z * nx * ny);
      for (std::int64_t y = 0; y < ny; ++y) {
        const float* line = src.data() + slice + static_cast<std::size_t>(y * nx);
        for (std::int64_t x = 0; x < nx; ++x) {
          float m = (x - r < 0 || x + r >= nx) ? pad_value : line[x];
          const std::int64_t lo = std::max<std::int64_t>(0, x - r);
          const std::int64_t hi = std::min<std::int64_t>(nx - 1, x + r);
          for (std::int64_t k = lo; k <= hi; ++k) m = std::max(m, line[k]);
          rows[static_cast<std::size_t>(y * nx + x)] = m;
        }
      }
      for (std::int64_t y = 0; y < ny; ++y) {
        const bool clipped = y - r < 0 || y + r >= ny;
        const std::int64_t lo = std::max<std::int64_t>(0, y - r);
        const std::int64_t hi = std::min<std::int64_t>(ny - 1, y + r);
        for (std::int64_t x = 0; x < nx; ++x) {
          float m = clipped ? pad_value : rows[static_cast<std::size_t>(y * nx + x)];
          for (std::int64_t k = lo; k <= hi; ++k)
            m = std::max(m, rows[static_cast<std::size_t>(k * nx + x)]);
          dst[slice + static_cast<std::size_t>(y * nx + x)] = m;
        }
      }
    }
  }
  return out;
}

Volume maxpool2d_slice(const Volume& v, int kernel, bool is_signed) {
  return maxpool2d_slice(v, kernel, is_signed ? -1.0f : 0.0f);
}

Mask boundary_mask(const Mask& mask, BorderMode border) {
  require_kind(mask, Kind::label, "boundary_mask");
  Volume negated(mask.dims(), mask.spacing(), Kind::distance);
  const auto src = mask.values();
  auto neg = negated.values();
  for (std::size_t i = 0; i < src.size(); ++i) neg[i] = -src[i];

  const float erode_pad = border == BorderMode::outside_background ? 0.0f : -1.0f;
  const Volume dilated = maxpool2d_slice(mask, 5, 0.0f);
  const Volume eroded = maxpool2d_slice(negated, 3, erode_pad);

  Mask band(mask.dims(), mask.spacing(), Kind::label);
  auto out = band.values();
  const auto d = dilated.values();
  const auto e = eroded.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = d[i] + e[i];
  return band;
}

}  // namespace bfseg
