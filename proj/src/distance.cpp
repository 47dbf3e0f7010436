#include "bfseg/distance.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace bfseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas w*(p - q)^2 + f(q) over one line (Felzenszwalb &
// Huttenlocher). Entries with f = inf never join the envelope.
struct EnvelopeScratch {
  std::vector<double> f;
  std::vector<std::int64_t> site;
  std::vector<double> start;
};

void envelope_line(double* line, std::ptrdiff_t stride, std::int64_t n, double w,
                   EnvelopeScratch& s) {
  s.f.resize(static_cast<std::size_t>(n));
  s.site.resize(static_cast<std::size_t>(n));
  s.start.resize(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i < n; ++i) s.f[static_cast<std::size_t>(i)] = line[i * stride];

  std::int64_t k = -1;
  for (std::int64_t q = 0; q < n; ++q) {
    const double fq = s.f[static_cast<std::size_t>(q)];
    if (fq == kInf) continue;
    double boundary = -kInf;
    while (k >= 0) {
      const std::int64_t v = s.site[static_cast<std::size_t>(k)];
      const double fv = s.f[static_cast<std::size_t>(v)];
      const double dq = static_cast<double>(q);
      const double dv = static_cast<double>(v);
      boundary = ((fq + w * dq * dq) - (fv + w * dv * dv)) / (2.0 * w * (dq - dv));
      if (boundary > s.start[static_cast<std::size_t>(k)]) break;
      --k;
    }
    ++k;
    s.site[static_cast<std::size_t>(k)] = q;
    s.start[static_cast<std::size_t>(k)] = k == 0 ? -kInf : boundary;
    s.start[static_cast<std::size_t>(k) + 1] = kInf;
  }
  if (k < 0) return;  // no finite entries: line stays inf

  std::int64_t j = 0;
  for (std::int64_t p = 0; p < n; ++p) {
    const double dp = static_cast<double>(p);
    while (s.start[static_cast<std::size_t>(j) + 1] < dp) ++j;
    const std::int64_t v = s.site[static_cast<std::size_t>(j)];
    const double d = dp - static_cast<double>(v);
    line[p * stride] = w * d * d + s.f[static_cast<std::size_t>(v)];
  }
}

void envelope_pass(std::vector<double>& field, const Dims& dims, int axis, double w) {
  const std::array<std::int64_t, 3> n{dims.nx, dims.ny, dims.nz};
  const std::array<std::ptrdiff_t, 3> stride{1, dims.nx, dims.nx * dims.ny};
  const int a = axis == 0 ? 1 : 0;
  const int b = axis == 2 ? 1 : 2;
  const std::int64_t lines = n[a] * n[b];
#pragma omp parallel
  {
    EnvelopeScratch scratch;
#pragma omp for schedule(static)
    for (std::int64_t l = 0; l < lines; ++l) {
      const std::int64_t ia = l % n[a];
      const std::int64_t ib = l / n[a];
      envelope_line(field.data() + ia * stride[a] + ib * stride[b], stride[axis], n[axis], w,
                    scratch);
    }
  }
}

}  // namespace

std::vector<double> squared_edt(const Mask& mask, Spacing spacing) {
  if (!spacing.valid())
    throw Error(ErrorKind::invalid_argument, "edt: spacing must be positive and finite");
  const auto src = mask.values();
  std::vector<double> field(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) field[i] = src[i] != 0.0f ? kInf : 0.0;
  envelope_pass(field, mask.dims(), 0, spacing.sx * spacing.sx);
  envelope_pass(field, mask.dims(), 1, spacing.sy * spacing.sy);
  envelope_pass(field, mask.dims(), 2, spacing.sz * spacing.sz);
  return field;
}

Volume edt(const Mask& mask, Spacing spacing) {
  require_kind(mask, Kind::label, "edt");
  if (count_foreground(mask) == mask.size())
    throw Error(ErrorKind::no_background, "edt: mask has no background voxel");
  const std::vector<double> sq = squared_edt(mask, spacing);
  Volume out(mask.dims(), spacing, Kind::distance);
  auto dst = out.values();
  const auto n = static_cast<std::ptrdiff_t>(sq.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    dst[static_cast<std::size_t>(i)] =
        static_cast<float>(std::sqrt(sq[static_cast<std::size_t>(i)]));
  return out;
}

Volume signed_boundary_distance(const Mask& band, Spacing spacing, BandUnits units) {
  require_kind(band, Kind::label, "signed_boundary_distance");
  const std::size_t on = count_foreground(band);
  if (on == 0)
    throw Error(ErrorKind::degenerate, "signed_boundary_distance: boundary band is empty");
  if (on == band.size())
    throw Error(ErrorKind::degenerate,
                "signed_boundary_distance: band covers the whole volume");

  Mask off_band(band.dims(), spacing, Kind::label);
  {
    const auto src = band.values();
    auto dst = off_band.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = 1.0f - src[i];
  }
  const Spacing band_spacing = units == BandUnits::millimeters ? spacing : Spacing{1, 1, 1};
  const Volume outside = edt(off_band, spacing);   // E(-M): distance to the band
  const Volume inside = edt(band, band_spacing);   // E(M): distance to off-band

  Volume out(band.dims(), spacing, Kind::distance);
  const auto m = band.values();
  const auto eo = outside.values();
  const auto ei = inside.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = m[i] != 0.0f ? -(ei[i] - 1.0f) : eo[i];
  }
  return out;
}

}  // namespace bfseg
