#include "bfseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bfseg/boundary.hpp"
#include "bfseg/distance.hpp"
#include "bfseg/rng.hpp"

namespace bfseg {

double CounterRng::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

enum Stream : std::uint64_t { geometry = 1, scars = 2, image_noise = 3, la_noise = 4, scar_noise = 5, rim_noise = 6 };

struct Labels {
  Mask cavity;
  Mask scar;
};

void check_dims(Dims dims, Spacing spacing) {
  if (dims.nx < 16 || dims.ny < 16 || dims.nz < 4)
    throw Error(ErrorKind::invalid_argument,
                "synthetic cases need at least 16x16 in-plane voxels and 4 slices");
  if (!spacing.valid()) throw Error(ErrorKind::invalid_argument, "synthetic spacing must be positive");
}

Labels make_labels(const CounterRng& root, Dims dims, Spacing sp) {
  CounterRng geo = root.split(geometry);
  const double ex = double(dims.nx - 1) * sp.sx;
  const double ey = double(dims.ny - 1) * sp.sy;
  const double ez = double(dims.nz - 1) * sp.sz;
  const double cx = ex * geo.uniform(0.45, 0.55);
  const double cy = ey * geo.uniform(0.45, 0.55);
  const double cz = ez * geo.uniform(0.45, 0.55);
  const double rx = ex * geo.uniform(0.22, 0.30);
  const double ry = ey * geo.uniform(0.22, 0.30);
  const double rz = std::max(ez * geo.uniform(0.30, 0.38), 1.01 * sp.sz);

  Labels out{make_mask(dims, sp), make_mask(dims, sp)};
  for (std::int64_t z = 0; z < dims.nz; ++z)
    for (std::int64_t y = 0; y < dims.ny; ++y)
      for (std::int64_t x = 0; x < dims.nx; ++x) {
        const double dx = (double(x) * sp.sx - cx) / rx;
        const double dy = (double(y) * sp.sy - cy) / ry;
        const double dz = (double(z) * sp.sz - cz) / rz;
        if (dx * dx + dy * dy + dz * dz <= 1.0) out.cavity(x, y, z) = 1.0f;
      }

  // scar patches: band voxels within a few mm of randomly chosen band voxels
  const Mask band = boundary_mask(out.cavity);
  std::vector<std::size_t> band_voxels;
  for (std::size_t i = 0; i < band.size(); ++i)
    if (band[i] != 0.0f) band_voxels.push_back(i);
  CounterRng sc = root.split(scars);
  const int patches = 2 + static_cast<int>(sc.next() % 3);
  struct Patch { double x, y, z, r; };
  std::vector<Patch> centres;
  const auto nxy = static_cast<std::size_t>(dims.nx * dims.ny);
  for (int p = 0; p < patches; ++p) {
    const std::size_t i = band_voxels[sc.next() % band_voxels.size()];
    const auto x = static_cast<std::int64_t>(i % static_cast<std::size_t>(dims.nx));
    const auto y = static_cast<std::int64_t>((i % nxy) / static_cast<std::size_t>(dims.nx));
    const auto z = static_cast<std::int64_t>(i / nxy);
    centres.push_back({double(x) * sp.sx, double(y) * sp.sy, double(z) * sp.sz,
                       sc.uniform(1.5, 3.0)});
  }
  for (std::size_t i : band_voxels) {
    const double x = double(i % static_cast<std::size_t>(dims.nx)) * sp.sx;
    const double y = double((i % nxy) / static_cast<std::size_t>(dims.nx)) * sp.sy;
    const double z = double(i / nxy) * sp.sz;
    for (const Patch& c : centres) {
      const double d2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) + (z - c.z) * (z - c.z);
      if (d2 <= c.r * c.r) {
        out.scar[i] = 1.0f;
        break;
      }
    }
  }
  return out;
}

Volume make_image(const CounterRng& root, const Labels& labels, double noise) {
  const Dims d = labels.cavity.dims();
  Volume raw(d, labels.cavity.spacing(), Kind::image);
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = 1.0f - 0.5f * labels.cavity[i] + 1.2f * labels.scar[i];

  // [1 2 1]/4 smoothing in-plane, clamped at the edges
  auto smooth = [&](const Volume& in, bool along_x) {
    Volume out(in.dims(), in.spacing(), Kind::image);
    for (std::int64_t z = 0; z < d.nz; ++z)
      for (std::int64_t y = 0; y < d.ny; ++y)
        for (std::int64_t x = 0; x < d.nx; ++x) {
          const std::int64_t lo = along_x ? std::max<std::int64_t>(x - 1, 0) : std::max<std::int64_t>(y - 1, 0);
          const std::int64_t hi = along_x ? std::min(x + 1, d.nx - 1) : std::min(y + 1, d.ny - 1);
          const float a = along_x ? in(lo, y, z) : in(x, lo, z);
          const float b = along_x ? in(hi, y, z) : in(x, hi, z);
          out(x, y, z) = 0.25f * a + 0.5f * in(x, y, z) + 0.25f * b;
        }
    return out;
  };
  Volume img = smooth(smooth(raw, true), false);
  CounterRng rng = root.split(image_noise);
  for (std::size_t i = 0; i < img.size(); ++i)
    img[i] += static_cast<float>(noise * rng.normal());
  return img;
}

float logistic(double t) { return static_cast<float>(1.0 / (1.0 + std::exp(-t))); }

// Logistic of the signed distance to the mask contour, with optional logit noise.
Volume soft_prediction(const Mask& m, double softness, double corruption, CounterRng rng) {
  Mask outside(m.dims(), m.spacing(), Kind::label);
  for (std::size_t i = 0; i < m.size(); ++i) outside[i] = 1.0f - m[i];
  const bool any_in = count_foreground(m) > 0;
  const Volume d_in = any_in ? edt(m) : Volume(m.dims(), m.spacing(), Kind::distance);
  const Volume d_out = edt(outside);
  Volume p(m.dims(), m.spacing(), Kind::probability);
  for (std::size_t i = 0; i < p.size(); ++i) {
    double logit = m[i] != 0.0f ? d_in[i] / softness : -d_out[i] / softness;
    if (corruption > 0.0) logit += 3.0 * corruption * rng.normal();
    p[i] = std::clamp(logistic(logit), 0.0f, 1.0f);
  }
  return p;
}

CaseRecord base_case(std::uint64_t seed, Dims dims, Spacing spacing, const SynthOptions& opts,
                     Labels& labels, const CounterRng& root) {
  check_dims(dims, spacing);
  labels = make_labels(root, dims, spacing);
  CaseRecord c;
  c.case_id = "case_" + std::to_string(seed);
  c.image = make_image(root, labels, opts.image_noise);
  c.la_label = labels.cavity;
  c.scar_label = labels.scar;
  c.scar_prob =
      soft_prediction(labels.scar, opts.scar_softness_mm, opts.corruption, root.split(scar_noise));
  return c;
}

}  // namespace

CaseRecord make_case(std::uint64_t seed, Dims dims, Spacing spacing, const SynthOptions& opts) {
  const CounterRng root(seed);
  Labels labels;
  CaseRecord c = base_case(seed, dims, spacing, opts, labels, root);
  c.la_prob = soft_prediction(labels.cavity, opts.cavity_softness_mm, opts.corruption,
                              root.split(la_noise));
  return c;
}

CaseRecord make_outlier_case(std::uint64_t seed, Dims dims, Spacing spacing,
                             const SynthOptions& opts) {
  const CounterRng root(seed);
  Labels labels;
  CaseRecord c = base_case(seed, dims, spacing, opts, labels, root);
  c.case_id = "outlier_" + std::to_string(seed);

  const Mask& cavity = labels.cavity;
  Mask outside(cavity.dims(), spacing, Kind::label);
  for (std::size_t i = 0; i < cavity.size(); ++i) outside[i] = 1.0f - cavity[i];
  const Volume d_in = edt(cavity);
  const Volume d_out = edt(outside);
  // rim: inner voxels within two in-plane steps of the contour
  const double rim = 2.0 * std::max(spacing.sx, spacing.sy) + 1e-6;
  CounterRng rng = root.split(rim_noise);
  Volume p(cavity.dims(), spacing, Kind::probability);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double jitter = 0.03 * (2.0 * rng.uniform() - 1.0);
    double v;
    if (cavity[i] != 0.0f)
      v = d_in[i] <= rim ? 0.35 + jitter : 0.90 + jitter;
    else
      v = d_out[i] <= rim ? 0.15 + jitter : 0.06 + jitter;
    p[i] = static_cast<float>(v);
  }
  c.la_prob = std::move(p);
  return c;
}

}  // namespace bfseg
