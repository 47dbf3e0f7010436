#include "bfseg/volume.hpp"

#include <cmath>
#include <string>

#include "bfseg/parallel.hpp"

namespace bfseg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::format: return "malformed file";
    case ErrorKind::io: return "i/o failure";
    case ErrorKind::kind_violation: return "kind violation";
    case ErrorKind::dims_mismatch: return "dims mismatch";
    case ErrorKind::degenerate: return "degenerate input";
    case ErrorKind::no_background: return "no background";
    case ErrorKind::empty_input: return "empty input";
  }
  return "unknown";
}

bool Spacing::valid() const noexcept {
  return std::isfinite(sx) && std::isfinite(sy) && std::isfinite(sz) && sx > 0 &&
         sy > 0 && sz > 0;
}

double Spacing::min() const noexcept {
  double m = sx < sy ? sx : sy;
  return m < sz ? m : sz;
}

std::string_view to_string(Kind kind) noexcept {
  switch (kind) {
    case Kind::image: return "image";
    case Kind::probability: return "probability";
    case Kind::distance: return "distance";
    case Kind::label: return "label";
  }
  return "image";
}

Kind kind_from_string(std::string_view name) {
  if (name == "image") return Kind::image;
  if (name == "probability") return Kind::probability;
  if (name == "distance") return Kind::distance;
  if (name == "label") return Kind::label;
  throw Error(ErrorKind::format, "unknown volume kind '" + std::string(name) + "'");
}

namespace {

void check_shape(const Dims& dims, const Spacing& spacing) {
  if (!dims.valid())
    throw Error(ErrorKind::invalid_argument, "volume dims must be positive");
  if (!spacing.valid())
    throw Error(ErrorKind::invalid_argument, "spacing must be positive and finite");
}

}  // namespace

Volume::Volume(Dims dims, Spacing spacing, Kind kind, float fill)
    : dims_(dims), spacing_(spacing), kind_(kind) {
  check_shape(dims, spacing);
  data_.assign(dims.count(), fill);
}

Volume::Volume(Dims dims, Spacing spacing, Kind kind, std::vector<float> data)
    : dims_(dims), spacing_(spacing), kind_(kind), data_(std::move(data)) {
  check_shape(dims, spacing);
  if (data_.size() != dims.count())
    throw Error(ErrorKind::dims_mismatch,
                "data length " + std::to_string(data_.size()) + " does not match dims (" +
                    std::to_string(dims.count()) + " voxels)");
}

Volume Volume::as_kind(Kind kind) const {
  Volume out = *this;
  out.kind_ = kind;
  out.validate();
  return out;
}

void Volume::validate() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const float v = data_[i];
    bool ok = std::isfinite(v);
    if (ok && kind_ == Kind::probability) ok = v >= 0.0f && v <= 1.0f;
    if (ok && kind_ == Kind::label) ok = v == 0.0f || v == 1.0f;
    if (!ok)
      throw Error(ErrorKind::kind_violation,
                  "value " + std::to_string(v) + " at index " + std::to_string(i) +
                      " is not valid for kind " + std::string(to_string(kind_)));
  }
}

bool Volume::operator==(const Volume& other) const noexcept {
  return dims_ == other.dims_ && spacing_ == other.spacing_ && kind_ == other.kind_ &&
         data_ == other.data_;
}

Mask make_mask(Dims dims, Spacing spacing) { return Volume(dims, spacing, Kind::label); }

std::size_t count_foreground(const Mask& m) {
  std::size_t n = 0;
  for (float v : m.values()) n += v != 0.0f;
  return n;
}

void require_same_grid(const Volume& a, const Volume& b, std::string_view what) {
  if (!(a.dims() == b.dims()))
    throw Error(ErrorKind::dims_mismatch, std::string(what) + ": volume dims differ");
  if (!(a.spacing() == b.spacing()))
    throw Error(ErrorKind::dims_mismatch, std::string(what) + ": voxel spacing differs");
}

void require_kind(const Volume& v, Kind kind, std::string_view what) {
  if (v.kind() != kind)
    throw Error(ErrorKind::kind_violation, std::string(what) + ": expected a " +
                                               std::string(to_string(kind)) +
                                               " volume, got " +
                                               std::string(to_string(v.kind())));
}

Volume zscore_normalize(const Volume& v) {
  const std::size_t n = v.size();
  if (n < 2) throw Error(ErrorKind::degenerate, "z-score needs at least two voxels");
  const auto vals = v.values();
  const double mean =
      deterministic_sum(n, [&](std::size_t i) { return double(vals[i]); }) / double(n);
  const double var = deterministic_sum(n, [&](std::size_t i) {
                       const double d = double(vals[i]) - mean;
                       return d * d;
                     }) /
                     double(n);
  const double sd = std::sqrt(var);
  if (!(sd > 0.0) || !std::isfinite(sd))
    throw Error(ErrorKind::degenerate, "z-score of a constant volume");

  Volume out(v.dims(), v.spacing(), Kind::image);
  auto dst = out.values();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    dst[static_cast<std::size_t>(i)] =
        static_cast<float>((double(vals[static_cast<std::size_t>(i)]) - mean) / sd);
  return out;
}

}  // namespace bfseg
