#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfseg/error.hpp"

namespace bfseg {

/// Millimeters per voxel along x, y, z.
struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;

  bool valid() const noexcept;
  double min() const noexcept;
  bool operator==(const Spacing&) const = default;
};

struct Dims {
  std::int64_t nx = 0;
  std::int64_t ny = 0;
  std::int64_t nz = 0;

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  bool valid() const noexcept { return nx > 0 && ny > 0 && nz > 0; }
  bool operator==(const Dims&) const = default;
};

enum class Kind : std::uint8_t { image, probability, distance, label };

std::string_view to_string(Kind kind) noexcept;
Kind kind_from_string(std::string_view name);

/// Dense 3D float field with physical spacing. x varies fastest:
/// idx(x,y,z) = x + nx*(y + ny*z).
class Volume {
 public:
  Volume() = default;
  Volume(Dims dims, Spacing spacing, Kind kind, float fill = 0.0f);
  Volume(Dims dims, Spacing spacing, Kind kind, std::vector<float> data);

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  Kind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return static_cast<std::size_t>(x + dims_.nx * (y + dims_.ny * z));
  }

  float operator()(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return data_[index(x, y, z)];
  }
  float& operator()(std::int64_t x, std::int64_t y, std::int64_t z) noexcept {
    return data_[index(x, y, z)];
  }
  float operator[](std::size_t i) const noexcept { return data_[i]; }
  float& operator[](std::size_t i) noexcept { return data_[i]; }

  std::span<const float> values() const noexcept { return data_; }
  std::span<float> values() noexcept { return data_; }

  /// Same dims and spacing.
  bool same_grid(const Volume& other) const noexcept {
    return dims_ == other.dims_ && spacing_ == other.spacing_;
  }

  /// Copy relabelled with another kind; the result is validated.
  Volume as_kind(Kind kind) const;

  /// Throws Error{kind_violation} when values break the kind's range.
  void validate() const;

  bool operator==(const Volume& other) const noexcept;

 private:
  Dims dims_;
  Spacing spacing_;
  Kind kind_ = Kind::image;
  std::vector<float> data_;
};

/// A label-kind Volume whose values are exactly 0 or 1.
using Mask = Volume;

Mask make_mask(Dims dims, Spacing spacing);
std::size_t count_foreground(const Mask& m);

void require_same_grid(const Volume& a, const Volume& b, std::string_view what);
void require_kind(const Volume& v, Kind kind, std::string_view what);

/// Population z-score over the whole volume.
Volume zscore_normalize(const Volume& v);

}  // namespace bfseg
