#pragma once

#include "bfseg/volume.hpp"

namespace bfseg {

/// In-plane max over a kernel x kernel window (stride 1, same-size output),
/// independently per z-slice. Window cells outside the slice take `pad_value`.
Volume maxpool2d_slice(const Volume& v, int kernel, float pad_value);

/// `is_signed` selects the pad value: 0 for a {0,1} mask, -1 for a negated
/// {0,-1} mask. For inputs in those ranges the pad never exceeds the window
/// center, so both reduce to a max over the in-slice part of the window.
Volume maxpool2d_slice(const Volume& v, int kernel, bool is_signed);

/// How the erosion half of the band treats voxels beyond the slice border.
enum class BorderMode {
  /// Outside counts as background: foreground touching the border gets an
  /// inner rim there.
  outside_background,
  /// Outside counts as foreground (pure max-pool semantics): no inner rim on
  /// the image border.
  outside_foreground,
};

/// Band of width 3 around the mask contour, per slice: two voxels outside and
/// one inside. M_b = maxpool5(V) + maxpool3(-V).
Mask boundary_mask(const Mask& mask, BorderMode border = BorderMode::outside_background);

}  // namespace bfseg
