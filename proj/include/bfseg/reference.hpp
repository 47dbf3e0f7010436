#pragma once

// Serial reference kernels. They use simpler algorithms than the OpenMP
// kernels in the main library and exist to cross-check and benchmark them.

#include <vector>

#include "bfseg/boundary.hpp"
#include "bfseg/volume.hpp"

namespace bfseg::reference {

/// Per-axis quadratic-time min over each line instead of the lower envelope.
std::vector<double> squared_edt(const Mask& mask, Spacing spacing);
Volume edt(const Mask& mask, Spacing spacing);

/// Direct window scan per voxel.
Volume maxpool2d_slice(const Volume& v, int kernel, float pad_value);
Mask boundary_mask(const Mask& mask, BorderMode border = BorderMode::outside_background);

/// Left-to-right serial sum.
double serial_sum(const std::vector<double>& values);

}  // namespace bfseg::reference
