#pragma once

#include "bfseg/volume.hpp"

namespace bfseg {

/// Exact Euclidean distance (mm) from each foreground voxel to the nearest
/// background voxel; zero on background. Separable lower-envelope passes over
/// squared distances weighted by the squared spacing of each axis.
Volume edt(const Mask& mask, Spacing spacing);
inline Volume edt(const Mask& mask) { return edt(mask, mask.spacing()); }

/// Squared distances before the final square root. Voxels on lines that never
/// see background stay at +inf; callers decide what that means.
std::vector<double> squared_edt(const Mask& mask, Spacing spacing);

/// Units for the band term E(M) - 1 of the signed map.
enum class BandUnits {
  /// E(M) in millimeters, minus 1 mm (literal reading; default).
  millimeters,
  /// E(M) in voxel steps, minus 1 step; band values are then <= 0.
  voxels,
};

/// D = E(-M)*(-M) - (E(M) - 1)*M on a boundary band M: off-band voxels hold
/// the distance to the nearest band voxel; band voxels hold
/// -(distance to the nearest off-band voxel - 1).
Volume signed_boundary_distance(const Mask& band, Spacing spacing,
                                BandUnits units = BandUnits::millimeters);
inline Volume signed_boundary_distance(const Mask& band,
                                       BandUnits units = BandUnits::millimeters) {
  return signed_boundary_distance(band, band.spacing(), units);
}

}  // namespace bfseg
