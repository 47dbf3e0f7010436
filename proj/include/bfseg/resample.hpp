#pragma once

#include "bfseg/volume.hpp"

namespace bfseg {

/// Grid-to-grid resampling. Target voxel x maps to the source continuous
/// coordinate x * (target spacing / source spacing) on each axis; samples that
/// land outside [0, n-1] clamp to the edge.
struct ResamplePlan {
  Dims source_dims;
  Spacing source_spacing;
  Dims target_dims;
  Spacing target_spacing;
  int order = 3;
  double label_threshold = 0.5;

  void validate() const;
};

/// Plan that keeps the physical extent and changes the spacing.
ResamplePlan plan_for_spacing(const Volume& v, Spacing target, int order);

/// Cubic B-spline (prefiltered, interpolating). Image or distance kind.
Volume resample_image(const Volume& v, const ResamplePlan& plan);

/// Linear interpolation then `>= plan.label_threshold`.
Mask resample_label(const Mask& m, const ResamplePlan& plan);

/// Linear interpolation clamped to [0, 1].
Volume resample_prob(const Volume& v, const ResamplePlan& plan);

}  // namespace bfseg
