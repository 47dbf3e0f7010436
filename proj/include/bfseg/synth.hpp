#pragma once

#include <cstdint>

#include "bfseg/case.hpp"

namespace bfseg {

struct SynthOptions {
  /// Strength of the seeded logit noise added to the probability maps; 0 gives
  /// predictions that threshold back to the labels exactly.
  double corruption = 0.0;
  double cavity_softness_mm = 1.0;
  double scar_softness_mm = 0.3;
  double image_noise = 0.05;
};

/// Ellipsoidal cavity, scar patches drawn from its boundary band, a smoothed
/// noisy image (cavity dark, scar bright) and logistic probability maps.
CaseRecord make_case(std::uint64_t seed, Dims dims, Spacing spacing,
                     const SynthOptions& opts = {});

/// Same labels and image as make_case, but the cavity prediction has a
/// confident core and a wide uncertain rim near 0.35 inside the contour, so
/// its entropy sum is far above a make_case population and a 0.2 threshold
/// beats 0.5.
CaseRecord make_outlier_case(std::uint64_t seed, Dims dims, Spacing spacing,
                             const SynthOptions& opts = {});

}  // namespace bfseg
