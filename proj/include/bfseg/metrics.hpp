#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bfseg/volume.hpp"

namespace bfseg {

/// 2|A∩B| / (|A|+|B|) in percent. Both empty gives 100.
double dice_score(const Mask& a, const Mask& b);

/// Foreground voxels with at least one 6-neighbour in the background; voxels
/// beyond the volume edge count as background.
Mask surface_voxels(const Mask& m);

enum class HausdorffMode {
  max,   ///< true maximum (HD100)
  p95,   ///< 95th percentile of each directed set, then the larger of the two
};

/// Symmetric Hausdorff distance (mm) between the surface voxel sets of a and b,
/// measured centre to centre.
double hausdorff(const Mask& a, const Mask& b, Spacing spacing,
                 HausdorffMode mode = HausdorffMode::max);

/// Mean of all nearest-surface distances taken in both directions.
double asd(const Mask& a, const Mask& b, Spacing spacing);

/// Distances from every surface voxel of `from` to the nearest surface voxel of
/// `to`, in linear index order.
std::vector<double> directed_surface_distances(const Mask& from, const Mask& to, Spacing spacing);

struct CaseMetrics {
  std::string case_id;
  double dice_pct = 0.0;
  std::optional<double> hd_mm;
  std::optional<double> asd_mm;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct EvalReport {
  std::vector<CaseMetrics> rows;
  MeanStd dice;
  std::optional<MeanStd> hd;
  std::optional<MeanStd> asd;
};

/// Per-metric mean and population std. HD/ASD aggregate only if every row has them.
EvalReport aggregate(std::vector<CaseMetrics> rows);

/// Dice always; HD and ASD when both masks are non-empty and `with_surface`.
CaseMetrics evaluate_case(const std::string& case_id, const Mask& pred, const Mask& truth,
                          bool with_surface, HausdorffMode mode = HausdorffMode::max);

}  // namespace bfseg
