#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bfseg/volume.hpp"

namespace bfseg {

/// Population statistics of per-case entropy sums and the thresholding rule
/// built on them.
struct UamStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n_cases = 0;
  double sigma_factor = 3.0;
  double normal_threshold = 0.5;
  double outlier_threshold = 0.2;
  /// Flag |h - mean| > k*std instead of only h - mean > k*std.
  bool two_sided = false;

  void validate() const;
  bool operator==(const UamStats&) const = default;
};

inline constexpr double kScarThreshold = 0.2;

/// Sum over voxels of the binary Shannon entropy in nats, with 0 log 0 = 0.
double entropy_sum(const Volume& prob);

/// Population mean and standard deviation; other fields keep their defaults.
UamStats fit_population(const std::vector<double>& entropies);

bool is_outlier(double entropy, const UamStats& stats);

/// Probability cut chosen for a case with the given entropy sum.
double uam_threshold(double entropy, const UamStats& stats);

/// Foreground iff p >= threshold.
Mask threshold_mask(const Volume& prob, double threshold);

/// Foreground iff p >= the UAM-selected threshold.
Mask apply_threshold(const Volume& prob, const UamStats& stats, double entropy);

/// Foreground iff p >= 0.2, for every case.
Mask scar_threshold(const Volume& prob);

void write_stats(const UamStats& stats, const std::filesystem::path& path);
UamStats read_stats(const std::filesystem::path& path);

/// Manifest lines are `<case_id> <entropy_sum>`; blank lines and lines
/// starting with '#' are skipped.
using EntropyManifest = std::vector<std::pair<std::string, double>>;
EntropyManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const EntropyManifest& entries, const std::filesystem::path& path);

}  // namespace bfseg
