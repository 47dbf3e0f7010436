#pragma once

#include <filesystem>
#include <vector>

#include "bfseg/boundary.hpp"
#include "bfseg/distance.hpp"
#include "bfseg/uam.hpp"

namespace bfseg {

/// Stage-1 post-processing of a cavity probability map: UAM threshold, band,
/// and the signed distance map that feeds stage 2.
struct Stage1Result {
  double entropy = 0.0;
  bool outlier = false;
  double threshold = 0.5;
  Mask mask;
  Mask band;
  Volume distance;
};

/// Throws Error{degenerate} when the thresholded mask yields no usable band.
Stage1Result stage1_post(const Volume& la_prob, const UamStats& stats,
                         BorderMode border = BorderMode::outside_background,
                         BandUnits units = BandUnits::millimeters);

/// Stage-2 input: channel volumes in order [image, distance] listed by
/// `<dir>/bundle.json`.
struct Bundle {
  Volume image;
  Volume distance;
};

void write_bundle(const Volume& image, const Volume& distance, const std::filesystem::path& dir);
Bundle read_bundle(const std::filesystem::path& dir);

}  // namespace bfseg
