#pragma once

#include <optional>

#include "bfseg/volume.hpp"

namespace bfseg {

/// Probabilities are clamped to [kProbEps, 1 - kProbEps] before any log.
inline constexpr double kProbEps = 1e-7;
/// Smoothing term of the soft Dice ratio.
inline constexpr double kDiceEps = 1e-5;

struct LossValue {
  double value = 0.0;
  /// dL/ds per voxel, same grid as the prediction.
  std::optional<Volume> gradient;
};

enum class TopKNormalization {
  selected,  ///< mean over the selected k% voxels
  total,     ///< sum over the selected voxels divided by all N voxels
};

struct TopKConfig {
  double k_percent = 10.0;
  TopKNormalization normalization = TopKNormalization::selected;

  void validate() const;
};

/// Number of voxels TopK keeps: ceil(k% * n), at least 1.
std::size_t topk_count(double k_percent, std::size_t n);

/// Binary cross-entropy averaged over all voxels.
LossValue cross_entropy(const Volume& prob, const Mask& truth, bool with_gradient = true);

/// 1 - (2*sum(s*g) + eps) / (sum(s) + sum(g) + eps).
LossValue dice_loss(const Volume& prob, const Mask& truth, bool with_gradient = true);

/// Cross-entropy restricted to the k% voxels with the highest per-voxel loss
/// (ties go to the lower linear index). The selection is held fixed when
/// differentiating.
LossValue topk_loss(const Volume& prob, const Mask& truth, const TopKConfig& cfg,
                    bool with_gradient = true);

/// topk_loss + dice_loss.
LossValue combined_loss(const Volume& prob, const Mask& truth, const TopKConfig& cfg,
                        bool with_gradient = true);

/// The voxels topk_loss averages over.
Mask topk_focus_mask(const Volume& prob, const Mask& truth, const TopKConfig& cfg);

/// Per-voxel binary cross-entropy with the probability clamp applied.
std::vector<double> voxel_cross_entropy(const Volume& prob, const Mask& truth);

}  // namespace bfseg
