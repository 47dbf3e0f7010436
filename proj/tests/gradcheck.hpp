#pragma once

// Central finite differences on voxel probabilities, used to check the
// analytic loss gradients.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "bfseg/losses.hpp"
#include "oracles.hpp"

namespace gradcheck {

using LossFn = std::function<bfseg::LossValue(const bfseg::Volume&, const bfseg::Mask&, bool)>;

/// Max over voxels of |fd - analytic| / max(|fd|, |analytic|, 1e-8). The step
/// actually taken is measured after rounding the perturbed values to float.
inline double max_relative_error(const LossFn& loss, const bfseg::Volume& prob,
                                 const bfseg::Mask& truth, double h = 1e-4) {
  const bfseg::LossValue base = loss(prob, truth, true);
  const auto grad = base.gradient->values();
  double worst = 0.0;
  bfseg::Volume p = prob;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const float orig = prob[i];
    const float up = static_cast<float>(double(orig) + h);
    const float down = static_cast<float>(double(orig) - h);
    p[i] = up;
    const double lp = loss(p, truth, false).value;
    p[i] = down;
    const double lm = loss(p, truth, false).value;
    p[i] = orig;
    const double fd = (lp - lm) / (double(up) - double(down));
    const double an = grad[i];
    const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
    worst = std::max(worst, std::abs(fd - an) / denom);
  }
  return worst;
}

struct Case {
  bfseg::Volume prob;
  bfseg::Mask truth;
};

/// Random 4x4x2 case with probabilities in [0.05, 0.95], away from the clamp.
/// For each k in `ks`, the per-voxel losses at the TopK cut differ by more than
/// `gap`, so the selection cannot flip under the finite-difference step.
inline Case random_case(std::mt19937_64& rng, const std::vector<double>& ks, double gap = 1e-2) {
  const bfseg::Dims d{4, 4, 2};
  for (;;) {
    Case c{oracle::random_prob(rng, d, {1, 1, 1}, 0.05, 0.95),
           oracle::random_mask(rng, d, {1, 1, 1}, 0.5)};
    std::vector<double> ce(c.prob.size());
    for (std::size_t i = 0; i < ce.size(); ++i) ce[i] = oracle::scalar_ce(c.prob[i], c.truth[i]);
    std::sort(ce.begin(), ce.end(), std::greater<>());
    bool ok = true;
    for (double k : ks) {
      const std::size_t n = bfseg::topk_count(k, ce.size());
      if (n < ce.size() && ce[n - 1] - ce[n] <= gap) ok = false;
    }
    if (ok) return c;
  }
}

}  // namespace gradcheck
