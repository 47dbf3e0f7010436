#include "bfseg/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bfseg/parallel.hpp"

namespace bfseg {

namespace {

void check_inputs(const Volume& prob, const Mask& truth, const char* what) {
  require_kind(prob, Kind::probability, what);
  require_kind(truth, Kind::label, what);
  if (!(prob.dims() == truth.dims()))
    throw Error(ErrorKind::dims_mismatch, std::string(what) + ": prediction and label dims differ");
}

double clamp_prob(float s) { return std::clamp(double(s), kProbEps, 1.0 - kProbEps); }

// d(ce_i)/d(s_i), zero where the clamp is active.
double ce_slope(float s, float g) {
  const double sd = double(s);
  if (sd < kProbEps || sd > 1.0 - kProbEps) return 0.0;
  return -double(g) / sd + (1.0 - double(g)) / (1.0 - sd);
}

// Indices of the selected voxels in ascending order.
std::vector<std::size_t> select_topk(const std::vector<double>& ce, std::size_t count) {
  std::vector<std::size_t> order(ce.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (count < order.size()) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count),
                     order.end(), [&](std::size_t a, std::size_t b) {
                       return ce[a] > ce[b] || (ce[a] == ce[b] && a < b);
                     });
    order.resize(count);
    std::sort(order.begin(), order.end());
  }
  return order;
}

Volume zero_gradient(const Volume& like) { return Volume(like.dims(), like.spacing(), Kind::image); }

}  // namespace

void TopKConfig::validate() const {
  if (!(k_percent > 0.0 && k_percent <= 100.0))
    throw Error(ErrorKind::invalid_argument,
                "TopK k must lie in (0, 100], got " + std::to_string(k_percent));
}

std::size_t topk_count(double k_percent, std::size_t n) {
  const double exact = k_percent * static_cast<double>(n) / 100.0;
  // absorb representation error so that e.g. 10% of 10 is 1, not 2
  const double guarded = exact - 1e-9 * std::max(1.0, exact);
  auto count = static_cast<std::size_t>(std::ceil(guarded));
  return std::clamp<std::size_t>(count, 1, n);
}

std::vector<double> voxel_cross_entropy(const Volume& prob, const Mask& truth) {
  check_inputs(prob, truth, "cross_entropy");
  const auto s = prob.values();
  const auto g = truth.values();
  std::vector<double> ce(s.size());
  const auto n = static_cast<std::ptrdiff_t>(s.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double p = clamp_prob(s[i]);
    const double t = double(g[i]);
    ce[i] = -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
  }
  return ce;
}

LossValue cross_entropy(const Volume& prob, const Mask& truth, bool with_gradient) {
  const std::vector<double> ce = voxel_cross_entropy(prob, truth);
  const double n = static_cast<double>(ce.size());
  LossValue out;
  out.value = pairwise_sum(ce) / n;
  if (with_gradient) {
    Volume grad = zero_gradient(prob);
    const auto s = prob.values();
    const auto g = truth.values();
    auto dst = grad.values();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = static_cast<float>(ce_slope(s[i], g[i]) / n);
    out.gradient = std::move(grad);
  }
  return out;
}

LossValue dice_loss(const Volume& prob, const Mask& truth, bool with_gradient) {
  check_inputs(prob, truth, "dice_loss");
  const auto s = prob.values();
  const auto g = truth.values();
  const std::size_t n = s.size();
  const double inter = deterministic_sum(n, [&](std::size_t i) { return double(s[i]) * double(g[i]); });
  const double sum_s = deterministic_sum(n, [&](std::size_t i) { return double(s[i]); });
  const double sum_g = deterministic_sum(n, [&](std::size_t i) { return double(g[i]); });
  const double num = 2.0 * inter + kDiceEps;
  const double den = sum_s + sum_g + kDiceEps;

  LossValue out;
  out.value = 1.0 - num / den;
  if (with_gradient) {
    Volume grad = zero_gradient(prob);
    auto dst = grad.values();
    const double den2 = den * den;
    for (std::size_t i = 0; i < n; ++i)
      dst[i] = static_cast<float>(-(2.0 * double(g[i]) * den - num) / den2);
    out.gradient = std::move(grad);
  }
  return out;
}

LossValue topk_loss(const Volume& prob, const Mask& truth, const TopKConfig& cfg,
                    bool with_gradient) {
  cfg.validate();
  const std::vector<double> ce = voxel_cross_entropy(prob, truth);
  const std::size_t count = topk_count(cfg.k_percent, ce.size());
  const std::vector<std::size_t> picked = select_topk(ce, count);

  std::vector<double> chosen(picked.size());
  for (std::size_t j = 0; j < picked.size(); ++j) chosen[j] = ce[picked[j]];
  const double norm = cfg.normalization == TopKNormalization::selected
                          ? static_cast<double>(picked.size())
                          : static_cast<double>(ce.size());
  LossValue out;
  out.value = pairwise_sum(chosen) / norm;
  if (with_gradient) {
    Volume grad = zero_gradient(prob);
    const auto s = prob.values();
    const auto g = truth.values();
    auto dst = grad.values();
    for (std::size_t i : picked) dst[i] = static_cast<float>(ce_slope(s[i], g[i]) / norm);
    out.gradient = std::move(grad);
  }
  return out;
}

LossValue combined_loss(const Volume& prob, const Mask& truth, const TopKConfig& cfg,
                        bool with_gradient) {
  LossValue topk = topk_loss(prob, truth, cfg, with_gradient);
  LossValue dice = dice_loss(prob, truth, with_gradient);
  LossValue out;
  out.value = topk.value + dice.value;
  if (with_gradient) {
    Volume grad = std::move(*topk.gradient);
    auto dst = grad.values();
    const auto dg = dice.gradient->values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += dg[i];
    out.gradient = std::move(grad);
  }
  return out;
}

Mask topk_focus_mask(const Volume& prob, const Mask& truth, const TopKConfig& cfg) {
  cfg.validate();
  const std::vector<double> ce = voxel_cross_entropy(prob, truth);
  Mask focus(prob.dims(), prob.spacing(), Kind::label);
  for (std::size_t i : select_topk(ce, topk_count(cfg.k_percent, ce.size()))) focus[i] = 1.0f;
  return focus;
}

}  // namespace bfseg
