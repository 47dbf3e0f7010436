#include "bfseg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "bfseg/distance.hpp"
#include "bfseg/parallel.hpp"

namespace bfseg {

namespace {

void check_pair(const Mask& a, const Mask& b, const char* what) {
  require_kind(a, Kind::label, what);
  require_kind(b, Kind::label, what);
  if (!(a.dims() == b.dims()))
    throw Error(ErrorKind::dims_mismatch, std::string(what) + ": mask dims differ");
}

MeanStd mean_std(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  MeanStd out;
  out.mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    sq[i] = (values[i] - out.mean) * (values[i] - out.mean);
  std::sort(sq.begin(), sq.end());
  out.std = std::sqrt(pairwise_sum(sq) / n);
  return out;
}

double percentile95(std::vector<double> d) {
  // nearest-rank
  std::sort(d.begin(), d.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(d.size())));
  return d[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

double dice_score(const Mask& a, const Mask& b) {
  check_pair(a, b, "dice_score");
  std::size_t na = 0, nb = 0, both = 0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const bool x = va[i] != 0.0f;
    const bool y = vb[i] != 0.0f;
    na += x;
    nb += y;
    both += x && y;
  }
  if (na + nb == 0) return 100.0;
  return 100.0 * 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

Mask surface_voxels(const Mask& m) {
  require_kind(m, Kind::label, "surface_voxels");
  const auto [nx, ny, nz] = m.dims();
  Mask out(m.dims(), m.spacing(), Kind::label);
  auto fg = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
    return x >= 0 && y >= 0 && z >= 0 && x < nx && y < ny && z < nz && m(x, y, z) != 0.0f;
  };
#pragma omp parallel for schedule(static)
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        if (!fg(x, y, z)) continue;
        const bool interior = fg(x - 1, y, z) && fg(x + 1, y, z) && fg(x, y - 1, z) &&
                              fg(x, y + 1, z) && fg(x, y, z - 1) && fg(x, y, z + 1);
        out(x, y, z) = interior ? 0.0f : 1.0f;
      }
  return out;
}

std::vector<double> directed_surface_distances(const Mask& from, const Mask& to, Spacing spacing) {
  check_pair(from, to, "surface distance");
  const Mask sf = surface_voxels(from);
  const Mask st = surface_voxels(to);
  if (count_foreground(sf) == 0 || count_foreground(st) == 0)
    throw Error(ErrorKind::empty_input, "surface distance is undefined for an empty mask");

  // squared distance from every voxel to the nearest surface voxel of `to`
  Mask not_surface(st.dims(), spacing, Kind::label);
  for (std::size_t i = 0; i < st.size(); ++i) not_surface[i] = 1.0f - st[i];
  const std::vector<double> sq = squared_edt(not_surface, spacing);

  std::vector<double> out;
  for (std::size_t i = 0; i < sf.size(); ++i)
    if (sf[i] != 0.0f) out.push_back(std::sqrt(sq[i]));
  return out;
}

double hausdorff(const Mask& a, const Mask& b, Spacing spacing, HausdorffMode mode) {
  const auto ab = directed_surface_distances(a, b, spacing);
  const auto ba = directed_surface_distances(b, a, spacing);
  if (mode == HausdorffMode::p95) return std::max(percentile95(ab), percentile95(ba));
  return std::max(*std::max_element(ab.begin(), ab.end()), *std::max_element(ba.begin(), ba.end()));
}

double asd(const Mask& a, const Mask& b, Spacing spacing) {
  std::vector<double> all = directed_surface_distances(a, b, spacing);
  const auto ba = directed_surface_distances(b, a, spacing);
  all.insert(all.end(), ba.begin(), ba.end());
  return pairwise_sum(all) / static_cast<double>(all.size());
}

EvalReport aggregate(std::vector<CaseMetrics> rows) {
  if (rows.empty()) throw Error(ErrorKind::empty_input, "cannot aggregate an empty report");
  EvalReport report;
  std::vector<double> dice, hd, sd;
  bool surface = true;
  for (const auto& r : rows) {
    dice.push_back(r.dice_pct);
    if (r.hd_mm && r.asd_mm) {
      hd.push_back(*r.hd_mm);
      sd.push_back(*r.asd_mm);
    } else {
      surface = false;
    }
  }
  report.dice = mean_std(dice);
  if (surface) {
    report.hd = mean_std(hd);
    report.asd = mean_std(sd);
  }
  report.rows = std::move(rows);
  return report;
}

CaseMetrics evaluate_case(const std::string& case_id, const Mask& pred, const Mask& truth,
                          bool with_surface, HausdorffMode mode) {
  CaseMetrics row;
  row.case_id = case_id;
  row.dice_pct = dice_score(pred, truth);
  if (with_surface && count_foreground(pred) > 0 && count_foreground(truth) > 0) {
    row.hd_mm = hausdorff(pred, truth, truth.spacing(), mode);
    row.asd_mm = asd(pred, truth, truth.spacing());
  }
  return row;
}

}  // namespace bfseg
