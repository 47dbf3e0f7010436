#include "bfseg/resample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace bfseg {

namespace {

// Pole of the cubic B-spline prefilter.
const double kPole = std::sqrt(3.0) - 2.0;

// Samples added on each side of a line before prefiltering. The prefilter's
// boundary influence decays as |pole|^k, so 16 samples push it below 1e-9.
constexpr std::int64_t kPad = 16;

// In-place conversion of samples to cubic B-spline coefficients with
// mirror-symmetric boundaries (Unser's recursive filter).
void bspline_prefilter(std::vector<double>& c) {
  const std::size_t n = c.size();
  if (n < 2) return;
  const double z = kPole;
  const double lambda = (1.0 - z) * (1.0 - 1.0 / z);
  for (double& v : c) v *= lambda;

  // causal init: sum over the mirrored signal, truncated when |z|^k is negligible
  const std::size_t horizon =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(std::log(1e-12) / std::log(std::abs(z)))));
  double zk = z;
  double sum = c[0];
  for (std::size_t k = 1; k < horizon; ++k) {
    sum += zk * c[k];
    zk *= z;
  }
  c[0] = sum;
  for (std::size_t k = 1; k < n; ++k) c[k] += z * c[k - 1];

  c[n - 1] = (z / (z * z - 1.0)) * (z * c[n - 2] + c[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) c[k] = z * (c[k + 1] - c[k]);
}

double cubic_bspline(double t) {
  t = std::abs(t);
  if (t < 1.0) return 2.0 / 3.0 - t * t + 0.5 * t * t * t;
  if (t < 2.0) {
    const double u = 2.0 - t;
    return u * u * u / 6.0;
  }
  return 0.0;
}

double clamp_coord(double x, std::int64_t n) {
  return std::clamp(x, 0.0, static_cast<double>(n - 1));
}

// Resamples one line of n samples to m samples along one axis.
class LineResampler {
 public:
  LineResampler(std::int64_t n, std::int64_t m, double ratio, int order)
      : n_(n), m_(m), ratio_(ratio), order_(order) {}

  void run(const double* src, std::ptrdiff_t src_stride, double* dst,
           std::ptrdiff_t dst_stride, std::vector<double>& scratch) const {
    if (order_ == 1) {
      for (std::int64_t i = 0; i < m_; ++i) {
        const double x = clamp_coord(static_cast<double>(i) * ratio_, n_);
        const auto i0 = static_cast<std::int64_t>(std::floor(x));
        const std::int64_t i1 = std::min(i0 + 1, n_ - 1);
        const double f = x - static_cast<double>(i0);
        dst[i * dst_stride] = (1.0 - f) * src[i0 * src_stride] + f * src[i1 * src_stride];
      }
      return;
    }

    // Point-reflected padding (2*f0 - f[k]) keeps affine fields affine right
    // up to the border, so the mirror boundary of the prefilter never leaks in.
    const std::int64_t total = n_ + 2 * kPad;
    scratch.resize(static_cast<std::size_t>(total));
    const double first = src[0];
    const double last = src[(n_ - 1) * src_stride];
    for (std::int64_t k = 0; k < total; ++k) {
      const std::int64_t j = k - kPad;
      double v;
      if (j < 0) {
        const std::int64_t r = std::min(-j, n_ - 1);
        v = 2.0 * first - src[r * src_stride];
      } else if (j >= n_) {
        const std::int64_t r = std::max(2 * (n_ - 1) - j, std::int64_t{0});
        v = 2.0 * last - src[r * src_stride];
      } else {
        v = src[j * src_stride];
      }
      scratch[static_cast<std::size_t>(k)] = v;
    }
    if (n_ == 1) {
      for (std::int64_t i = 0; i < m_; ++i) dst[i * dst_stride] = first;
      return;
    }
    bspline_prefilter(scratch);
    for (std::int64_t i = 0; i < m_; ++i) {
      const double x = clamp_coord(static_cast<double>(i) * ratio_, n_) + kPad;
      const auto base = static_cast<std::int64_t>(std::floor(x));
      double acc = 0.0;
      for (std::int64_t k = base - 1; k <= base + 2; ++k) {
        const std::int64_t kk = std::clamp<std::int64_t>(k, 0, total - 1);
        acc += scratch[static_cast<std::size_t>(kk)] * cubic_bspline(x - static_cast<double>(k));
      }
      dst[i * dst_stride] = acc;
    }
  }

 private:
  std::int64_t n_;
  std::int64_t m_;
  double ratio_;
  int order_;
};

struct Field {
  std::array<std::int64_t, 3> n;
  std::vector<double> data;
};

// One separable pass along `axis`.
Field resample_axis(const Field& in, int axis, std::int64_t m, double ratio, int order) {
  Field out;
  out.n = in.n;
  out.n[axis] = m;
  out.data.assign(static_cast<std::size_t>(out.n[0] * out.n[1] * out.n[2]), 0.0);
  if (in.n[axis] == m && ratio == 1.0) {
    out.data = in.data;
    return out;
  }

  const std::array<std::ptrdiff_t, 3> in_stride{1, in.n[0], in.n[0] * in.n[1]};
  const std::array<std::ptrdiff_t, 3> out_stride{1, out.n[0], out.n[0] * out.n[1]};
  const int a = axis == 0 ? 1 : 0;
  const int b = axis == 2 ? 1 : 2;
  const LineResampler line(in.n[axis], m, ratio, order);
  const std::int64_t lines = in.n[a] * in.n[b];

#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (std::int64_t l = 0; l < lines; ++l) {
      const std::int64_t ia = l % in.n[a];
      const std::int64_t ib = l / in.n[a];
      const double* src = in.data.data() + ia * in_stride[a] + ib * in_stride[b];
      double* dst = out.data.data() + ia * out_stride[a] + ib * out_stride[b];
      line.run(src, in_stride[axis], dst, out_stride[axis], scratch);
    }
  }
  return out;
}

Field run_plan(const Volume& v, const ResamplePlan& plan) {
  plan.validate();
  if (!(v.dims() == plan.source_dims))
    throw Error(ErrorKind::dims_mismatch, "resample: volume dims differ from the plan source");
  Field f;
  f.n = {v.dims().nx, v.dims().ny, v.dims().nz};
  f.data.assign(v.values().begin(), v.values().end());
  const std::array<std::int64_t, 3> target{plan.target_dims.nx, plan.target_dims.ny,
                                           plan.target_dims.nz};
  const std::array<double, 3> ratio{plan.target_spacing.sx / plan.source_spacing.sx,
                                    plan.target_spacing.sy / plan.source_spacing.sy,
                                    plan.target_spacing.sz / plan.source_spacing.sz};
  for (int axis = 0; axis < 3; ++axis)
    f = resample_axis(f, axis, target[axis], ratio[axis], plan.order);
  return f;
}

}  // namespace

void ResamplePlan::validate() const {
  if (!source_dims.valid() || !target_dims.valid())
    throw Error(ErrorKind::invalid_argument, "resample plan dims must be positive");
  if (!source_spacing.valid() || !target_spacing.valid())
    throw Error(ErrorKind::invalid_argument, "resample plan spacing must be positive");
  if (order != 1 && order != 3)
    throw Error(ErrorKind::invalid_argument, "resample order must be 1 or 3");
  if (!(label_threshold > 0.0 && label_threshold < 1.0))
    throw Error(ErrorKind::invalid_argument, "label threshold must lie in (0, 1)");
}

ResamplePlan plan_for_spacing(const Volume& v, Spacing target, int order) {
  if (!target.valid())
    throw Error(ErrorKind::invalid_argument, "target spacing must be positive");
  auto count = [](std::int64_t n, double s_src, double s_tgt) {
    const double extent = static_cast<double>(n) * s_src / s_tgt;
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(extent)));
  };
  ResamplePlan plan;
  plan.source_dims = v.dims();
  plan.source_spacing = v.spacing();
  plan.target_spacing = target;
  plan.target_dims = {count(v.dims().nx, v.spacing().sx, target.sx),
                      count(v.dims().ny, v.spacing().sy, target.sy),
                      count(v.dims().nz, v.spacing().sz, target.sz)};
  plan.order = order;
  return plan;
}

Volume resample_image(const Volume& v, const ResamplePlan& plan) {
  if (v.kind() != Kind::image && v.kind() != Kind::distance)
    throw Error(ErrorKind::kind_violation, "resample_image expects an image or distance volume");
  if (plan.order != 3)
    throw Error(ErrorKind::invalid_argument, "resample_image uses order 3");
  Field f = run_plan(v, plan);
  std::vector<float> data(f.data.size());
  std::transform(f.data.begin(), f.data.end(), data.begin(),
                 [](double x) { return static_cast<float>(x); });
  return Volume(plan.target_dims, plan.target_spacing, v.kind(), std::move(data));
}

Mask resample_label(const Mask& m, const ResamplePlan& plan) {
  require_kind(m, Kind::label, "resample_label");
  ResamplePlan linear = plan;
  linear.order = 1;
  Field f = run_plan(m, linear);
  std::vector<float> data(f.data.size());
  std::transform(f.data.begin(), f.data.end(), data.begin(), [&](double x) {
    return x >= plan.label_threshold ? 1.0f : 0.0f;
  });
  return Volume(plan.target_dims, plan.target_spacing, Kind::label, std::move(data));
}

Volume resample_prob(const Volume& v, const ResamplePlan& plan) {
  require_kind(v, Kind::probability, "resample_prob");
  ResamplePlan linear = plan;
  linear.order = 1;
  Field f = run_plan(v, linear);
  std::vector<float> data(f.data.size());
  std::transform(f.data.begin(), f.data.end(), data.begin(), [](double x) {
    return std::clamp(static_cast<float>(x), 0.0f, 1.0f);
  });
  return Volume(plan.target_dims, plan.target_spacing, Kind::probability, std::move(data));
}

}  // namespace bfseg
