// Wall-clock comparison of the OpenMP kernels against the serial reference
// implementations, plus an agreement check on every pair.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "bfseg/boundary.hpp"
#include "bfseg/distance.hpp"
#include "bfseg/losses.hpp"
#include "bfseg/parallel.hpp"
#include "bfseg/reference.hpp"
#include "bfseg/synth.hpp"

using namespace bfseg;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double ref_ms, double par_ms, bool agree) {
  std::printf("%-16s %12.2f %12.2f %8.2fx  %s\n", name, ref_ms, par_ms, ref_ms / par_ms, agree ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bfseg kernel benchmark: serial reference vs parallel"};
  std::vector<std::int64_t> dims{160, 160, 40};
  int repeats = 3;
  int threads = 0;
  app.add_option("--dims", dims, "nx,ny,nz")->delimiter(',')->expected(3);
  app.add_option("--repeats", repeats, "Timed repetitions (best is reported)")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Kernel threads (0 = OpenMP default)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) set_kernel_threads(threads);

  const Dims d{dims[0], dims[1], dims[2]};
  const Spacing s{0.625, 0.625, 2.5};
  const CaseRecord c = make_case(1, d, s, {0.2});
  const Mask& label = *c.la_label;
  std::printf("volume %lldx%lldx%lld, %d kernel threads, best of %d\n", (long long)d.nx, (long long)d.ny,
              (long long)d.nz, kernel_threads(), repeats);
  std::printf("%-16s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

  {
    Volume a, b;
    const double r = best_of(repeats, [&] { a = reference::edt(label, s); });
    const double p = best_of(repeats, [&] { b = edt(label, s); });
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, double(std::abs(a[i] - b[i])));
    row("edt", r, p, worst <= 1e-4);
  }
  {
    Volume a, b;
    const double r = best_of(repeats, [&] { a = reference::maxpool2d_slice(c.image, 5, -1e30f); });
    const double p = best_of(repeats, [&] { b = maxpool2d_slice(c.image, 5, -1e30f); });
    row("maxpool5", r, p, a == b);
  }
  {
    Mask a, b;
    const double r = best_of(repeats, [&] { a = reference::boundary_mask(label); });
    const double p = best_of(repeats, [&] { b = boundary_mask(label); });
    row("boundary_mask", r, p, a == b);
  }
  {
    const std::vector<double> ce = voxel_cross_entropy(*c.la_prob, label);
    double a = 0, b = 0;
    const double r = best_of(repeats, [&] { a = reference::serial_sum(ce); });
    const double p = best_of(repeats, [&] { b = deterministic_sum(ce.size(), [&](std::size_t i) { return ce[i]; }); });
    row("sum", r, p, std::abs(a - b) <= 1e-9 * std::abs(a));
  }
  return 0;
}
