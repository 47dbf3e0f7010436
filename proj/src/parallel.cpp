#include "bfseg/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bfseg {

double pairwise_sum(std::span<const double> values) noexcept {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

int kernel_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_kernel_threads(int n) noexcept {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace bfseg
