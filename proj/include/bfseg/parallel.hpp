#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bfseg {

/// Pairwise (tree) summation in index order. Same input, same bits.
double pairwise_sum(std::span<const double> values) noexcept;

/// Sum of term(i) for i in [0, n). Work is split into fixed-size blocks whose
/// partial sums are combined pairwise, so the result does not depend on the
/// number of OpenMP threads.
template <class Term>
double deterministic_sum(std::size_t n, Term&& term) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = begin + kBlock < n ? begin + kBlock : n;
    double buf[kBlock];
    for (std::size_t i = begin; i < end; ++i) buf[i - begin] = term(i);
    partial[static_cast<std::size_t>(b)] =
        pairwise_sum(std::span<const double>(buf, end - begin));
  }
  return pairwise_sum(partial);
}

/// Number of threads OpenMP regions will use (1 without OpenMP).
int kernel_threads() noexcept;
void set_kernel_threads(int n) noexcept;

}  // namespace bfseg
