#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace qsurr {

// Fixed chunk count for the deterministic parallel reductions. Partial sums
// are produced per chunk and combined serially in chunk order, so the result
// does not depend on the number of OpenMP threads.
inline constexpr std::size_t kReduceChunks = 1024;

template <class F>
double chunked_sum(std::size_t count, F&& term) {
  if (count == 0) return 0.0;
  if (count < (1u << 14)) {  // not worth a parallel region
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += term(i);
    return acc;
  }
  const std::size_t chunks = std::min(kReduceChunks, count);
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = count * c / chunks;
    const std::size_t hi = count * (c + 1) / chunks;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[c] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace qsurr
