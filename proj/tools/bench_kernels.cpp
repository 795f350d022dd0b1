// Timing comparison of the OpenMP statevector kernels against their serial
// reference implementations. Prints one row per (kernel, n) with the median
// of five repetitions.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qsurr/engine.hpp"
#include "qsurr/instances.hpp"
#include "qsurr/kernels.hpp"

using namespace qsurr;
using cplx = kernels::cplx;

namespace {

double median_ms(const std::function<void()>& fn, int reps = 5) {
  std::vector<double> times;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    times.push_back(std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

void row(const char* name, int n, double serial_ms, double parallel_ms) {
  std::printf("%-22s n=%-3d serial %9.2f ms   omp %9.2f ms   speedup %5.2fx\n",
              name, n, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

volatile double sink;  // keeps reductions from being optimized out

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> sizes{12, 16, 20};
  if (argc > 1) {
    sizes.clear();
    for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
  }
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#endif

  for (int n : sizes) {
    const ProblemInstance inst = generate_3regular_maxcut(n, 1);

    row("cost_table", n, median_ms([&] { sink = cost_table_serial(inst)[0]; }),
        median_ms([&] { sink = cost_table(inst)[0]; }));

    const QaoaEvaluator eval(inst);
    AngleVector angles{{0.3, -0.2, 0.1}, {0.2, 0.1, -0.3}};

    row("prepare_state (p=3)", n,
        median_ms([&] { sink = eval.prepare_state_serial(angles)[0].real(); }),
        median_ms([&] { sink = eval.prepare_state(angles)[0].real(); }));

    const auto amps = eval.prepare_state(angles);
    row("expectation_diag", n,
        median_ms([&] {
          sink = kernels::expectation_diag_serial(amps, eval.cost_table());
        }),
        median_ms(
            [&] { sink = kernels::expectation_diag(amps, eval.cost_table()); }));

    row("brute_force_extrema", n,
        median_ms([&] { sink = brute_force_extrema_serial(inst).c_min; }),
        median_ms([&] { sink = brute_force_extrema(inst).c_min; }));
  }
  return 0;
}
