#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace qsurr {

struct BoundBox {
  std::vector<double> lower;
  std::vector<double> upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const std::vector<double>& theta) const;
  void clip(std::vector<double>& theta) const;
  void validate() const;  // lower_i < upper_i

  // gamma in [-pi/2, pi/2], beta in [-pi/4, pi/4] (symmetry-reduced ranges)
  static BoundBox maxcut_default(int p);
  // all components in [-pi/2, pi/2); the cost is pi-periodic in each angle
  static BoundBox heavy_hex_default(int p);
};

using Objective = std::function<double(const std::vector<double>&)>;

struct DeConfig {
  int npop = 0;  // 0 resolves to 20 * (dim / 2), i.e. 20 per QAOA round
  int gtol = 500;
  double ftol = 5e-4;
  int max_gens = 5000;
  double mutation = 0.8;   // F
  double crossover = 0.9;  // CR
  std::uint64_t seed = 0;
};

enum class TerminationReason { ftol_gtol, max_gens };

struct OptimizerReport {
  std::vector<double> best_theta;
  double best_value = 0.0;
  int generations = 0;
  long long evaluations = 0;
  TerminationReason terminated_by = TerminationReason::max_gens;
  // best value per generation, entry 0 after initialization (DE only)
  std::vector<double> best_history;
};

// rand/1/bin differential evolution inside the box: uniform initialization,
// boundary handling by clipping, greedy selection. Terminates when the best
// value improves by less than ftol over gtol consecutive generations, or at
// max_gens. Trial evaluations within a generation run concurrently, so the
// objective must be thread-safe; a non-finite value aborts the run.
OptimizerReport differential_evolution(const Objective& objective,
                                       const BoundBox& bounds,
                                       const DeConfig& config);

// Bounded Nelder-Mead descent from an explicit start (candidates clipped to
// the box). Building block of multistart_local, exposed for locality tests.
OptimizerReport nelder_mead(const Objective& objective, const BoundBox& bounds,
                            const std::vector<double>& start,
                            int max_iters = 0);

// Best of n_starts Nelder-Mead descents from uniform random starts.
OptimizerReport multistart_local(const Objective& objective,
                                 const BoundBox& bounds, int n_starts,
                                 std::uint64_t seed);

// theta -> objective(theta) / n; the argmin is unchanged.
Objective rescale_objective(Objective objective, int n);

}  // namespace qsurr
