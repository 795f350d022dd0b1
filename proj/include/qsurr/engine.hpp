#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qsurr/instances.hpp"

namespace qsurr {

// QAOA angles theta = (gamma_1..gamma_p, beta_1..beta_p).
struct AngleVector {
  std::vector<double> gamma;
  std::vector<double> beta;

  int p() const { return static_cast<int>(gamma.size()); }
  std::vector<double> flat() const;
  static AngleVector from_flat(const std::vector<double>& theta);
  void validate() const;  // equal lengths, p >= 1, finite components
};

struct ShotEstimate {
  double value = 0.0;
  int shots = 0;
  std::uint64_t rng_seed = 0;
};

// Statevector QAOA evaluator for one problem instance. The classical cost of
// every basis state is tabulated once at construction and shared by all cost
// evaluations; the phase layer is diagonal in that table and the mixer is a
// product of single-qubit X rotations, so one evaluation costs O(p n 2^n).
// The evaluator is immutable after construction and safe to share across
// threads.
class QaoaEvaluator {
 public:
  explicit QaoaEvaluator(const ProblemInstance& inst);

  int n() const { return n_; }
  const std::vector<double>& cost_table() const { return cost_table_; }

  std::vector<std::complex<double>> prepare_state(const AngleVector& angles) const;
  // Serial reference path, kept for the kernel tests and the benchmark.
  std::vector<std::complex<double>> prepare_state_serial(
      const AngleVector& angles) const;

  // <H_C> in the prepared state; the infinite-shot cost.
  double exact_cost(const AngleVector& angles) const;

  // Mean classical cost of `shots` bitstrings sampled from the prepared
  // state by inverse-CDF on the probability table. Deterministic given seed.
  ShotEstimate sampled_cost(const AngleVector& angles, int shots,
                            std::uint64_t seed) const;

  // shots == 0 selects the exact (infinite-shot) cost.
  double cost(const AngleVector& angles, int shots, std::uint64_t seed) const;

 private:
  int n_ = 0;
  std::vector<double> cost_table_;
};

// |exact_cost(theta) - exact_cost(theta with flat component shifted by pi)|.
// The shift leaves the cost invariant for integer-coefficient (heavy-hex)
// instances; on weighted Max-Cut a gamma shift generally changes it.
double pi_shift_difference(const QaoaEvaluator& eval, const AngleVector& angles,
                           int component_index, double shift);

}  // namespace qsurr
