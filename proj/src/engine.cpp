#include "qsurr/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "qsurr/kernels.hpp"
#include "qsurr/parallel.hpp"
#include "qsurr/rng.hpp"

namespace qsurr {

std::vector<double> AngleVector::flat() const {
  std::vector<double> theta(gamma);
  theta.insert(theta.end(), beta.begin(), beta.end());
  return theta;
}

AngleVector AngleVector::from_flat(const std::vector<double>& theta) {
  if (theta.empty() || theta.size() % 2 != 0)
    throw std::invalid_argument("flat angle vector must have even length 2p");
  const std::size_t p = theta.size() / 2;
  AngleVector a;
  a.gamma.assign(theta.begin(), theta.begin() + p);
  a.beta.assign(theta.begin() + p, theta.end());
  return a;
}

void AngleVector::validate() const {
  if (gamma.empty() || gamma.size() != beta.size())
    throw std::invalid_argument("angle vector needs p >= 1 with equal gamma/beta");
  for (double g : gamma)
    if (!std::isfinite(g)) throw std::invalid_argument("non-finite gamma");
  for (double b : beta)
    if (!std::isfinite(b)) throw std::invalid_argument("non-finite beta");
}

QaoaEvaluator::QaoaEvaluator(const ProblemInstance& inst)
    : n_(instance_size(inst)), cost_table_(qsurr::cost_table(inst)) {
  if (n_ > kMaxExactQubits)
    throw std::invalid_argument("instance too large for statevector simulation");
}

std::vector<std::complex<double>> QaoaEvaluator::prepare_state(
    const AngleVector& angles) const {
  angles.validate();
  std::vector<std::complex<double>> amps(cost_table_.size());
  kernels::fill_uniform(amps);
  for (int layer = 0; layer < angles.p(); ++layer) {
    kernels::apply_phase(amps, cost_table_, angles.gamma[layer]);
    kernels::apply_mixer(amps, n_, angles.beta[layer]);
  }
  return amps;
}

std::vector<std::complex<double>> QaoaEvaluator::prepare_state_serial(
    const AngleVector& angles) const {
  angles.validate();
  std::vector<std::complex<double>> amps(cost_table_.size());
  kernels::fill_uniform_serial(amps);
  for (int layer = 0; layer < angles.p(); ++layer) {
    kernels::apply_phase_serial(amps, cost_table_, angles.gamma[layer]);
    kernels::apply_mixer_serial(amps, n_, angles.beta[layer]);
  }
  return amps;
}

double QaoaEvaluator::exact_cost(const AngleVector& angles) const {
  const auto amps = prepare_state(angles);
  return kernels::expectation_diag(amps, cost_table_);
}

ShotEstimate QaoaEvaluator::sampled_cost(const AngleVector& angles, int shots,
                                         std::uint64_t seed) const {
  if (shots < 1) throw std::invalid_argument("sampled_cost needs shots >= 1");
  const auto amps = prepare_state(angles);
  const auto cdf = kernels::probability_cdf(amps);
  Rng rng(seed);
  double acc = 0.0;
  for (int s = 0; s < shots; ++s)
    acc += cost_table_[kernels::sample_index(cdf, rng.uniform())];
  return {acc / shots, shots, seed};
}

double QaoaEvaluator::cost(const AngleVector& angles, int shots,
                           std::uint64_t seed) const {
  return shots == 0 ? exact_cost(angles) : sampled_cost(angles, shots, seed).value;
}

double pi_shift_difference(const QaoaEvaluator& eval, const AngleVector& angles,
                           int component_index, double shift) {
  auto theta = angles.flat();
  if (component_index < 0 ||
      component_index >= static_cast<int>(theta.size()))
    throw std::invalid_argument("component index out of range");
  const double base = eval.exact_cost(angles);
  theta[component_index] += shift;
  const double shifted = eval.exact_cost(AngleVector::from_flat(theta));
  return std::abs(base - shifted);
}

}  // namespace qsurr
