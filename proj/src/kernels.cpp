#include "qsurr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsurr/parallel.hpp"

namespace qsurr::kernels {

// Below this statevector size the OpenMP region overhead outweighs the work.
constexpr std::size_t kParallelCutoff = 1u << 14;

void fill_uniform_serial(std::vector<cplx>& amps) {
  const double a = 1.0 / std::sqrt(static_cast<double>(amps.size()));
  std::fill(amps.begin(), amps.end(), cplx{a, 0.0});
}

void fill_uniform(std::vector<cplx>& amps) {
  const double a = 1.0 / std::sqrt(static_cast<double>(amps.size()));
  const std::int64_t dim = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (amps.size() >= kParallelCutoff)
  for (std::int64_t i = 0; i < dim; ++i) amps[i] = cplx{a, 0.0};
}

void apply_phase_serial(std::vector<cplx>& amps, const std::vector<double>& diag,
                        double gamma) {
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double phi = -gamma * diag[i];
    amps[i] *= cplx{std::cos(phi), std::sin(phi)};
  }
}

void apply_phase(std::vector<cplx>& amps, const std::vector<double>& diag,
                 double gamma) {
  if (diag.size() != amps.size())
    throw std::invalid_argument("diagonal size does not match statevector");
  const std::int64_t dim = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (amps.size() >= kParallelCutoff)
  for (std::int64_t i = 0; i < dim; ++i) {
    const double phi = -gamma * diag[i];
    amps[i] *= cplx{std::cos(phi), std::sin(phi)};
  }
}

namespace {

inline void mix_pair(cplx& a0, cplx& a1, double c, double s) {
  // exp(-i b X) = [[cos b, -i sin b], [-i sin b, cos b]]
  const cplx t0 = a0, t1 = a1;
  a0 = c * t0 - cplx{0.0, s} * t1;
  a1 = c * t1 - cplx{0.0, s} * t0;
}

}  // namespace

void apply_mixer_serial(std::vector<cplx>& amps, int n_qubits, double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  for (int q = 0; q < n_qubits; ++q) {
    const std::size_t stride = 1ull << q;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride)
      for (std::size_t off = 0; off < stride; ++off)
        mix_pair(amps[base + off], amps[base + off + stride], c, s);
  }
}

void apply_mixer(std::vector<cplx>& amps, int n_qubits, double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  const std::int64_t pairs = static_cast<std::int64_t>(amps.size() >> 1);
  for (int q = 0; q < n_qubits; ++q) {
    const std::size_t stride = 1ull << q;
    const std::size_t low_mask = stride - 1;
#pragma omp parallel for schedule(static) if (amps.size() >= kParallelCutoff)
    for (std::int64_t k = 0; k < pairs; ++k) {
      const std::size_t i0 =
          ((static_cast<std::size_t>(k) & ~low_mask) << 1) |
          (static_cast<std::size_t>(k) & low_mask);
      mix_pair(amps[i0], amps[i0 | stride], c, s);
    }
  }
}

double expectation_diag_serial(const std::vector<cplx>& amps,
                               const std::vector<double>& diag) {
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i)
    acc += std::norm(amps[i]) * diag[i];
  return acc;
}

double expectation_diag(const std::vector<cplx>& amps,
                        const std::vector<double>& diag) {
  if (diag.size() != amps.size())
    throw std::invalid_argument("diagonal size does not match statevector");
  return chunked_sum(amps.size(),
                     [&](std::size_t i) { return std::norm(amps[i]) * diag[i]; });
}

double norm_sq(const std::vector<cplx>& amps) {
  return chunked_sum(amps.size(), [&](std::size_t i) { return std::norm(amps[i]); });
}

std::vector<double> probability_cdf(const std::vector<cplx>& amps) {
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i]);
    cdf[i] = acc;
  }
  return cdf;
}

std::size_t sample_index(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.end()) return cdf.size() - 1;
  return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace qsurr::kernels
