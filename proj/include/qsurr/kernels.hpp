#pragma once

#include <complex>
#include <vector>

namespace qsurr::kernels {

using cplx = std::complex<double>;

// OpenMP kernels operating on a 2^n statevector. Each has a serial reference
// twin used by the tests and the kernel benchmark. The parallel versions give
// thread-count-independent results: elementwise updates race-free by
// construction, reductions combined in fixed chunk order.

void fill_uniform(std::vector<cplx>& amps);
void fill_uniform_serial(std::vector<cplx>& amps);

// amps[idx] *= exp(-i * gamma * diag[idx])
void apply_phase(std::vector<cplx>& amps, const std::vector<double>& diag,
                 double gamma);
void apply_phase_serial(std::vector<cplx>& amps, const std::vector<double>& diag,
                        double gamma);

// exp(-i * beta * X) on every one of the n qubits
void apply_mixer(std::vector<cplx>& amps, int n_qubits, double beta);
void apply_mixer_serial(std::vector<cplx>& amps, int n_qubits, double beta);

// sum_idx |amps[idx]|^2 * diag[idx]
double expectation_diag(const std::vector<cplx>& amps,
                        const std::vector<double>& diag);
double expectation_diag_serial(const std::vector<cplx>& amps,
                               const std::vector<double>& diag);

double norm_sq(const std::vector<cplx>& amps);

// Inclusive prefix sums of |amps|^2, for inverse-CDF sampling.
std::vector<double> probability_cdf(const std::vector<cplx>& amps);

// Basis index drawn from the CDF for uniform u in [0, 1).
std::size_t sample_index(const std::vector<double>& cdf, double u);

}  // namespace qsurr::kernels
