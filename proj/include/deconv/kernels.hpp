#pragma once

// Hot loops in two builds: a plain serial reference and an OpenMP version.
// Both must return identical results; the test suite checks this.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace deconv::kernels {

using cplx = std::complex<double>;

std::vector<cplx> conv_serial(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<cplx> conv_omp(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Picks the OpenMP kernel once the output is large enough to amortize the fork.
std::vector<cplx> conv_auto(const std::vector<cplx>& a, const std::vector<cplx>& b);

// out[g] = sum_i table[floor((grid[g] + shift - obs[i]) / span)], where the
// table reads as 0 at negative indices and saturates at its last entry.
std::vector<double> step_sum_serial(const std::vector<double>& table, const std::vector<double>& obs,
                                    const std::vector<double>& grid, double shift, double span);
std::vector<double> step_sum_omp(const std::vector<double>& table, const std::vector<double>& obs,
                                 const std::vector<double>& grid, double shift, double span);

struct NormalComponent
{
  long double weight;
  long double mean;
  long double variance; // 0 means a point mass
};

// out[g] = sum_k weight_k P(N(mean_k, variance_k) <= grid[g]).
std::vector<long double> mixture_cdf_serial(const std::vector<NormalComponent>& comps,
                                            const std::vector<double>& grid);
std::vector<long double> mixture_cdf_omp(const std::vector<NormalComponent>& comps,
                                         const std::vector<double>& grid);

} // namespace deconv::kernels
