#include "kernel_detail.hpp"

namespace deconv::kernels {

std::vector<cplx> conv_serial(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
  if (a.empty() || b.empty())
    return {};
  std::vector<cplx> out(a.size() + b.size() - 1);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = detail::conv_at(a, b, k);
  return out;
}

std::vector<cplx> conv_auto(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
  if (a.size() * b.size() >= 1u << 16)
    return conv_omp(a, b);
  return conv_serial(a, b);
}

std::vector<double> step_sum_serial(const std::vector<double>& table, const std::vector<double>& obs,
                                    const std::vector<double>& grid, double shift, double span)
{
  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    out[g] = detail::step_at(table, obs, grid[g], shift, span);
  return out;
}

std::vector<long double> mixture_cdf_serial(const std::vector<NormalComponent>& comps,
                                            const std::vector<double>& grid)
{
  std::vector<long double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    out[g] = detail::mixture_at(comps, grid[g]);
  return out;
}

} // namespace deconv::kernels
