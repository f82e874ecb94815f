#include "kernel_detail.hpp"

namespace deconv::kernels {

std::vector<cplx> conv_omp(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
  if (a.empty() || b.empty())
    return {};
  std::vector<cplx> out(a.size() + b.size() - 1);
  const auto n = std::int64_t(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k)
    out[std::size_t(k)] = detail::conv_at(a, b, std::size_t(k));
  return out;
}

std::vector<double> step_sum_omp(const std::vector<double>& table, const std::vector<double>& obs,
                                 const std::vector<double>& grid, double shift, double span)
{
  std::vector<double> out(grid.size());
  const auto n = std::int64_t(grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t g = 0; g < n; ++g)
    out[std::size_t(g)] = detail::step_at(table, obs, grid[std::size_t(g)], shift, span);
  return out;
}

std::vector<long double> mixture_cdf_omp(const std::vector<NormalComponent>& comps,
                                         const std::vector<double>& grid)
{
  std::vector<long double> out(grid.size());
  const auto n = std::int64_t(grid.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t g = 0; g < n; ++g)
    out[std::size_t(g)] = detail::mixture_at(comps, grid[std::size_t(g)]);
  return out;
}

} // namespace deconv::kernels
