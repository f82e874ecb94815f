#pragma once

#include "deconv/kernels.hpp"
#include "deconv/special.hpp"

#include <cmath>

namespace deconv::kernels::detail {

inline cplx conv_at(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t k)
{
  std::size_t lo = k >= b.size() - 1 ? k - (b.size() - 1) : 0;
  std::size_t hi = std::min(k, a.size() - 1);
  cplx s = 0.0;
  for (std::size_t i = lo; i <= hi; ++i)
    s += a[i] * b[k - i];
  return s;
}

inline double step_at(const std::vector<double>& table, const std::vector<double>& obs, double x, double shift,
                      double span)
{
  if (table.empty())
    return 0.0;
  const auto last = std::int64_t(table.size()) - 1;
  double s = 0.0;
  for (double y : obs) {
    std::int64_t k = lattice_floor((x + shift - y) / span);
    if (k >= 0)
      s += table[std::size_t(std::min(k, last))];
  }
  return s;
}

inline long double mixture_at(const std::vector<NormalComponent>& comps, double x)
{
  long double s = 0.0L;
  for (const auto& c : comps) {
    long double d = (long double)x - c.mean;
    if (c.variance == 0.0L)
      s += d >= -1e-9L * (1.0L + std::abs(c.mean)) ? c.weight : 0.0L;
    else
      s += c.weight * normal_cdf_ld(d / std::sqrt(c.variance));
  }
  return s;
}

} // namespace deconv::kernels::detail
