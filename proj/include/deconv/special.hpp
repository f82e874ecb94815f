#pragma once

// Small numeric helpers shared by the deconvolution modules.

#include <cmath>
#include <cstdint>
#include <vector>

namespace deconv {

// Binomial coefficient by the multiplicative recurrence. Zero outside 0 <= k <= n.
// Reliable (exactly representable in double) up to n = 45 or so; beyond that the
// Neumann weights lose integrality.
double binomial(std::int64_t n, std::int64_t k);
long double binomial_ld(std::int64_t n, std::int64_t k);

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline long double normal_cdf_ld(long double x) { return 0.5L * std::erfc(-x / std::sqrt(2.0L)); }
inline double normal_pdf(double x)
{
  constexpr double inv_sqrt_2pi = 0.39894228040143267794;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// floor() that snaps values within a relative 1e-9 of an integer up to that integer,
// so that lattice points computed in floating point land on the intended cell.
std::int64_t lattice_floor(double x);

// Gauss-Hermite rule for the standard normal weight: E f(Z) ~ sum w_i f(z_i).
struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

const QuadratureRule& gauss_hermite_normal(int order = 64);

// Neumaier-compensated running sum.
template <typename T>
class CompensatedSum
{
public:
  void add(T x)
  {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

private:
  T sum_{};
  T comp_{};
};

} // namespace deconv
