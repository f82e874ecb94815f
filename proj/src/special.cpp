#include "deconv/special.hpp"

#include <numbers>
#include <stdexcept>

namespace deconv {

namespace {

template <typename R>
R binomial_impl(std::int64_t n, std::int64_t k)
{
  if (k < 0 || n < 0 || k > n)
    return R(0);
  if (k > n - k)
    k = n - k;
  R c = 1;
  for (std::int64_t i = 1; i <= k; ++i)
    c = c * R(n - k + i) / R(i);
  return std::round(c);
}

// Newton iteration on the physicists' Hermite polynomials, then rescaled to
// the N(0,1) weight.
QuadratureRule build_gauss_hermite(int order)
{
  const int n = order;
  std::vector<double> x(n), w(n);
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(double(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15)
        break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = std::numbers::sqrt2 * x[i];
    rule.weights[i] = w[i] / std::sqrt(std::numbers::pi);
  }
  return rule;
}

} // namespace

double binomial(std::int64_t n, std::int64_t k) { return binomial_impl<double>(n, k); }
long double binomial_ld(std::int64_t n, std::int64_t k) { return binomial_impl<long double>(n, k); }

std::int64_t lattice_floor(double x)
{
  double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)))
    return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

const QuadratureRule& gauss_hermite_normal(int order)
{
  if (order != 64)
    throw std::invalid_argument("only the 64-node Gauss-Hermite rule is tabulated");
  static const QuadratureRule rule = build_gauss_hermite(64);
  return rule;
}

} // namespace deconv
