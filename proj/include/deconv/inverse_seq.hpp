#pragma once

#include "deconv/seq_core.hpp"

#include <functional>
#include <variant>

namespace deconv {

// (delta_0 - u/u(0)): zero at 0, -u(z)/u(0) elsewhere.
RightLateralSeq u_plus(const RightLateralSeq& u);

// Inverse sequence gamma(0..zmax) of u, by back substitution
// gamma(z) = -u(0)^{-1} sum_{k<z} u(z-k) gamma(k).
RightLateralSeq gamma(const RightLateralSeq& u, std::int64_t zmax);

// Same recurrence, extended lazily; for series whose length is not known up front.
class GammaGenerator
{
public:
  explicit GammaGenerator(RightLateralSeq u);
  cplx at(std::int64_t z);
  cplx leading() const { return u0_; }

private:
  RightLateralSeq u_;
  cplx u0_;
  std::vector<cplx> g_;
};

namespace family {
struct Bernoulli
{
  double u0;
  double u1;
};
struct Geometric
{
  double u; // u(z) = u (1-u)^z
};
struct Poisson
{
  double lambda;
};
struct Uniform
{
  int K;
  double u = 1.0; // u(z) = u on {0..K}
};
} // namespace family

using ClosedFormFamily = std::variant<family::Bernoulli, family::Geometric, family::Poisson, family::Uniform>;

// The family's sequence u on 0..zmax; infinite families record the dropped tail mass.
RightLateralSeq family_sequence(const ClosedFormFamily& f, std::int64_t zmax);
RightLateralSeq closed_form_gamma(const ClosedFormFamily& f, std::int64_t zmax);

// Two-index sequence p(l, z), read only on the triangle 0 <= z <= l <= lmax.
struct DoubleSeq
{
  std::function<cplx(std::int64_t, std::int64_t)> provider;
  std::int64_t lmax = 0;

  cplx operator()(std::int64_t l, std::int64_t z) const
  {
    if (l < 0 || z < 0 || z > l || l > lmax)
      return 0.0;
    return provider(l, z);
  }

  static DoubleSeq single_index(const RightLateralSeq& u, std::int64_t lmax);
};

class TriangularTable
{
public:
  explicit TriangularTable(std::int64_t lmax = -1)
      : lmax_(lmax), data_(lmax >= 0 ? std::size_t((lmax + 1) * (lmax + 2) / 2) : 0)
  {
  }

  std::int64_t lmax() const { return lmax_; }

  cplx operator()(std::int64_t l, std::int64_t z) const
  {
    if (l < 0 || z < 0 || z > l || l > lmax_)
      return 0.0;
    return data_[index(l, z)];
  }
  cplx& at(std::int64_t l, std::int64_t z) { return data_[index(l, z)]; }

private:
  static std::size_t index(std::int64_t l, std::int64_t z) { return std::size_t(l * (l + 1) / 2 + z); }

  std::int64_t lmax_;
  std::vector<cplx> data_;
};

// p(l,z)/p(l,0) with the diagonal cleared: the double-index analogue of u_plus.
TriangularTable p_plus(const DoubleSeq& p, std::int64_t lmax);

// (A.B)(l,z) = sum_{z1} A(l,z1) B(l-z1, z-z1); associative, identity delta_0(z).
TriangularTable compose(const TriangularTable& a, const TriangularTable& b);

// j-th power of p_plus under compose.
TriangularTable double_seq_power(const DoubleSeq& p, std::int64_t j, std::int64_t lmax);

// beta(l,z) = sum_{j<=z} p_plus^{*j}(l,z).
TriangularTable beta(const DoubleSeq& p, std::int64_t lmax);

// Partial Neumann sum sum_{j<=floor(x)} p_plus^{*j}(l,z).
cplx alpha_direct(const DoubleSeq& p, std::int64_t l, std::int64_t z, double x);

// The same quantity through sum_k binom(floor(x)+1, k+1) (-1)^k (p/p(.,0))^{*k}.
cplx alpha_binomial_check(const DoubleSeq& p, std::int64_t l, std::int64_t z, double x);

} // namespace deconv
