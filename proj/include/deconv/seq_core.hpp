#pragma once

// Right-lateral sequences: finite windows of sequences that vanish to the left
// of some index.

#include "deconv/errors.hpp"
#include "deconv/kernels.hpp"
#include "deconv/special.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

namespace deconv {

using cplx = std::complex<double>;

template <typename T>
struct BasicSeq
{
  std::int64_t offset = 0;
  std::vector<T> coeffs;
  // Mass (l1 norm) dropped when an infinite sequence was cut to finite length.
  double tail_mass = 0.0;

  BasicSeq() = default;
  BasicSeq(std::vector<T> c, std::int64_t off = 0, double tail = 0.0)
      : offset(off), coeffs(std::move(c)), tail_mass(tail)
  {
  }

  static BasicSeq dirac(std::int64_t at = 0) { return BasicSeq({T(1)}, at); }

  T operator()(std::int64_t idx) const
  {
    if (idx < offset || idx >= offset + std::int64_t(coeffs.size()))
      return T(0);
    return coeffs[std::size_t(idx - offset)];
  }

  std::size_t size() const { return coeffs.size(); }
  bool empty() const { return coeffs.empty(); }
  std::int64_t last_index() const { return offset + std::int64_t(coeffs.size()) - 1; }
  bool is_truncated() const { return tail_mass > 1e-12; }

  // Drops leading and trailing coefficients below 1e-15 in modulus.
  BasicSeq normalized() const
  {
    auto small = [](const T& c) {
      if constexpr (std::is_integral_v<T>)
        return c == 0;
      else
        return std::abs(c) < 1e-15;
    };
    std::size_t lo = 0, hi = coeffs.size();
    while (hi > lo && small(coeffs[hi - 1]))
      --hi;
    while (lo < hi && small(coeffs[lo]))
      ++lo;
    BasicSeq out;
    out.offset = lo < hi ? offset + std::int64_t(lo) : 0;
    out.coeffs.assign(coeffs.begin() + lo, coeffs.begin() + hi);
    out.tail_mass = tail_mass;
    return out;
  }
};

using RightLateralSeq = BasicSeq<cplx>;
using IntegerSeq = BasicSeq<std::int64_t>;

inline RightLateralSeq real_seq(const std::vector<double>& v, std::int64_t offset = 0, double tail = 0.0)
{
  return RightLateralSeq(std::vector<cplx>(v.begin(), v.end()), offset, tail);
}

template <typename T>
double norm1(const BasicSeq<T>& a)
{
  double s = 0.0;
  for (const auto& c : a.coeffs)
    s += double(std::abs(c));
  return s;
}

template <typename T>
double norm_inf(const BasicSeq<T>& a)
{
  double s = 0.0;
  for (const auto& c : a.coeffs)
    s = std::max(s, double(std::abs(c)));
  return s;
}

template <typename T>
BasicSeq<T> conv(const BasicSeq<T>& a, const BasicSeq<T>& b)
{
  BasicSeq<T> out;
  if (a.empty() || b.empty())
    return out;
  out.offset = a.offset + b.offset;
  if constexpr (std::is_same_v<T, cplx>) {
    out.coeffs = kernels::conv_auto(a.coeffs, b.coeffs);
    out.tail_mass = a.tail_mass * (norm1(b) + b.tail_mass) + b.tail_mass * norm1(a);
  } else {
    out.coeffs.assign(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return out;
}

// Cuts a sequence to indices <= zmax.
template <typename T>
BasicSeq<T> truncate_above(BasicSeq<T> a, std::int64_t zmax)
{
  if (a.offset > zmax) {
    a.coeffs.clear();
    return a;
  }
  if (a.last_index() > zmax)
    a.coeffs.resize(std::size_t(zmax - a.offset + 1));
  return a;
}

// u^{*j} restricted to indices <= zmax.
template <typename T>
BasicSeq<T> conv_power(const BasicSeq<T>& u, std::int64_t j, std::int64_t zmax)
{
  if (j < 0)
    throw ValidationError("conv_power: negative exponent");
  BasicSeq<T> acc = truncate_above(BasicSeq<T>::dirac(0), zmax);
  for (std::int64_t i = 0; i < j; ++i)
    acc = truncate_above(conv(acc, u), zmax);
  return acc;
}

template <typename T>
struct CompositionSum
{
  T value{};
  std::int64_t compositions = 0;
};

// u^{*j}(l) by enumerating the compositions of l into j positive parts.
template <typename T>
CompositionSum<T> conv_power_oracle(const BasicSeq<T>& u, std::int64_t j, std::int64_t l)
{
  constexpr std::int64_t cap = 20;
  if (l > cap)
    throw SizeError("conv_power_oracle: index " + std::to_string(l) + " exceeds enumeration cap " +
                    std::to_string(cap));
  if (j < 1)
    throw ValidationError("conv_power_oracle: need j >= 1");
  for (std::int64_t z = u.offset; z <= std::min<std::int64_t>(0, u.last_index()); ++z)
    if (u(z) != T(0))
      throw ValidationError("conv_power_oracle: u must vanish at indices <= 0");

  CompositionSum<T> out;
  std::function<void(std::int64_t, std::int64_t, T)> rec = [&](std::int64_t parts, std::int64_t rest, T prod) {
    if (parts == 1) {
      if (rest >= 1) {
        out.value += prod * u(rest);
        ++out.compositions;
      }
      return;
    }
    for (std::int64_t z = 1; z <= rest - (parts - 1); ++z)
      rec(parts - 1, rest - z, prod * u(z));
  };
  rec(j, l, T(1));
  return out;
}

// B{p}(l) = sum_k binom(l,k)(-1)^k p(k), computed as iterated differences so
// integer inputs stay exact.
template <typename T>
BasicSeq<T> binom_transform(const BasicSeq<T>& p)
{
  if (p.offset != 0)
    throw ValidationError("binom_transform: sequence must start at index 0");
  std::vector<T> d = p.coeffs;
  BasicSeq<T> out;
  out.coeffs.resize(d.size());
  for (std::size_t l = 0; l < d.size(); ++l) {
    out.coeffs[l] = d[0];
    for (std::size_t k = 0; k + 1 < d.size() - l; ++k)
      d[k] = d[k] - d[k + 1];
  }
  return out;
}

// Right-continuous step function xi -> sum_{z <= floor(xi/scale)} seq(z).
template <typename T>
class BasicStepDF
{
public:
  BasicStepDF(BasicSeq<T> seq, double scale = 1.0) : seq_(std::move(seq)), scale_(scale)
  {
    if (!(scale_ > 0))
      throw ValidationError("StepDF: scale must be positive");
    cum_.resize(seq_.size());
    T acc{};
    for (std::size_t k = 0; k < seq_.size(); ++k)
      cum_[k] = acc += seq_.coeffs[k];
  }

  const BasicSeq<T>& seq() const { return seq_; }
  double scale() const { return scale_; }

  // Partial sum up to an integer index.
  T at_index(std::int64_t idx) const
  {
    if (seq_.empty() || idx < seq_.offset)
      return T(0);
    idx = std::min(idx, seq_.last_index());
    return cum_[std::size_t(idx - seq_.offset)];
  }

  T operator()(double xi) const { return at_index(lattice_floor(xi / scale_)); }

private:
  BasicSeq<T> seq_;
  double scale_;
  std::vector<T> cum_;
};

using StepDF = BasicStepDF<cplx>;

template <typename T>
T theta_eval(const BasicStepDF<T>& df, double xi)
{
  return df(xi);
}

// Elementwise |a - b| <= max(abs_tol, rel * max(|a|_inf, |b|_inf)) over the union of supports.
template <typename T>
bool approx_equal(const BasicSeq<T>& a, const BasicSeq<T>& b, double rel = 1e-10, double abs_tol = 0.0)
{
  double tol = std::max(abs_tol, rel * std::max(norm_inf(a), norm_inf(b)));
  std::int64_t lo = std::min(a.empty() ? b.offset : a.offset, b.empty() ? a.offset : b.offset);
  std::int64_t hi = std::max(a.last_index(), b.last_index());
  for (std::int64_t i = lo; i <= hi; ++i)
    if (double(std::abs(a(i) - b(i))) > tol)
      return false;
  return true;
}

} // namespace deconv
