#include "deconv/inverse_seq.hpp"

#include <cmath>

namespace deconv {

namespace {

cplx checked_leading(const RightLateralSeq& u)
{
  if (u.offset != 0)
    throw ValidationError("inverse sequence: u must start at index 0");
  if (u.empty() || u(0) == cplx(0))
    throw SingularLeadingCoefficient("inverse sequence: u(0) = 0");
  return u(0);
}

} // namespace

RightLateralSeq u_plus(const RightLateralSeq& u)
{
  cplx u0 = checked_leading(u);
  RightLateralSeq out = u;
  out.coeffs[0] = 0.0;
  for (std::size_t z = 1; z < out.size(); ++z)
    out.coeffs[z] = -u.coeffs[z] / u0;
  out.tail_mass = u.tail_mass / std::abs(u0);
  return out;
}

RightLateralSeq gamma(const RightLateralSeq& u, std::int64_t zmax)
{
  if (zmax < 0)
    throw ValidationError("gamma: zmax must be non-negative");
  cplx u0 = checked_leading(u);
  std::vector<cplx> g(std::size_t(zmax + 1));
  g[0] = 1.0;
  const auto K = u.last_index();
  for (std::int64_t z = 1; z <= zmax; ++z) {
    cplx s = 0.0;
    for (std::int64_t k = std::max<std::int64_t>(0, z - K); k < z; ++k)
      s += u.coeffs[std::size_t(z - k)] * g[std::size_t(k)];
    g[std::size_t(z)] = -s / u0;
  }
  return RightLateralSeq(std::move(g), 0, u.tail_mass / std::abs(u0));
}

GammaGenerator::GammaGenerator(RightLateralSeq u) : u_(std::move(u)), u0_(checked_leading(u_)), g_{1.0} {}

cplx GammaGenerator::at(std::int64_t z)
{
  if (z < 0)
    return 0.0;
  const auto K = u_.last_index();
  while (std::int64_t(g_.size()) <= z) {
    const auto n = std::int64_t(g_.size());
    cplx s = 0.0;
    for (std::int64_t k = std::max<std::int64_t>(0, n - K); k < n; ++k)
      s += u_.coeffs[std::size_t(n - k)] * g_[std::size_t(k)];
    g_.push_back(-s / u0_);
  }
  return g_[std::size_t(z)];
}

RightLateralSeq family_sequence(const ClosedFormFamily& f, std::int64_t zmax)
{
  if (zmax < 0)
    throw ValidationError("family_sequence: zmax must be non-negative");
  std::vector<double> v(std::size_t(zmax + 1), 0.0);
  double tail = 0.0;
  std::visit(
      [&](const auto& fam) {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, family::Bernoulli>) {
          v[0] = fam.u0;
          if (zmax >= 1)
            v[1] = fam.u1;
          else
            tail = std::abs(fam.u1);
        } else if constexpr (std::is_same_v<F, family::Geometric>) {
          if (!(fam.u > 0 && fam.u <= 1))
            throw ValidationError("geometric: u must lie in (0,1]");
          for (std::int64_t z = 0; z <= zmax; ++z)
            v[std::size_t(z)] = fam.u * std::pow(1 - fam.u, double(z));
          tail = std::pow(1 - fam.u, double(zmax + 1));
        } else if constexpr (std::is_same_v<F, family::Poisson>) {
          if (!(fam.lambda > 0))
            throw ValidationError("poisson: lambda must be positive");
          double term = std::exp(-fam.lambda), acc = 0.0;
          for (std::int64_t z = 0; z <= zmax; ++z) {
            v[std::size_t(z)] = term;
            acc += term;
            term *= fam.lambda / double(z + 1);
          }
          tail = std::max(0.0, 1.0 - acc);
        } else {
          if (fam.K < 1)
            throw ValidationError("uniform: K must be at least 1");
          for (std::int64_t z = 0; z <= std::min<std::int64_t>(fam.K, zmax); ++z)
            v[std::size_t(z)] = fam.u;
          if (zmax < fam.K)
            tail = std::abs(fam.u) * double(fam.K - zmax);
        }
      },
      f);
  return real_seq(v, 0, tail);
}

RightLateralSeq closed_form_gamma(const ClosedFormFamily& f, std::int64_t zmax)
{
  if (zmax < 0)
    throw ValidationError("closed_form_gamma: zmax must be non-negative");
  std::vector<double> g(std::size_t(zmax + 1), 0.0);
  std::visit(
      [&](const auto& fam) {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, family::Bernoulli>) {
          if (fam.u0 == 0)
            throw SingularLeadingCoefficient("bernoulli: u(0) = 0");
          for (std::int64_t z = 0; z <= zmax; ++z)
            g[std::size_t(z)] = std::pow(-fam.u1 / fam.u0, double(z));
        } else if constexpr (std::is_same_v<F, family::Geometric>) {
          g[0] = 1.0;
          if (zmax >= 1)
            g[1] = -(1 - fam.u);
        } else if constexpr (std::is_same_v<F, family::Poisson>) {
          double term = 1.0;
          for (std::int64_t z = 0; z <= zmax; ++z) {
            g[std::size_t(z)] = term;
            term *= -fam.lambda / double(z + 1);
          }
        } else {
          // 1/(1 + x + ... + x^K) = (1 - x) / (1 - x^{K+1}): period K+1.
          for (std::int64_t z = 0; z <= zmax; ++z) {
            auto r = z % (fam.K + 1);
            g[std::size_t(z)] = r == 0 ? 1.0 : r == 1 ? -1.0 : 0.0;
          }
        }
      },
      f);
  return real_seq(g);
}

DoubleSeq DoubleSeq::single_index(const RightLateralSeq& u, std::int64_t lmax)
{
  return DoubleSeq{[u](std::int64_t, std::int64_t z) { return u(z); }, lmax};
}

TriangularTable p_plus(const DoubleSeq& p, std::int64_t lmax)
{
  if (lmax > p.lmax)
    throw ValidationError("double sequence defined only up to l = " + std::to_string(p.lmax));
  TriangularTable t(lmax);
  for (std::int64_t l = 0; l <= lmax; ++l) {
    cplx d = p(l, 0);
    if (d == cplx(0))
      throw SingularLeadingCoefficient("double sequence: p(" + std::to_string(l) + ", 0) = 0");
    for (std::int64_t z = 1; z <= l; ++z)
      t.at(l, z) = -p(l, z) / d;
  }
  return t;
}

TriangularTable compose(const TriangularTable& a, const TriangularTable& b)
{
  const auto lmax = std::min(a.lmax(), b.lmax());
  TriangularTable out(lmax);
  for (std::int64_t l = 0; l <= lmax; ++l)
    for (std::int64_t z = 0; z <= l; ++z) {
      cplx s = 0.0;
      for (std::int64_t z1 = 0; z1 <= z; ++z1)
        s += a(l, z1) * b(l - z1, z - z1);
      out.at(l, z) = s;
    }
  return out;
}

namespace {

TriangularTable identity_table(std::int64_t lmax)
{
  TriangularTable t(lmax);
  for (std::int64_t l = 0; l <= lmax; ++l)
    t.at(l, 0) = 1.0;
  return t;
}

// One step P_j = p_plus . P_{j-1}, skipping z < j where both vanish.
TriangularTable next_power(const TriangularTable& pp, const TriangularTable& prev, std::int64_t j)
{
  const auto lmax = pp.lmax();
  TriangularTable out(lmax);
  for (std::int64_t l = j; l <= lmax; ++l)
    for (std::int64_t z = j; z <= l; ++z) {
      cplx s = 0.0;
      for (std::int64_t z1 = 1; z1 <= z - j + 1; ++z1)
        s += pp(l, z1) * prev(l - z1, z - z1);
      out.at(l, z) = s;
    }
  return out;
}

} // namespace

TriangularTable double_seq_power(const DoubleSeq& p, std::int64_t j, std::int64_t lmax)
{
  if (j < 0)
    throw ValidationError("double_seq_power: negative exponent");
  TriangularTable pp = p_plus(p, lmax);
  TriangularTable acc = identity_table(lmax);
  for (std::int64_t i = 1; i <= j; ++i)
    acc = next_power(pp, acc, i);
  return acc;
}

TriangularTable beta(const DoubleSeq& p, std::int64_t lmax)
{
  if (lmax < 0)
    throw ValidationError("beta: lmax must be non-negative");
  TriangularTable pp = p_plus(p, lmax);
  TriangularTable power = identity_table(lmax);
  TriangularTable out = power;
  for (std::int64_t j = 1; j <= lmax; ++j) {
    power = next_power(pp, power, j);
    bool any = false;
    for (std::int64_t l = j; l <= lmax; ++l)
      for (std::int64_t z = j; z <= l; ++z)
        if (power(l, z) != cplx(0)) {
          out.at(l, z) += power(l, z);
          any = true;
        }
    if (!any)
      break;
  }
  return out;
}

cplx alpha_direct(const DoubleSeq& p, std::int64_t l, std::int64_t z, double x)
{
  if (x < 0)
    return 0.0;
  const auto n = lattice_floor(x);
  TriangularTable pp = p_plus(p, l);
  TriangularTable power = identity_table(l);
  cplx s = power(l, z);
  for (std::int64_t j = 1; j <= std::min(n, z); ++j) {
    power = next_power(pp, power, j);
    s += power(l, z);
  }
  return s;
}

cplx alpha_binomial_check(const DoubleSeq& p, std::int64_t l, std::int64_t z, double x)
{
  if (x < 0)
    return 0.0;
  const auto n = lattice_floor(x);
  TriangularTable pd(l);
  for (std::int64_t i = 0; i <= l; ++i) {
    cplx d = p(i, 0);
    if (d == cplx(0))
      throw SingularLeadingCoefficient("double sequence: p(" + std::to_string(i) + ", 0) = 0");
    for (std::int64_t k = 0; k <= i; ++k)
      pd.at(i, k) = p(i, k) / d;
  }
  TriangularTable power = identity_table(l);
  cplx s = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) {
    if (k > 0)
      power = compose(pd, power);
    s += (k % 2 == 0 ? 1.0 : -1.0) * binomial(n + 1, k + 1) * power(l, z);
  }
  return s;
}

} // namespace deconv
