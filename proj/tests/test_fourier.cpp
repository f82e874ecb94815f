#include "deconv/fourier_oracle.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace deconv;

namespace {

LatticeNoise poisson_lattice(double lambda)
{
  std::vector<double> p(80);
  double v = std::exp(-lambda), s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = v;
    s += v;
    v *= lambda / double(k + 1);
  }
  return LatticeNoise(0.0, 1.0, real_seq(p, 0, 1.0 - s));
}

} // namespace

TEST_CASE("cf_of: probability inputs give 1 at 0 and are Hermitian")
{
  std::vector<CharFn> fs{cf_of(poisson_lattice(2.0)), cf_of(NormalNoise{0.5, 2.0}), cf_of(NormalLaw{-1.0, 0.3}),
                         cf_of(EmpiricalSample({0.1, 2.0, -3.0})),
                         cf_of(SignedMixture({{0.3, DiracAt{1.0}}, {0.7, NormalLaw{0.0, 1.0}}}))};
  for (const auto& f : fs) {
    CHECK(std::abs(f(0.0) - 1.0) < 1e-12);
    for (double t : {0.3, 1.7, -4.0}) {
      CHECK(std::abs(f(-t) - std::conj(f(t))) < 1e-12);
      CHECK(std::abs(f(t)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("cf_of: Poisson closed form and the divergence point")
{
  auto f = cf_of(poisson_lattice(2.0));
  for (double t : {0.5, 2.0, 5.0})
    CHECK(std::abs(f(t) - std::exp(2.0 * (std::exp(cplx(0, t)) - 1.0))) < 1e-12);
  CHECK(std::abs(1.0 - f(5.0)) == doctest::Approx(1.10).epsilon(0.01 / 1.10));
}

TEST_CASE("cf_of: linearity and product rule")
{
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> U(-2.0, 2.0), V(0.0, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    SignedMixture a({{U(rng), DiracAt{U(rng)}}, {U(rng), NormalLaw{U(rng), V(rng)}}});
    SignedMixture b({{U(rng), DiracAt{U(rng)}}, {U(rng), DiracAt{U(rng)}}, {U(rng), NormalLaw{U(rng), V(rng)}}});
    auto fa = cf_of(a), fb = cf_of(b), fab = cf_of(convolve(a, b)), fsum = cf_of(a.scaled(2.0) + b);
    for (int i = 0; i < 20; ++i) {
      double t = 2.5 * U(rng);
      CHECK(std::abs(fab(t) - fa(t) * fb(t)) < 1e-12 * std::max(1.0, std::abs(fa(t) * fb(t))) + 1e-12);
      CHECK(std::abs(fsum(t) - (2.0 * fa(t) + fb(t))) < 1e-12);
      CHECK(std::abs(fa(t)) <= a.coeff_norm() + 1e-12);
    }
  }
}

TEST_CASE("cf_deconv_closed: closed form against direct summation")
{
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  auto eta = cf_of(SignedMixture::dirac(0.0));
  auto eps = cf_of(poisson_lattice(2.0));
  auto y = cf_of(NormalLaw{2.0, 1.0});
  for (int i = 0; i < 20; ++i) {
    double t = U(rng);
    cplx ratio = 1.0 - eta(t) * eps(t);
    if (std::abs(ratio) > 2.0)
      continue;
    for (std::int64_t m = 0; m <= 30; m += 3) {
      cplx s = 0.0, p = 1.0;
      for (std::int64_t l = 0; l <= m; ++l) {
        s += p;
        p *= ratio;
      }
      cplx direct = eta(t) * y(t) * s;
      CHECK(std::abs(cf_deconv_closed(eta, eps, y, t, m) - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
  }
  CHECK(std::abs(cf_deconv_closed(eta, eps, y, 0.0, 7) - 1.0) < 1e-12);
  auto zero = [](double) { return cplx(0.0); };
  CHECK(std::abs(cf_deconv_closed(eta, zero, y, 1.0, 4) - 5.0 * y(1.0)) < 1e-12);
}

TEST_CASE("cf_deconv_closed equals the transform of the Neumann mixture")
{
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  NoiseModel normal = NormalNoise{0.0, 0.5};
  NoiseModel pois = poisson_lattice(1.0);
  NormalLaw Y{0.0, 1.25};
  for (const auto* noise : {&normal, &pois}) {
    auto eta = default_eta(*noise);
    for (std::int64_t m : {0, 5, 12, 20}) {
      auto measure = convolve(eta, neumann_sum(eta, *noise, m));
      auto fm = cf_of(measure);
      auto fy = cf_of(Y);
      for (int i = 0; i < 20; ++i) {
        double t = U(rng);
        cplx lhs = fm(t) * fy(t);
        cplx rhs = cf_deconv_closed(cf_of(eta), cf_of(*noise), fy, t, m);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("convergence_region")
{
  auto d0 = cf_of(SignedMixture::dirac(0.0));
  auto normal = convergence_region(d0, cf_of(NormalNoise{0.0, 1.0}), {0.0, 0.1, 1.0, 5.0, -3.0});
  for (bool b : normal)
    CHECK(b);
  auto p = convergence_region(d0, cf_of(poisson_lattice(2.0)), {5.0});
  CHECK_FALSE(p[0]);
  for (bool b : convergence_region(d0, d0, {-2.0, 0.0, 7.0}))
    CHECK(b);
}

TEST_CASE("empirical c.f. approaches the model c.f.")
{
  const int n = 10000;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.5, 1.2);
    std::vector<double> y(n);
    for (auto& v : y)
      v = N(rng);
    auto emp = cf_of(EmpiricalSample(y));
    auto model = cf_of(NormalLaw{0.5, 1.44});
    double sup = 0.0;
    for (double t = -3.0; t <= 3.0; t += 0.1)
      sup = std::max(sup, std::abs(emp(t) - model(t)));
    good += sup < 3.0 / std::sqrt(double(n));
  }
  CHECK(good >= 3);
}
