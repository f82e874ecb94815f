#pragma once

#include "deconv/discrete_deconv.hpp"

#include <variant>

namespace deconv {

struct DiracAt
{
  double location;
};

struct NormalLaw
{
  double mean;
  double variance;
};

using Component = std::variant<DiracAt, NormalLaw>;

struct MixtureTerm
{
  double coeff;
  Component component;
};

// Finite signed combination of point masses and normal laws. Terms are kept
// sorted with coincident atoms (within 1e-12) and identical normals merged.
class SignedMixture
{
public:
  SignedMixture() = default;
  explicit SignedMixture(std::vector<MixtureTerm> terms);

  static SignedMixture dirac(double at, double coeff = 1.0);
  static SignedMixture normal(double mean, double variance, double coeff = 1.0);

  const std::vector<MixtureTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double total_mass() const;
  // sum |coeff|; the total variation when the mixture is atomic.
  double coeff_norm() const;
  bool is_atomic() const;
  bool is_nonnegative() const;
  double atom_mass(double x) const;
  double cdf(double x) const;
  // Mass of (-inf, a] restricted to the atoms.
  double atomic_mass_below(double a) const;

  SignedMixture scaled(double f) const;
  friend SignedMixture operator+(const SignedMixture& a, const SignedMixture& b);
  friend SignedMixture operator-(const SignedMixture& a, const SignedMixture& b);

private:
  std::vector<MixtureTerm> terms_;
};

SignedMixture convolve(const SignedMixture& a, const SignedMixture& b);
SignedMixture convolution_power(const SignedMixture& a, std::int64_t k);

struct NormalNoise
{
  double c;
  double sigma;
};

using NoiseModel = std::variant<LatticeNoise, NormalNoise>;

void validate(const NoiseModel& noise);
SignedMixture to_mixture(const NoiseModel& noise);

// delta_0 - mu.
SignedMixture pi_of(const SignedMixture& mu);

// w_k = sum_{l=k}^{m} binom(l,k) (-1)^k = (-1)^k binom(m+1, k+1), k = 0..m.
std::vector<double> neumann_weights(std::int64_t m);

constexpr std::int64_t max_neumann_order = 45;

// Pi{eta}(., m) = sum_{l<=m} (delta_0 - eta * mu_eps)^{*l}.
SignedMixture neumann_sum(const SignedMixture& eta, const NoiseModel& noise, std::int64_t m);

// a_{m,l} = nu0^l sum_{n=0}^{m-l} binom(n+l, l) (1 - nu0)^n, l = 0..m.
std::vector<double> contiguity_coeffs(double nu0, std::int64_t m);

// Law of the observations Y: a sample, a normal law, or an analytic d.f.
struct AnalyticLaw
{
  std::function<double(double)> cdf;
  std::function<double(double)> density;
};

using ObservedLaw = std::variant<EmpiricalSample, NormalLaw, AnalyticLaw>;

// (F_eta * F_Y * F_Pi)(xi) on a grid.
std::vector<double> deconv_fn_grid(const SignedMixture& eta, const NoiseModel& noise, const ObservedLaw& FY,
                                   const std::vector<double>& grid, std::int64_t m);
double deconv_fn(const SignedMixture& eta, const NoiseModel& noise, const ObservedLaw& FY, double xi, std::int64_t m);

// Same evaluation for a precomputed measure eta * Pi{eta}(., m).
std::vector<double> evaluate_against(const SignedMixture& measure, const ObservedLaw& FY,
                                     const std::vector<double>& grid);

// Density of eta * Pi{eta}(., m) applied to f_Y.
double deconv_density(const SignedMixture& eta, const NoiseModel& noise, const std::function<double(double)>& fY,
                      double xi, std::int64_t m);

// Smallest m with F{lambda delta_{-z0}}(xi, m) = F_X(xi) when X vanishes below xi0.
std::int64_t finite_rep_check(const LatticeNoise& noise, double xi, double xi0);

// delta_0 for normal noise, lambda delta_{-z0} for lattice noise.
SignedMixture default_eta(const NoiseModel& noise);

} // namespace deconv
