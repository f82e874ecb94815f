#pragma once

#include "deconv/neumann_deconv.hpp"

#include <json.hpp>

#include <optional>
#include <random>
#include <string>

namespace deconv::sim {

enum class Family {
  poisson,
  bernoulli,
  geometric,
  uniform,
  negative_binomial,
  normal,
  laplace,
  exponential,
  lattice,
  dirac
};

// A parametric law used for targets and noises. Built from JSON such as
// {"family": "poisson", "lambda": 1.5}.
class Distribution
{
public:
  static Distribution from_json(const nlohmann::json& j);
  nlohmann::json to_json() const { return spec_; }

  Family family() const { return family_; }
  const std::string& name() const { return name_; }

  bool is_lattice() const { return lattice_.has_value(); }
  // Lattice representation; infinite families are cut where the tail mass drops below 1e-13.
  const LatticeNoise& lattice() const;
  std::optional<double> left_extremity() const;
  bool is_normal() const { return family_ == Family::normal; }
  NormalLaw normal_law() const;

  double sample(std::mt19937_64& rng) const;
  double cdf(double x) const;
  std::optional<double> density(double x) const;
  cplx cf(double t) const;

private:
  Family family_{};
  std::string name_;
  nlohmann::json spec_;
  double a_ = 0.0, b_ = 0.0;
  std::optional<LatticeNoise> lattice_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t replication_seed(std::uint64_t base, std::uint64_t r);

std::vector<double> draw(const Distribution& d, std::size_t n, std::uint64_t seed);

// n draws of X + eps with X and eps independent.
EmpiricalSample sample_observations(const Distribution& target, const Distribution& noise, std::size_t n,
                                    std::uint64_t seed);

// d.f. (and density when it exists) of X + eps, when available in closed form or by quadrature.
std::optional<AnalyticLaw> observed_law(const Distribution& target, const Distribution& noise);

} // namespace deconv::sim
