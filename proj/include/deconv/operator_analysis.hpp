#pragma once

#include "deconv/neumann_deconv.hpp"

namespace deconv {

enum class JordanCase { split, nonpositive, continuous_lower_bound };

const char* to_string(JordanCase c);

struct TVReport
{
  double tv = 0.0;
  double atom_overlap = 0.0; // mass of eta * mu_eps at 0
  bool invertible_sufficient = false;
  JordanCase jordan_case = JordanCase::split;
};

// |delta_0 - eta * mu_eps|(R) for non-negative eta.
TVReport tv_of_pi(const SignedMixture& eta, const NoiseModel& noise);

// eta(R) < 2 min{(F_eta * F_eps){0}, 1}.
bool invertibility_check(const SignedMixture& eta, const NoiseModel& noise);

// sum |coeff| of a purely atomic mixture.
double atomic_total_variation(const SignedMixture& mu);

// (delta_0 - eta * mu_eps)^{*l}.
SignedMixture pi_power(const SignedMixture& eta, const NoiseModel& noise, std::int64_t l);

} // namespace deconv
