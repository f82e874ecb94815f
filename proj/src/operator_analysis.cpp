#include "deconv/operator_analysis.hpp"

namespace deconv {

const char* to_string(JordanCase c)
{
  switch (c) {
  case JordanCase::split:
    return "split";
  case JordanCase::nonpositive:
    return "nonpositive";
  case JordanCase::continuous_lower_bound:
    return "continuous_lower_bound";
  }
  return "unknown";
}

TVReport tv_of_pi(const SignedMixture& eta, const NoiseModel& noise)
{
  if (!eta.is_nonnegative())
    throw ValidationError("tv_of_pi: eta must be non-negative");
  validate(noise);
  const double mass = eta.total_mass();
  TVReport rep;
  if (const auto* lat = std::get_if<LatticeNoise>(&noise)) {
    for (const auto& t : eta.terms())
      if (const auto* d = std::get_if<DiracAt>(&t.component))
        rep.atom_overlap += t.coeff * lat->atom_at(-d->location);
  }
  // Only the atom at 0 can carry a positive sign in delta_0 - nu.
  if (rep.atom_overlap < 1.0) {
    rep.tv = 1.0 + mass - 2.0 * rep.atom_overlap;
    rep.jordan_case = JordanCase::split;
  } else {
    rep.tv = mass - 1.0;
    rep.jordan_case = JordanCase::nonpositive;
  }
  const bool continuous = std::holds_alternative<NormalNoise>(noise) || !eta.is_atomic();
  if (continuous && rep.atom_overlap == 0.0)
    rep.jordan_case = JordanCase::continuous_lower_bound;
  rep.invertible_sufficient = mass < 2.0 * std::min(rep.atom_overlap, 1.0);
  return rep;
}

bool invertibility_check(const SignedMixture& eta, const NoiseModel& noise)
{
  return tv_of_pi(eta, noise).invertible_sufficient;
}

double atomic_total_variation(const SignedMixture& mu)
{
  if (!mu.is_atomic())
    throw ValidationError("atomic_total_variation: mixture has a continuous component");
  return mu.coeff_norm();
}

SignedMixture pi_power(const SignedMixture& eta, const NoiseModel& noise, std::int64_t l)
{
  return convolution_power(pi_of(convolve(eta, to_mixture(noise))), l);
}

} // namespace deconv
