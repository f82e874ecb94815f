#include "deconv/fourier_oracle.hpp"

#include <cmath>

namespace deconv {

namespace {

const cplx I(0.0, 1.0);

} // namespace

CharFn cf_of(const SignedMixture& mu)
{
  return [terms = mu.terms()](double t) {
    cplx s = 0.0;
    for (const auto& term : terms) {
      if (const auto* d = std::get_if<DiracAt>(&term.component))
        s += term.coeff * std::exp(I * t * d->location);
      else {
        const auto& n = std::get<NormalLaw>(term.component);
        s += term.coeff * std::exp(I * t * n.mean - 0.5 * n.variance * t * t);
      }
    }
    return s;
  };
}

CharFn cf_of(const LatticeNoise& noise)
{
  return [noise](double t) {
    cplx s = 0.0;
    for (std::int64_t z = 0; z <= noise.pmf().last_index(); ++z)
      s += noise.weight(z) * std::exp(I * t * noise.location(z));
    return s;
  };
}

CharFn cf_of(const NormalNoise& noise) { return cf_of(NormalLaw{noise.c, noise.sigma * noise.sigma}); }

CharFn cf_of(const NormalLaw& law)
{
  return [law](double t) { return std::exp(I * t * law.mean - 0.5 * law.variance * t * t); };
}

CharFn cf_of(const NoiseModel& noise)
{
  return std::visit([](const auto& n) { return cf_of(n); }, noise);
}

CharFn cf_of(const EmpiricalSample& sample)
{
  return [obs = sample.obs()](double t) {
    cplx s = 0.0;
    for (double y : obs)
      s += std::exp(I * t * y);
    return s / double(obs.size());
  };
}

cplx cf_deconv_closed(const CharFn& phi_eta, const CharFn& phi_eps, const CharFn& phi_Y, double t, std::int64_t m)
{
  if (m < 0)
    throw ValidationError("cf_deconv_closed: m must be non-negative");
  const cplx pe = phi_eta(t), pn = phi_eps(t), py = phi_Y(t);
  const cplx prod = pe * pn;
  const cplx ratio = 1.0 - prod;
  if (std::abs(prod) > 1e-12)
    return pe * py / prod * (1.0 - std::pow(ratio, double(m + 1)));
  cplx s = 0.0, p = 1.0;
  for (std::int64_t l = 0; l <= m; ++l) {
    s += p;
    p *= ratio;
  }
  return pe * py * s;
}

std::vector<bool> convergence_region(const CharFn& phi_eta, const CharFn& phi_eps, const std::vector<double>& tgrid)
{
  std::vector<bool> out;
  out.reserve(tgrid.size());
  for (double t : tgrid)
    out.push_back(std::abs(1.0 - phi_eta(t) * phi_eps(t)) < 1.0);
  return out;
}

} // namespace deconv
