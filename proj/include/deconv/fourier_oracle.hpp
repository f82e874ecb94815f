#pragma once

#include "deconv/neumann_deconv.hpp"

namespace deconv {

using CharFn = std::function<cplx(double)>;

CharFn cf_of(const SignedMixture& mu);
CharFn cf_of(const LatticeNoise& noise);
CharFn cf_of(const NormalNoise& noise);
CharFn cf_of(const NormalLaw& law);
CharFn cf_of(const NoiseModel& noise);
// Empirical characteristic function.
CharFn cf_of(const EmpiricalSample& sample);

// phi_eta phi_Y sum_{l<=m} (1 - phi_eta phi_eps)^l at t.
cplx cf_deconv_closed(const CharFn& phi_eta, const CharFn& phi_eps, const CharFn& phi_Y, double t, std::int64_t m);

// |1 - phi_eta(t) phi_eps(t)| < 1 pointwise. Diagnostic only.
std::vector<bool> convergence_region(const CharFn& phi_eta, const CharFn& phi_eps, const std::vector<double>& tgrid);

} // namespace deconv
