#include "deconv/neumann_deconv.hpp"

#include <algorithm>
#include <cmath>

namespace deconv {

namespace {

constexpr double merge_tol = 1e-12;

bool is_dirac(const MixtureTerm& t) { return std::holds_alternative<DiracAt>(t.component); }

bool term_less(const MixtureTerm& a, const MixtureTerm& b)
{
  if (is_dirac(a) != is_dirac(b))
    return is_dirac(a);
  if (is_dirac(a))
    return std::get<DiracAt>(a.component).location < std::get<DiracAt>(b.component).location;
  const auto& na = std::get<NormalLaw>(a.component);
  const auto& nb = std::get<NormalLaw>(b.component);
  if (na.mean != nb.mean)
    return na.mean < nb.mean;
  return na.variance < nb.variance;
}

bool same_component(const MixtureTerm& a, const MixtureTerm& b)
{
  if (is_dirac(a) != is_dirac(b))
    return false;
  if (is_dirac(a))
    return std::abs(std::get<DiracAt>(a.component).location - std::get<DiracAt>(b.component).location) <= merge_tol;
  const auto& na = std::get<NormalLaw>(a.component);
  const auto& nb = std::get<NormalLaw>(b.component);
  return std::abs(na.mean - nb.mean) <= merge_tol && std::abs(na.variance - nb.variance) <= merge_tol;
}

Component convolve_components(const Component& a, const Component& b)
{
  double loc_a = 0, var_a = 0, loc_b = 0, var_b = 0;
  if (const auto* d = std::get_if<DiracAt>(&a))
    loc_a = d->location;
  else {
    loc_a = std::get<NormalLaw>(a).mean;
    var_a = std::get<NormalLaw>(a).variance;
  }
  if (const auto* d = std::get_if<DiracAt>(&b))
    loc_b = d->location;
  else {
    loc_b = std::get<NormalLaw>(b).mean;
    var_b = std::get<NormalLaw>(b).variance;
  }
  if (var_a + var_b == 0.0)
    return DiracAt{loc_a + loc_b};
  return NormalLaw{loc_a + loc_b, var_a + var_b};
}

void check_order(std::int64_t m)
{
  if (m < 0 || m > max_neumann_order)
    throw ValidationError("Neumann order m must lie in [0, " + std::to_string(max_neumann_order) + "], got " +
                          std::to_string(m));
}

} // namespace

SignedMixture::SignedMixture(std::vector<MixtureTerm> terms)
{
  for (auto& t : terms) {
    if (!std::isfinite(t.coeff))
      throw ValidationError("signed mixture: non-finite coefficient");
    if (auto* n = std::get_if<NormalLaw>(&t.component)) {
      if (!(n->variance >= 0) || !std::isfinite(n->variance) || !std::isfinite(n->mean))
        throw ValidationError("signed mixture: invalid normal component");
      if (n->variance == 0.0)
        t.component = DiracAt{n->mean};
    } else if (!std::isfinite(std::get<DiracAt>(t.component).location)) {
      throw ValidationError("signed mixture: non-finite atom location");
    }
  }
  std::sort(terms.begin(), terms.end(), term_less);
  for (auto& t : terms) {
    if (!terms_.empty() && same_component(terms_.back(), t))
      terms_.back().coeff += t.coeff;
    else
      terms_.push_back(t);
  }
  std::erase_if(terms_, [](const MixtureTerm& t) { return t.coeff == 0.0; });
}

SignedMixture SignedMixture::dirac(double at, double coeff) { return SignedMixture({{coeff, DiracAt{at}}}); }

SignedMixture SignedMixture::normal(double mean, double variance, double coeff)
{
  return SignedMixture({{coeff, NormalLaw{mean, variance}}});
}

double SignedMixture::total_mass() const
{
  double s = 0.0;
  for (const auto& t : terms_)
    s += t.coeff;
  return s;
}

double SignedMixture::coeff_norm() const
{
  double s = 0.0;
  for (const auto& t : terms_)
    s += std::abs(t.coeff);
  return s;
}

bool SignedMixture::is_atomic() const { return std::all_of(terms_.begin(), terms_.end(), is_dirac); }

bool SignedMixture::is_nonnegative() const
{
  return std::all_of(terms_.begin(), terms_.end(), [](const MixtureTerm& t) { return t.coeff >= 0; });
}

double SignedMixture::atom_mass(double x) const
{
  double s = 0.0;
  for (const auto& t : terms_)
    if (const auto* d = std::get_if<DiracAt>(&t.component); d && std::abs(d->location - x) <= merge_tol)
      s += t.coeff;
  return s;
}

double SignedMixture::cdf(double x) const
{
  double s = 0.0;
  for (const auto& t : terms_) {
    if (const auto* d = std::get_if<DiracAt>(&t.component))
      s += d->location <= x + merge_tol ? t.coeff : 0.0;
    else {
      const auto& n = std::get<NormalLaw>(t.component);
      s += t.coeff * normal_cdf((x - n.mean) / std::sqrt(n.variance));
    }
  }
  return s;
}

double SignedMixture::atomic_mass_below(double a) const
{
  double s = 0.0;
  for (const auto& t : terms_)
    if (const auto* d = std::get_if<DiracAt>(&t.component); d && d->location <= a + merge_tol)
      s += t.coeff;
  return s;
}

SignedMixture SignedMixture::scaled(double f) const
{
  std::vector<MixtureTerm> out = terms_;
  for (auto& t : out)
    t.coeff *= f;
  return SignedMixture(std::move(out));
}

SignedMixture operator+(const SignedMixture& a, const SignedMixture& b)
{
  std::vector<MixtureTerm> out = a.terms_;
  out.insert(out.end(), b.terms_.begin(), b.terms_.end());
  return SignedMixture(std::move(out));
}

SignedMixture operator-(const SignedMixture& a, const SignedMixture& b) { return a + b.scaled(-1.0); }

SignedMixture convolve(const SignedMixture& a, const SignedMixture& b)
{
  std::vector<MixtureTerm> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms())
      out.push_back({ta.coeff * tb.coeff, convolve_components(ta.component, tb.component)});
  return SignedMixture(std::move(out));
}

SignedMixture convolution_power(const SignedMixture& a, std::int64_t k)
{
  if (k < 0)
    throw ValidationError("convolution_power: negative exponent");
  SignedMixture acc = SignedMixture::dirac(0.0);
  for (std::int64_t i = 0; i < k; ++i)
    acc = convolve(acc, a);
  return acc;
}

void validate(const NoiseModel& noise)
{
  if (const auto* n = std::get_if<NormalNoise>(&noise))
    if (!(n->sigma > 0) || !std::isfinite(n->sigma) || !std::isfinite(n->c))
      throw ValidationError("normal noise: sigma must be positive and finite");
}

SignedMixture to_mixture(const NoiseModel& noise)
{
  validate(noise);
  if (const auto* n = std::get_if<NormalNoise>(&noise))
    return SignedMixture::normal(n->c, n->sigma * n->sigma);
  const auto& lat = std::get<LatticeNoise>(noise);
  std::vector<MixtureTerm> terms;
  for (std::int64_t z = 0; z <= lat.pmf().last_index(); ++z)
    if (lat.weight(z) != 0.0)
      terms.push_back({lat.weight(z), DiracAt{lat.location(z)}});
  return SignedMixture(std::move(terms));
}

SignedMixture pi_of(const SignedMixture& mu) { return SignedMixture::dirac(0.0) - mu; }

std::vector<double> neumann_weights(std::int64_t m)
{
  check_order(m);
  std::vector<double> w(std::size_t(m + 1));
  for (std::int64_t k = 0; k <= m; ++k)
    w[std::size_t(k)] = (k % 2 == 0 ? 1.0 : -1.0) * binomial(m + 1, k + 1);
  return w;
}

namespace {

// Atoms of nu as integer multiples of t, or nothing if some atom is off that lattice.
std::optional<RightLateralSeq> on_lattice(const SignedMixture& nu, double t)
{
  if (!nu.is_atomic() || nu.empty())
    return std::nullopt;
  std::vector<std::pair<std::int64_t, double>> atoms;
  for (const auto& term : nu.terms()) {
    double k = std::get<DiracAt>(term.component).location / t;
    double r = std::round(k);
    if (std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(k)))
      return std::nullopt;
    atoms.emplace_back(std::int64_t(r), term.coeff);
  }
  std::int64_t lo = 0, hi = 0;
  for (const auto& [k, c] : atoms) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  RightLateralSeq s(std::vector<cplx>(std::size_t(hi - lo + 1), 0.0), lo);
  for (const auto& [k, c] : atoms)
    s.coeffs[std::size_t(k - lo)] += c;
  return s;
}

} // namespace

SignedMixture neumann_sum(const SignedMixture& eta, const NoiseModel& noise, std::int64_t m)
{
  check_order(m);
  SignedMixture nu = convolve(eta, to_mixture(noise));

  if (const auto* lat = std::get_if<LatticeNoise>(&noise)) {
    if (auto seq = on_lattice(nu, lat->t())) {
      RightLateralSeq pi = *seq;
      for (auto& c : pi.coeffs)
        c = -c;
      pi.coeffs[std::size_t(-pi.offset)] += 1.0;
      RightLateralSeq acc = RightLateralSeq::dirac(0);
      for (std::int64_t i = 0; i < m; ++i) {
        acc = conv(pi, acc);
        acc.coeffs[std::size_t(-acc.offset)] += 1.0;
      }
      std::vector<MixtureTerm> terms;
      for (std::int64_t k = acc.offset; k <= acc.last_index(); ++k)
        terms.push_back({acc(k).real(), DiracAt{lat->t() * double(k)}});
      return SignedMixture(std::move(terms));
    }
  }

  auto w = neumann_weights(m);
  SignedMixture power = SignedMixture::dirac(0.0);
  std::vector<MixtureTerm> terms;
  for (std::int64_t k = 0; k <= m; ++k) {
    for (const auto& t : power.terms())
      terms.push_back({w[std::size_t(k)] * t.coeff, t.component});
    if (k < m)
      power = convolve(power, nu);
  }
  return SignedMixture(std::move(terms));
}

std::vector<double> contiguity_coeffs(double nu0, std::int64_t m)
{
  if (!(nu0 > 0 && nu0 <= 1))
    throw ValidationError("contiguity_coeffs: nu0 must lie in (0, 1]");
  if (m < 0)
    throw ValidationError("contiguity_coeffs: m must be non-negative");
  std::vector<double> a(std::size_t(m + 1));
  for (std::int64_t l = 0; l <= m; ++l) {
    double term = 1.0, s = 0.0;
    for (std::int64_t n = 0; n <= m - l; ++n) {
      s += term;
      term *= double(n + l + 1) / double(n + 1) * (1 - nu0);
    }
    a[std::size_t(l)] = std::pow(nu0, double(l)) * s;
  }
  return a;
}

namespace {

struct Shape
{
  double loc;
  double var;
};

Shape shape_of(const Component& c)
{
  if (const auto* d = std::get_if<DiracAt>(&c))
    return {d->location, 0.0};
  const auto& n = std::get<NormalLaw>(c);
  return {n.mean, n.variance};
}

} // namespace

std::vector<double> evaluate_against(const SignedMixture& measure, const ObservedLaw& FY,
                                     const std::vector<double>& grid)
{
  std::vector<long double> acc(grid.size(), 0.0L);

  if (const auto* law = std::get_if<NormalLaw>(&FY)) {
    if (!(law->variance >= 0))
      throw ValidationError("observed normal law: negative variance");
    std::vector<kernels::NormalComponent> comps;
    for (const auto& t : measure.terms()) {
      auto s = shape_of(t.component);
      comps.push_back({t.coeff, (long double)s.loc + law->mean, (long double)s.var + law->variance});
    }
    acc = kernels::mixture_cdf_omp(comps, grid);
  } else if (const auto* sample = std::get_if<EmpiricalSample>(&FY)) {
    std::vector<kernels::NormalComponent> comps;
    comps.reserve(measure.terms().size() * sample->n());
    const long double inv_n = 1.0L / (long double)sample->n();
    for (const auto& t : measure.terms()) {
      auto s = shape_of(t.component);
      for (double y : sample->obs())
        comps.push_back({t.coeff * inv_n, (long double)s.loc + y, (long double)s.var});
    }
    acc = kernels::mixture_cdf_omp(comps, grid);
  } else {
    const auto& an = std::get<AnalyticLaw>(FY);
    if (!an.cdf)
      throw ValidationError("observed law: missing d.f.");
    const auto& gh = gauss_hermite_normal();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      long double s = 0.0L;
      for (const auto& t : measure.terms()) {
        auto sh = shape_of(t.component);
        if (sh.var == 0.0) {
          s += (long double)t.coeff * an.cdf(grid[g] - sh.loc);
        } else {
          long double q = 0.0L;
          const double sd = std::sqrt(sh.var);
          for (std::size_t i = 0; i < gh.nodes.size(); ++i)
            q += (long double)gh.weights[i] * an.cdf(grid[g] - sh.loc - sd * gh.nodes[i]);
          s += (long double)t.coeff * q;
        }
      }
      acc[g] = s;
    }
  }
  return std::vector<double>(acc.begin(), acc.end());
}

std::vector<double> deconv_fn_grid(const SignedMixture& eta, const NoiseModel& noise, const ObservedLaw& FY,
                                   const std::vector<double>& grid, std::int64_t m)
{
  return evaluate_against(convolve(eta, neumann_sum(eta, noise, m)), FY, grid);
}

double deconv_fn(const SignedMixture& eta, const NoiseModel& noise, const ObservedLaw& FY, double xi, std::int64_t m)
{
  return deconv_fn_grid(eta, noise, FY, {xi}, m)[0];
}

double deconv_density(const SignedMixture& eta, const NoiseModel& noise, const std::function<double(double)>& fY,
                      double xi, std::int64_t m)
{
  if (!fY)
    throw ValidationError("deconv_density: an analytic density of Y is required");
  SignedMixture measure = convolve(eta, neumann_sum(eta, noise, m));
  const auto& gh = gauss_hermite_normal();
  long double s = 0.0L;
  for (const auto& t : measure.terms()) {
    auto sh = shape_of(t.component);
    if (sh.var == 0.0) {
      s += (long double)t.coeff * fY(xi - sh.loc);
    } else {
      long double q = 0.0L;
      const double sd = std::sqrt(sh.var);
      for (std::size_t i = 0; i < gh.nodes.size(); ++i)
        q += (long double)gh.weights[i] * fY(xi - sh.loc - sd * gh.nodes[i]);
      s += (long double)t.coeff * q;
    }
  }
  return double(s);
}

std::int64_t finite_rep_check(const LatticeNoise& noise, double xi, double xi0)
{
  if (xi < xi0)
    return 0;
  return lattice_floor((xi - xi0) / noise.t());
}

SignedMixture default_eta(const NoiseModel& noise)
{
  if (const auto* lat = std::get_if<LatticeNoise>(&noise))
    return SignedMixture::dirac(-lat->z0(), lat->lambda());
  return SignedMixture::dirac(0.0);
}

} // namespace deconv
