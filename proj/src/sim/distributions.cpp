#include "deconv/sim/distributions.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace deconv::sim {

namespace {

const std::map<std::string, Family> family_names{
    {"poisson", Family::poisson},     {"bernoulli", Family::bernoulli},
    {"geometric", Family::geometric}, {"uniform", Family::uniform},
    {"negative_binomial", Family::negative_binomial},
    {"normal", Family::normal},       {"laplace", Family::laplace},
    {"exponential", Family::exponential},
    {"lattice", Family::lattice},     {"dirac", Family::dirac},
};

double number(const nlohmann::json& j, const char* key, std::optional<double> fallback = std::nullopt)
{
  if (!j.contains(key)) {
    if (fallback)
      return *fallback;
    throw ValidationError(std::string("distribution: missing parameter '") + key + "'");
  }
  if (!j.at(key).is_number())
    throw ValidationError(std::string("distribution: parameter '") + key + "' must be a number");
  double v = j.at(key).get<double>();
  if (!std::isfinite(v))
    throw ValidationError(std::string("distribution: parameter '") + key + "' must be finite");
  return v;
}

void require(bool ok, const std::string& msg)
{
  if (!ok)
    throw ValidationError("distribution: " + msg);
}

// pmf on 0, 1, 2, ... from a term recurrence, cut once the remaining mass is below 1e-13.
template <typename Next>
LatticeNoise truncated(double first, Next next)
{
  std::vector<double> w;
  double term = first, acc = 0.0;
  for (std::int64_t z = 0; z < 1000000; ++z) {
    w.push_back(term);
    acc += term;
    if (1.0 - acc < 1e-13 && z > 0)
      break;
    term = next(z, term);
  }
  double tail = std::max(0.0, 1.0 - acc);
  return LatticeNoise(0.0, 1.0, real_seq(w, 0, tail));
}

} // namespace

Distribution Distribution::from_json(const nlohmann::json& j)
{
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw ValidationError("distribution: expected an object with a string 'family'");
  Distribution d;
  d.spec_ = j;
  d.name_ = j.at("family").get<std::string>();
  auto it = family_names.find(d.name_);
  if (it == family_names.end())
    throw ValidationError("distribution: unknown family '" + d.name_ + "'");
  d.family_ = it->second;

  switch (d.family_) {
  case Family::poisson: {
    d.a_ = number(j, "lambda");
    require(d.a_ > 0 && d.a_ <= 700, "poisson lambda must lie in (0, 700]");
    const double lam = d.a_;
    d.lattice_ = truncated(std::exp(-lam), [lam](std::int64_t z, double t) { return t * lam / double(z + 1); });
    break;
  }
  case Family::bernoulli:
    d.a_ = number(j, "p");
    require(d.a_ >= 0 && d.a_ < 1, "bernoulli p must lie in [0, 1)");
    d.lattice_ = LatticeNoise(0.0, 1.0, real_seq({1 - d.a_, d.a_}));
    break;
  case Family::geometric: {
    d.a_ = number(j, "p");
    require(d.a_ > 0 && d.a_ <= 1, "geometric p must lie in (0, 1]");
    const double q = 1 - d.a_;
    d.lattice_ = d.a_ == 1 ? LatticeNoise(0.0, 1.0, real_seq({1.0}))
                           : truncated(d.a_, [q](std::int64_t, double t) { return t * q; });
    break;
  }
  case Family::uniform: {
    d.a_ = number(j, "lo");
    d.b_ = number(j, "hi");
    require(d.a_ == std::round(d.a_) && d.b_ == std::round(d.b_) && d.a_ <= d.b_,
            "uniform needs integer lo <= hi");
    require(d.b_ - d.a_ <= 1e6, "uniform range too wide");
    const auto k = std::size_t(d.b_ - d.a_) + 1;
    d.lattice_ = LatticeNoise(d.a_, 1.0, real_seq(std::vector<double>(k, 1.0 / double(k))));
    break;
  }
  case Family::negative_binomial: {
    d.a_ = number(j, "r");
    d.b_ = number(j, "p");
    require(d.a_ >= 1 && d.a_ == std::round(d.a_), "negative_binomial r must be a positive integer");
    require(d.b_ > 0 && d.b_ < 1, "negative_binomial p must lie in (0, 1)");
    const double r = d.a_, q = 1 - d.b_;
    d.lattice_ = truncated(std::pow(d.b_, r),
                           [r, q](std::int64_t z, double t) { return t * (double(z) + r) / double(z + 1) * q; });
    break;
  }
  case Family::normal:
    d.a_ = number(j, "mean", 0.0);
    d.b_ = number(j, "sd", 1.0);
    require(d.b_ > 0, "normal sd must be positive");
    break;
  case Family::laplace:
    d.a_ = number(j, "loc", 0.0);
    d.b_ = number(j, "scale", 1.0);
    require(d.b_ > 0, "laplace scale must be positive");
    break;
  case Family::exponential:
    d.a_ = number(j, "rate", 1.0);
    d.b_ = number(j, "shift", 0.0);
    require(d.a_ > 0, "exponential rate must be positive");
    break;
  case Family::lattice: {
    d.a_ = number(j, "z0", 0.0);
    d.b_ = number(j, "t", 1.0);
    if (!j.contains("weights") || !j.at("weights").is_array() || j.at("weights").empty())
      throw ValidationError("distribution: lattice needs a non-empty 'weights' array");
    std::vector<double> w;
    for (const auto& x : j.at("weights")) {
      require(x.is_number(), "lattice weights must be numbers");
      w.push_back(x.get<double>());
    }
    d.lattice_ = LatticeNoise(d.a_, d.b_, real_seq(w));
    break;
  }
  case Family::dirac:
    d.a_ = number(j, "at", 0.0);
    d.lattice_ = LatticeNoise(d.a_, 1.0, real_seq({1.0}));
    break;
  }
  return d;
}

const LatticeNoise& Distribution::lattice() const
{
  if (!lattice_)
    throw ValidationError("distribution '" + name_ + "' is not a lattice law");
  return *lattice_;
}

std::optional<double> Distribution::left_extremity() const
{
  if (lattice_)
    return lattice_->z0();
  if (family_ == Family::exponential)
    return b_;
  return std::nullopt;
}

NormalLaw Distribution::normal_law() const
{
  if (family_ != Family::normal)
    throw ValidationError("distribution '" + name_ + "' is not normal");
  return NormalLaw{a_, b_ * b_};
}

double Distribution::sample(std::mt19937_64& rng) const
{
  switch (family_) {
  case Family::poisson:
    return double(std::poisson_distribution<std::int64_t>(a_)(rng));
  case Family::bernoulli:
    return std::bernoulli_distribution(a_)(rng) ? 1.0 : 0.0;
  case Family::geometric:
    return double(std::geometric_distribution<std::int64_t>(a_)(rng));
  case Family::uniform:
    return double(std::uniform_int_distribution<std::int64_t>(std::int64_t(a_), std::int64_t(b_))(rng));
  case Family::negative_binomial:
    return double(std::negative_binomial_distribution<std::int64_t>(std::int64_t(a_), b_)(rng));
  case Family::normal:
    return std::normal_distribution<double>(a_, b_)(rng);
  case Family::laplace: {
    double u = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
    return a_ - b_ * (u < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(u));
  }
  case Family::exponential:
    return b_ + std::exponential_distribution<double>(a_)(rng);
  case Family::lattice: {
    const auto& w = lattice_->pmf().coeffs;
    std::vector<double> weights;
    for (const auto& c : w)
      weights.push_back(c.real());
    std::discrete_distribution<std::int64_t> pick(weights.begin(), weights.end());
    return lattice_->location(pick(rng));
  }
  case Family::dirac:
    return a_;
  }
  return 0.0;
}

double Distribution::cdf(double x) const
{
  switch (family_) {
  case Family::normal:
    return normal_cdf((x - a_) / b_);
  case Family::laplace:
    return x < a_ ? 0.5 * std::exp((x - a_) / b_) : 1.0 - 0.5 * std::exp(-(x - a_) / b_);
  case Family::exponential:
    return x < b_ ? 0.0 : -std::expm1(-a_ * (x - b_));
  default:
    return std::min(1.0, lattice_->cdf(x));
  }
}

std::optional<double> Distribution::density(double x) const
{
  switch (family_) {
  case Family::normal:
    return normal_pdf((x - a_) / b_) / b_;
  case Family::laplace:
    return 0.5 / b_ * std::exp(-std::abs(x - a_) / b_);
  case Family::exponential:
    return x < b_ ? 0.0 : a_ * std::exp(-a_ * (x - b_));
  default:
    return std::nullopt;
  }
}

cplx Distribution::cf(double t) const
{
  const cplx I(0.0, 1.0);
  switch (family_) {
  case Family::normal:
    return std::exp(I * t * a_ - 0.5 * b_ * b_ * t * t);
  case Family::laplace:
    return std::exp(I * t * a_) / (1.0 + b_ * b_ * t * t);
  case Family::exponential:
    return std::exp(I * t * b_) * a_ / (a_ - I * t);
  default: {
    cplx s = 0.0;
    for (std::int64_t z = 0; z <= lattice_->pmf().last_index(); ++z)
      s += lattice_->weight(z) * std::exp(I * t * lattice_->location(z));
    return s;
  }
  }
}

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base, std::uint64_t r) { return splitmix64(splitmix64(base) ^ r); }

std::vector<double> draw(const Distribution& d, std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& x : out)
    x = d.sample(rng);
  return out;
}

EmpiricalSample sample_observations(const Distribution& target, const Distribution& noise, std::size_t n,
                                    std::uint64_t seed)
{
  if (n == 0)
    throw ValidationError("sample size must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<double> y(n);
  for (auto& v : y) {
    double x = target.sample(rng);
    v = x + noise.sample(rng);
  }
  return EmpiricalSample(std::move(y));
}

std::optional<AnalyticLaw> observed_law(const Distribution& target, const Distribution& noise)
{
  // One lattice summand: finite mixture of shifted copies of the other law.
  auto mixture_over = [](const Distribution& lat, const Distribution& other) {
    const LatticeNoise l = lat.lattice();
    AnalyticLaw law;
    law.cdf = [l, other](double x) {
      double s = 0.0;
      for (std::int64_t z = 0; z <= l.pmf().last_index(); ++z)
        s += l.weight(z) * other.cdf(x - l.location(z));
      return s;
    };
    if (!other.is_lattice())
      law.density = [l, other](double x) {
        double s = 0.0;
        for (std::int64_t z = 0; z <= l.pmf().last_index(); ++z)
          s += l.weight(z) * other.density(x - l.location(z)).value();
        return s;
      };
    return law;
  };
  if (noise.is_lattice())
    return mixture_over(noise, target);
  if (target.is_lattice())
    return mixture_over(target, noise);

  if (target.is_normal() && noise.is_normal()) {
    const double mean = target.normal_law().mean + noise.normal_law().mean;
    const double sd = std::sqrt(target.normal_law().variance + noise.normal_law().variance);
    return AnalyticLaw{[mean, sd](double x) { return normal_cdf((x - mean) / sd); },
                       [mean, sd](double x) { return normal_pdf((x - mean) / sd) / sd; }};
  }
  // One normal summand: Gauss-Hermite average of the other law.
  const Distribution* normal = noise.is_normal() ? &noise : target.is_normal() ? &target : nullptr;
  if (!normal)
    return std::nullopt;
  const Distribution other = normal == &noise ? target : noise;
  const NormalLaw nl = normal->normal_law();
  const double sd = std::sqrt(nl.variance);
  AnalyticLaw law;
  law.cdf = [other, nl, sd](double x) {
    const auto& gh = gauss_hermite_normal();
    double s = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i)
      s += gh.weights[i] * other.cdf(x - nl.mean - sd * gh.nodes[i]);
    return s;
  };
  law.density = [other, nl, sd](double x) {
    const auto& gh = gauss_hermite_normal();
    double s = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i)
      s += gh.weights[i] * other.density(x - nl.mean - sd * gh.nodes[i]).value();
    return s;
  };
  return law;
}

} // namespace deconv::sim
