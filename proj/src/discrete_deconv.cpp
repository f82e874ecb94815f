#include "deconv/discrete_deconv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace deconv {

LatticeNoise::LatticeNoise(double z0, double t, RightLateralSeq pmf) : z0_(z0), t_(t), pmf_(std::move(pmf))
{
  if (!std::isfinite(z0_) || !(t_ > 0) || !std::isfinite(t_))
    throw ValidationError("lattice noise: need finite z0 and a positive span t");
  if (pmf_.offset != 0 || pmf_.empty())
    throw ValidationError("lattice noise: pmf must be non-empty and start at index 0");
  double total = 0.0;
  for (const auto& c : pmf_.coeffs) {
    if (std::abs(c.imag()) > 1e-12 || c.real() < -1e-15 || !std::isfinite(c.real()))
      throw ValidationError("lattice noise: pmf weights must be real and non-negative");
    total += c.real();
  }
  if (!(pmf_(0).real() > 0))
    throw ValidationError("lattice noise: mass at the left extremity z0 must be positive");
  if (std::abs(total + pmf_.tail_mass - 1.0) > 1e-9)
    throw ValidationError("lattice noise: pmf must sum to 1 (got " + std::to_string(total + pmf_.tail_mass) + ")");
}

double LatticeNoise::atom_at(double x) const
{
  double k = (x - z0_) / t_;
  double r = std::round(k);
  if (std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(k)))
    return 0.0;
  return weight(std::int64_t(r));
}

double LatticeNoise::cdf(double x) const
{
  std::int64_t k = lattice_floor((x - z0_) / t_);
  double s = 0.0;
  for (std::int64_t z = 0; z <= std::min(k, pmf_.last_index()); ++z)
    s += weight(z);
  return s;
}

SupportGrid::SupportGrid(std::vector<double> points) : points_(std::move(points))
{
  if (points_.empty())
    throw ValidationError("support grid: no points");
  for (std::size_t l = 1; l < points_.size(); ++l)
    if (!(points_[l - 1] < points_[l]))
      throw ValidationError("support grid: points must be strictly increasing (index " + std::to_string(l) + ")");
  if (points_.size() >= 2) {
    double s = points_[1] - points_[0];
    bool equal = true;
    for (std::size_t l = 1; l < points_.size(); ++l)
      equal = equal && std::abs(points_[l] - points_[0] - s * double(l)) <= 1e-12 * std::max(1.0, std::abs(points_[l]));
    if (equal)
      span_ = s;
  }
}

SupportGrid SupportGrid::equidistant(double xi0, double s, std::int64_t count)
{
  if (!(s > 0) || count < 1)
    throw ValidationError("support grid: need span > 0 and at least one point");
  std::vector<double> p(static_cast<std::size_t>(count));
  for (std::int64_t l = 0; l < count; ++l)
    p[std::size_t(l)] = xi0 + s * double(l);
  SupportGrid g(std::move(p));
  g.span_ = s;
  return g;
}

EmpiricalSample::EmpiricalSample(std::vector<double> obs) : obs_(std::move(obs))
{
  if (obs_.empty())
    throw ValidationError("empirical sample: no observations");
  for (double y : obs_)
    if (!std::isfinite(y))
      throw ValidationError("empirical sample: non-finite observation");
  std::sort(obs_.begin(), obs_.end());
}

double EmpiricalSample::edf(double xi) const
{
  auto it = std::upper_bound(obs_.begin(), obs_.end(), xi);
  return double(it - obs_.begin()) / double(obs_.size());
}

RightLateralSeq deconv_general(const RightLateralSeq& r, const DoubleSeq& p)
{
  if (r.offset < 0)
    throw ValidationError("deconv_general: r must vanish at negative indices");
  if (r.empty())
    return {};
  const auto lmax = std::min(r.last_index(), p.lmax);
  TriangularTable b = beta(p, lmax);
  std::vector<cplx> rr(std::size_t(lmax + 1));
  for (std::int64_t l = 0; l <= lmax; ++l)
    rr[std::size_t(l)] = r(l) / p(l, 0);
  std::vector<cplx> q(std::size_t(lmax + 1));
  for (std::int64_t l = 0; l <= lmax; ++l) {
    cplx s = 0.0;
    for (std::int64_t z = 0; z <= l; ++z)
      s += rr[std::size_t(l - z)] * b(l, z);
    q[std::size_t(l)] = s;
  }
  return RightLateralSeq(std::move(q), 0, r.tail_mass);
}

RightLateralSeq deconv_single(const RightLateralSeq& r, const RightLateralSeq& u)
{
  if (r.empty())
    return {};
  RightLateralSeq g = gamma(u, std::int64_t(r.size()) - 1);
  RightLateralSeq rr = r;
  for (auto& c : rr.coeffs)
    c /= u(0);
  rr.tail_mass /= std::abs(u(0));
  return truncate_above(conv(rr, g), r.last_index());
}

const char* to_string(SeriesStatus s)
{
  switch (s) {
  case SeriesStatus::exact:
    return "exact";
  case SeriesStatus::converged:
    return "converged";
  case SeriesStatus::diverged:
    return "diverged";
  case SeriesStatus::not_converged:
    return "not_converged";
  }
  return "unknown";
}

namespace {

double median_of(std::vector<double> v)
{
  auto mid = v.begin() + std::ptrdiff_t(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double hi = *mid;
  if (v.size() % 2 == 1)
    return hi;
  double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

} // namespace

DfEvaluation deconv_df_pointwise(const std::function<double(double)>& R, const RightLateralSeq& u, double xi,
                                 const DfMode& mode)
{
  GammaGenerator gen(u);
  const cplx u0 = gen.leading();
  DfEvaluation out;

  if (const auto* rl = std::get_if<mode::RightLateral>(&mode)) {
    const auto n = lattice_floor(xi - rl->xi0);
    CompensatedSum<double> re, im;
    for (std::int64_t z = 0; z <= n; ++z) {
      cplx term = gen.at(z) * R(xi - double(z)) / u0;
      re.add(term.real());
      im.add(term.imag());
    }
    out.value = re.value();
    out.terms = std::max<std::int64_t>(0, n + 1);
    out.status = SeriesStatus::exact;
    return out;
  }

  const auto& mono = std::get<mode::Monotone>(mode);
  constexpr int window = 10;
  constexpr int needed_small = 5;
  constexpr int rising_windows = 3;
  CompensatedSum<double> acc;
  std::vector<double> recent;
  int small = 0, rising = 0;
  double last_osc = -1.0;
  out.status = SeriesStatus::not_converged;
  for (std::int64_t z = 0; z < mono.max_terms; ++z) {
    double term = (gen.at(z) * R(xi - double(z)) / u0).real();
    acc.add(term);
    out.terms = z + 1;
    small = std::abs(term) < mono.tol ? small + 1 : 0;
    if (small >= needed_small) {
      out.status = SeriesStatus::converged;
      break;
    }
    recent.push_back(acc.value());
    if (recent.size() == window) {
      double med = median_of(recent);
      double osc = 0.0;
      for (double s : recent)
        osc = std::max(osc, std::abs(s - med));
      rising = (last_osc >= 0 && osc > last_osc) ? rising + 1 : 0;
      last_osc = osc;
      recent.clear();
      if (rising >= rising_windows || !std::isfinite(osc)) {
        out.status = SeriesStatus::diverged;
        break;
      }
    }
  }
  out.value = acc.value();
  return out;
}

std::vector<double> df_partial_sums(const std::function<double(double)>& R, const RightLateralSeq& u, double xi,
                                    std::int64_t T_max)
{
  GammaGenerator gen(u);
  std::vector<double> out;
  CompensatedSum<double> acc;
  for (std::int64_t z = 0; z <= T_max; ++z) {
    acc.add((gen.at(z) * R(xi - double(z))).real());
    out.push_back(acc.value());
  }
  return out;
}

RightLateralSeq cor1_pmf_deconv(const SupportGrid& grid, const std::function<double(double)>& eps_pmf_at, double z0,
                                const std::function<double(double)>& FY_atom_at)
{
  if (!(eps_pmf_at(z0) > 0))
    throw SingularLeadingCoefficient("noise has no mass at its left extremity z0");
  const auto L = std::int64_t(grid.size());
  std::vector<double> r(grid.size());
  for (std::int64_t l = 0; l < L; ++l)
    r[std::size_t(l)] = FY_atom_at(z0 + grid[std::size_t(l)]);
  if (auto s = grid.span()) {
    std::vector<double> u(grid.size());
    for (std::int64_t z = 0; z < L; ++z)
      u[std::size_t(z)] = eps_pmf_at(z0 + *s * double(z));
    return deconv_single(real_seq(r), real_seq(u));
  }
  const std::vector<double> xi = grid.points();
  DoubleSeq p{[xi, z0, eps_pmf_at](std::int64_t l, std::int64_t z) {
                return cplx(eps_pmf_at(z0 + xi[std::size_t(l)] - xi[std::size_t(l - z)]));
              },
              L - 1};
  return deconv_general(real_seq(r), p);
}

RightLateralSeq cor2_pmf_deconv(const SupportGrid& grid, const std::function<double(double)>& Feps_cdf, double z0,
                                const std::function<double(double)>& FY_cdf, std::optional<std::vector<double>> zeta)
{
  if (std::abs(Feps_cdf(z0)) > 1e-15)
    throw ValidationError("cor2: noise d.f. must vanish at its left extremity z0");
  const std::vector<double>& xi = grid.points();
  std::size_t L = xi.size();
  if (!zeta) {
    if (!grid.span())
      --L;
    if (L == 0)
      throw ValidationError("cor2: default probes need at least two grid points");
    zeta.emplace(L);
    for (std::size_t l = 0; l < L; ++l)
      (*zeta)[l] = grid.span() ? xi[l] + *grid.span() : xi[l + 1];
  } else if (zeta->size() < L) {
    L = zeta->size();
  }
  for (std::size_t l = 0; l < L; ++l) {
    double zl = (*zeta)[l];
    bool ok = xi[l] < zl && (l + 1 >= xi.size() || zl <= xi[l + 1]) && Feps_cdf(z0 + zl - xi[l]) > 0;
    if (!ok)
      throw ValidationError("cor2: probe constraint violated at l = " + std::to_string(l));
  }
  if (L == 0)
    return {};

  std::vector<double> r(L);
  for (std::size_t l = 0; l < L; ++l)
    r[l] = FY_cdf(z0 + (*zeta)[l]);

  bool single = grid.span().has_value();
  const double sigma = (*zeta)[0] - xi[0];
  for (std::size_t l = 0; l < L && single; ++l)
    single = std::abs((*zeta)[l] - xi[l] - sigma) <= 1e-12 * std::max(1.0, std::abs(xi[l]));
  if (single) {
    std::vector<double> u(L);
    for (std::size_t z = 0; z < L; ++z)
      u[z] = Feps_cdf(z0 + sigma + *grid.span() * double(z));
    return deconv_single(real_seq(r), real_seq(u));
  }
  const std::vector<double> zv = *zeta;
  DoubleSeq p{[xi, zv, z0, Feps_cdf](std::int64_t l, std::int64_t z) {
                return cplx(Feps_cdf(z0 + zv[std::size_t(l)] - xi[std::size_t(l - z)]));
              },
              std::int64_t(L) - 1};
  return deconv_general(real_seq(r), p);
}

DfEvaluation cor3_df_deconv(const LatticeNoise& noise, const std::function<double(double)>& FY, double xi,
                            const DfMode& mode)
{
  const double z0 = noise.z0(), t = noise.t();
  // Evaluated at 0 so that the probes z0 + xi - t z carry no rescaling error.
  auto R = [&](double x) { return FY(z0 + xi + t * x); };
  if (const auto* rl = std::get_if<mode::RightLateral>(&mode))
    return deconv_df_pointwise(R, noise.pmf(), 0.0, mode::RightLateral{(rl->xi0 - xi) / t});
  return deconv_df_pointwise(R, noise.pmf(), 0.0, mode);
}

namespace {

// Partial sums of gamma(u) up to index kmax.
std::vector<double> theta_gamma_table(const RightLateralSeq& u, std::int64_t kmax)
{
  if (kmax < 0)
    return {};
  RightLateralSeq g = gamma(u, kmax);
  std::vector<double> cum(g.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    cum[k] = acc += g.coeffs[k].real();
  return cum;
}

std::vector<double> scaled(std::vector<double> v, double f)
{
  for (auto& x : v)
    x *= f;
  return v;
}

} // namespace

std::vector<double> plugin_fig1(const EmpiricalSample& sample, const LatticeNoise& noise, double xi0, double s,
                                const std::vector<double>& grid)
{
  if (!(s > 0))
    throw ValidationError("plugin fig1: span s must be positive");
  std::vector<double> idx;
  for (double y : sample.obs()) {
    double k = (y - noise.z0() - xi0) / s;
    double r = std::round(k);
    if (std::abs(k - r) <= 1e-9 * std::max(1.0, std::abs(k)) && r >= 0)
      idx.push_back(r);
  }
  std::vector<double> cells(grid.size());
  std::int64_t kmax = -1;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    cells[g] = double(lattice_floor((grid[g] - xi0) / s));
    kmax = std::max(kmax, std::int64_t(cells[g]));
  }
  std::vector<double> u(std::size_t(std::max<std::int64_t>(kmax, 0) + 1));
  for (std::size_t z = 0; z < u.size(); ++z)
    u[z] = noise.atom_at(noise.z0() + s * double(z));
  if (!(u[0] > 0))
    throw SingularLeadingCoefficient("plugin fig1: no noise mass at z0");
  auto table = theta_gamma_table(real_seq(u), kmax);
  return scaled(kernels::step_sum_omp(table, idx, cells, 0.0, 1.0), 1.0 / (double(sample.n()) * u[0]));
}

std::vector<double> plugin_fig2(const EmpiricalSample& sample, const ContinuousNoiseSetup& setup,
                                const std::vector<double>& grid)
{
  if (!setup.cdf)
    throw ValidationError("plugin fig2: missing noise d.f.");
  if (!(setup.s > 0) || !(setup.sigma > 0) || setup.sigma > setup.s)
    throw ValidationError("plugin fig2: need 0 < sigma <= s");
  const double c = setup.z0 + setup.xi0 + setup.sigma;
  const double ymin = sample.obs().front();
  std::vector<double> probes(grid.size());
  std::int64_t xmax = -1;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto X = lattice_floor((grid[g] - setup.xi0) / setup.s);
    xmax = std::max(xmax, X);
    probes[g] = c + setup.s * double(X);
  }
  const std::int64_t kmax = lattice_floor((c + setup.s * double(std::max<std::int64_t>(xmax, 0)) - ymin) / setup.s) + 1;
  std::vector<double> u(std::size_t(std::max<std::int64_t>(kmax, 0) + 1));
  for (std::size_t z = 0; z < u.size(); ++z)
    u[z] = setup.cdf(setup.z0 + setup.sigma + setup.s * double(z));
  if (!(u[0] > 0))
    throw SingularLeadingCoefficient("plugin fig2: noise d.f. vanishes at z0 + sigma");
  auto cum = theta_gamma_table(real_seq(u), kmax);
  std::vector<double> cc(cum.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cum.size(); ++k)
    cc[k] = acc += cum[k];

  auto upper = kernels::step_sum_omp(cc, sample.obs(), probes, 0.0, setup.s);
  auto lower = kernels::step_sum_omp(cc, sample.obs(), {c - setup.s}, 0.0, setup.s);
  std::vector<double> out(grid.size());
  const double f = 1.0 / (double(sample.n()) * u[0]);
  for (std::size_t g = 0; g < grid.size(); ++g)
    out[g] = grid[g] < setup.xi0 ? 0.0 : (upper[g] - lower[0]) * f;
  return out;
}

std::vector<double> plugin_fig3(const EmpiricalSample& sample, const LatticeNoise& noise,
                                const std::vector<double>& grid)
{
  const double ymin = sample.obs().front();
  std::int64_t kmax = -1;
  for (double x : grid)
    kmax = std::max(kmax, lattice_floor((x + noise.z0() - ymin) / noise.t()));
  auto table = theta_gamma_table(noise.pmf(), kmax);
  return scaled(kernels::step_sum_omp(table, sample.obs(), grid, noise.z0(), noise.t()),
                1.0 / (double(sample.n()) * noise.weight(0)));
}

} // namespace deconv
