#pragma once

#include "deconv/inverse_seq.hpp"

#include <optional>
#include <variant>

namespace deconv {

// Error law on the lattice {z0 + t z : z >= 0}.
class LatticeNoise
{
public:
  LatticeNoise(double z0, double t, RightLateralSeq pmf);

  double z0() const { return z0_; }
  double t() const { return t_; }
  const RightLateralSeq& pmf() const { return pmf_; }
  double weight(std::int64_t z) const { return pmf_(z).real(); }
  double lambda() const { return 1.0 / weight(0); }
  double location(std::int64_t z) const { return z0_ + t_ * double(z); }

  // Point mass at x, or 0 when x is off the lattice.
  double atom_at(double x) const;
  double cdf(double x) const;

private:
  double z0_;
  double t_;
  RightLateralSeq pmf_;
};

// Ordered support points xi_0 < xi_1 < ... of a lattice-type X.
class SupportGrid
{
public:
  explicit SupportGrid(std::vector<double> points);
  static SupportGrid equidistant(double xi0, double s, std::int64_t count);

  double xi0() const { return points_.front(); }
  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t l) const { return points_[l]; }
  std::optional<double> span() const { return span_; }

private:
  std::vector<double> points_;
  std::optional<double> span_;
};

class EmpiricalSample
{
public:
  explicit EmpiricalSample(std::vector<double> obs);

  const std::vector<double>& obs() const { return obs_; }
  std::size_t n() const { return obs_.size(); }
  double edf(double xi) const;

private:
  std::vector<double> obs_;
};

// q on l = 0..lmax from r(l) = sum_z p(l,z) q(l-z).
RightLateralSeq deconv_general(const RightLateralSeq& r, const DoubleSeq& p);

// q from r = u * q.
RightLateralSeq deconv_single(const RightLateralSeq& r, const RightLateralSeq& u);

namespace mode {
// Q vanishes below xi0: the series is a finite sum.
struct RightLateral
{
  double xi0 = 0.0;
};
struct Monotone
{
  double tol = 1e-10;
  std::int64_t max_terms = 10000;
};
} // namespace mode

using DfMode = std::variant<mode::RightLateral, mode::Monotone>;

enum class SeriesStatus { exact, converged, diverged, not_converged };

struct DfEvaluation
{
  double value = 0.0;
  std::int64_t terms = 0;
  SeriesStatus status = SeriesStatus::exact;

  bool divergence_flagged() const
  {
    return status == SeriesStatus::diverged || status == SeriesStatus::not_converged;
  }
};

const char* to_string(SeriesStatus s);

// u(0)^{-1} sum_z gamma(z) R(xi - z).
DfEvaluation deconv_df_pointwise(const std::function<double(double)>& R, const RightLateralSeq& u, double xi,
                                 const DfMode& mode);

// Raw partial sums S_T = sum_{z<=T} gamma(z) R(xi - z) for T = 0..T_max (no u(0)^{-1} factor).
std::vector<double> df_partial_sums(const std::function<double(double)>& R, const RightLateralSeq& u, double xi,
                                    std::int64_t T_max);

// Point masses of X on the grid from the point masses of Y at z0 + xi_l.
RightLateralSeq cor1_pmf_deconv(const SupportGrid& grid, const std::function<double(double)>& eps_pmf_at, double z0,
                                const std::function<double(double)>& FY_atom_at);

// Point masses of X on the grid for continuous left-bounded noise (F_eps(z0) = 0).
// zeta_l defaults to xi_{l+1}.
RightLateralSeq cor2_pmf_deconv(const SupportGrid& grid, const std::function<double(double)>& Feps_cdf, double z0,
                                const std::function<double(double)>& FY_cdf,
                                std::optional<std::vector<double>> zeta = std::nullopt);

// F_X(xi) for lattice noise from the d.f. of Y.
DfEvaluation cor3_df_deconv(const LatticeNoise& noise, const std::function<double(double)>& FY, double xi,
                            const DfMode& mode = mode::Monotone{});

// Continuous left-bounded noise setup for the equidistant plug-in: X on xi0 + s N0,
// probes at xi_l + sigma.
struct ContinuousNoiseSetup
{
  std::function<double(double)> cdf;
  double z0 = 0.0;
  double xi0 = 0.0;
  double s = 1.0;
  double sigma = 1.0;
};

// Unbiased plug-in estimators of F_X on a grid.
// fig1: X on xi0 + s N0, lattice noise; observations off the Y lattice are ignored.
std::vector<double> plugin_fig1(const EmpiricalSample& sample, const LatticeNoise& noise, double xi0, double s,
                                const std::vector<double>& grid);
// fig2: X on xi0 + s N0, continuous left-bounded noise.
std::vector<double> plugin_fig2(const EmpiricalSample& sample, const ContinuousNoiseSetup& setup,
                                const std::vector<double>& grid);
// fig3: arbitrary X, lattice noise.
std::vector<double> plugin_fig3(const EmpiricalSample& sample, const LatticeNoise& noise,
                                const std::vector<double>& grid);

} // namespace deconv
