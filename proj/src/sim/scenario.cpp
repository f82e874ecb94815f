#include "deconv/sim/scenario.hpp"
#include "deconv/special.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <limits>

namespace deconv::sim {

namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* key)
{
  if (!doc.contains(key))
    throw ValidationError(std::string("scenario: missing field '") + key + "'");
  return doc.at(key);
}

std::size_t positive_count(const nlohmann::json& doc, const char* key, std::size_t fallback, std::size_t cap)
{
  if (!doc.contains(key))
    return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
    throw ValidationError(std::string("scenario: '") + key + "' must be a positive integer");
  auto n = v.get<std::size_t>();
  if (n > cap)
    throw ValidationError(std::string("scenario: '") + key + "' exceeds " + std::to_string(cap));
  return n;
}

SignedMixture parse_eta(const nlohmann::json& j)
{
  if (!j.is_array() || j.empty())
    throw ValidationError("scenario: eta must be \"default\" or a non-empty array of terms");
  std::vector<MixtureTerm> terms;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("coeff") || !t.at("coeff").is_number())
      throw ValidationError("scenario: each eta term needs a numeric 'coeff'");
    double c = t.at("coeff").get<double>();
    if (t.contains("at") && t.at("at").is_number())
      terms.push_back({c, DiracAt{t.at("at").get<double>()}});
    else if (t.contains("normal") && t.at("normal").is_object())
      terms.push_back({c, NormalLaw{t.at("normal").value("mean", 0.0), t.at("normal").value("variance", 1.0)}});
    else
      throw ValidationError("scenario: eta term needs 'at' or 'normal'");
  }
  return SignedMixture(std::move(terms));
}

bool is_integer_ratio(double a, double b)
{
  double k = a / b;
  return k >= 1 - 1e-9 && std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
}

void validate_compatibility(const Scenario& s)
{
  const auto& e = s.estimator;
  switch (e.kind) {
  case EstimatorKind::cor1:
    if (!s.target.is_lattice() || !s.noise.is_lattice())
      throw ValidationError("scenario: cor1 needs a lattice target and lattice noise");
    if (!is_integer_ratio(s.noise.lattice().t(), s.target.lattice().t()))
      throw ValidationError("scenario: cor1 needs the noise span to be a multiple of the target span");
    break;
  case EstimatorKind::cor2: {
    if (!s.target.is_lattice())
      throw ValidationError("scenario: cor2 needs a lattice target");
    if (s.noise.is_lattice() || !s.noise.left_extremity())
      throw ValidationError("scenario: cor2 needs continuous noise bounded to the left");
    double span = s.target.lattice().t();
    if (e.s && std::abs(*e.s - span) > 1e-12)
      throw ValidationError("scenario: cor2 span s must equal the target lattice span");
    double sigma = e.sigma.value_or(span);
    if (!(sigma > 0 && sigma <= span))
      throw ValidationError("scenario: cor2 needs 0 < sigma <= s");
    if (!(s.noise.cdf(*s.noise.left_extremity() + sigma) > 0))
      throw ValidationError("scenario: cor2 noise has no mass below z0 + sigma");
    break;
  }
  case EstimatorKind::cor3:
    if (!s.noise.is_lattice())
      throw ValidationError("scenario: cor3 needs lattice noise");
    break;
  case EstimatorKind::neumann:
    if (!s.noise.is_lattice() && !s.noise.is_normal())
      throw ValidationError("scenario: neumann needs lattice or normal noise");
    if (e.m < 0 || e.m > max_neumann_order)
      throw ValidationError("scenario: neumann order m must lie in [0, 45]");
    break;
  }
}

} // namespace

std::vector<double> GridSpec::points() const
{
  if (!(step > 0) || !(max >= min) || !std::isfinite(min) || !std::isfinite(max))
    throw ValidationError("scenario: grid needs finite min <= max and step > 0");
  double count = std::floor((max - min) / step + 1e-9) + 1;
  if (count > 1e6)
    throw ValidationError("scenario: grid has too many points");
  std::vector<double> p(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = min + step * double(i);
  return p;
}

Scenario parse_scenario(const nlohmann::json& doc)
{
  if (!doc.is_object())
    throw ValidationError("scenario: expected a JSON object");
  Scenario s;
  s.name = doc.value("name", "scenario");
  s.target = Distribution::from_json(field(doc, "target"));
  s.noise = Distribution::from_json(field(doc, "noise"));

  const auto& est = field(doc, "estimator");
  if (!est.is_object() || !est.contains("kind") || !est.at("kind").is_string())
    throw ValidationError("scenario: estimator needs a string 'kind'");
  const auto kind = est.at("kind").get<std::string>();
  if (kind == "cor1")
    s.estimator.kind = EstimatorKind::cor1;
  else if (kind == "cor2")
    s.estimator.kind = EstimatorKind::cor2;
  else if (kind == "cor3")
    s.estimator.kind = EstimatorKind::cor3;
  else if (kind == "neumann")
    s.estimator.kind = EstimatorKind::neumann;
  else
    throw ValidationError("scenario: unknown estimator kind '" + kind + "'");
  const auto source = est.value("source", std::string("sample"));
  if (source == "sample")
    s.estimator.source = Source::sample;
  else if (source == "exact")
    s.estimator.source = Source::exact;
  else
    throw ValidationError("scenario: estimator source must be 'sample' or 'exact'");
  if (est.contains("m")) {
    if (!est.at("m").is_number_integer())
      throw ValidationError("scenario: estimator m must be an integer");
    s.estimator.m = est.at("m").get<std::int64_t>();
  }
  if (est.contains("eta") && !(est.at("eta").is_string() && est.at("eta") == "default"))
    s.estimator.eta = parse_eta(est.at("eta"));
  if (est.contains("s"))
    s.estimator.s = est.at("s").get<double>();
  if (est.contains("sigma"))
    s.estimator.sigma = est.at("sigma").get<double>();

  s.n = positive_count(doc, "n", 1, 100000000);
  s.replications = positive_count(doc, "replications", 1, 1000000);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned())
      throw ValidationError("scenario: seed must be a non-negative integer");
    s.seed = doc.at("seed").get<std::uint64_t>();
  }
  const auto& g = field(doc, "grid");
  if (!g.is_object() || !g.contains("min") || !g.contains("max") || !g.contains("step"))
    throw ValidationError("scenario: grid needs min, max and step");
  s.grid = GridSpec{g.at("min").get<double>(), g.at("max").get<double>(), g.at("step").get<double>()};
  s.grid.points();
  s.keep_replications = doc.value("keep_replications", false);
  validate_compatibility(s);
  return s;
}

nlohmann::json load_json_file(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw ValidationError("cannot open scenario file '" + path + "'");
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("scenario file '" + path + "': " + e.what());
  }
}

void apply_override(nlohmann::json& doc, const std::string& assignment)
{
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ValidationError("override must look like key.path=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded())
    value = raw;
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty())
      throw ValidationError("override key '" + key + "' has an empty component");
    if (!node->is_object())
      throw ValidationError("override key '" + key + "' descends into a non-object");
    node = &(*node)[part];
    if (dot == std::string::npos)
      break;
    start = dot + 1;
  }
  *node = value;
}

NoiseModel noise_model(const Distribution& noise)
{
  if (noise.is_lattice())
    return noise.lattice();
  if (noise.is_normal()) {
    auto law = noise.normal_law();
    return NormalNoise{law.mean, std::sqrt(law.variance)};
  }
  throw ValidationError("noise family '" + noise.name() + "' is neither lattice nor normal");
}

namespace {

using Estimator = std::function<std::vector<double>(const EmpiricalSample&)>;

std::vector<double> step_df_on(const RightLateralSeq& pmf, double xi0, double s, const std::vector<double>& grid)
{
  StepDF df(pmf, s);
  std::vector<double> out;
  for (double x : grid)
    out.push_back(df(x - xi0).real());
  return out;
}

std::int64_t cells_up_to(double xmax, double xi0, double s)
{
  return std::max<std::int64_t>(1, lattice_floor((xmax - xi0) / s) + 1);
}

std::vector<double> exact_estimate(const Scenario& sc, const std::vector<double>& grid)
{
  const auto& e = sc.estimator;
  const double gmax = grid.empty() ? 0.0 : grid.back();
  switch (e.kind) {
  case EstimatorKind::cor1: {
    const auto& X = sc.target.lattice();
    const auto& eps = sc.noise.lattice();
    auto support = SupportGrid::equidistant(X.z0(), X.t(), cells_up_to(gmax, X.z0(), X.t()));
    auto FY_atom = [&](double y) {
      double s = 0.0;
      for (std::int64_t k = 0; k <= X.pmf().last_index(); ++k)
        s += X.weight(k) * eps.atom_at(y - X.location(k));
      return s;
    };
    auto q = cor1_pmf_deconv(support, [&](double x) { return eps.atom_at(x); }, eps.z0(), FY_atom);
    return step_df_on(q, X.z0(), X.t(), grid);
  }
  case EstimatorKind::cor2: {
    const auto& X = sc.target.lattice();
    const double s = X.t(), sigma = e.sigma.value_or(s), z0 = *sc.noise.left_extremity();
    auto support = SupportGrid::equidistant(X.z0(), s, cells_up_to(gmax, X.z0(), s));
    std::vector<double> zeta;
    for (double x : support.points())
      zeta.push_back(x + sigma);
    const Distribution noise = sc.noise;
    auto FY = [&](double y) {
      double acc = 0.0;
      for (std::int64_t k = 0; k <= X.pmf().last_index(); ++k)
        acc += X.weight(k) * noise.cdf(y - X.location(k));
      return acc;
    };
    auto q = cor2_pmf_deconv(support, [&](double x) { return noise.cdf(x); }, z0, FY, zeta);
    return step_df_on(q, X.z0(), s, grid);
  }
  case EstimatorKind::cor3: {
    auto law = observed_law(sc.target, sc.noise);
    DfMode mode = mode::Monotone{};
    if (auto left = sc.target.left_extremity())
      mode = mode::RightLateral{*left};
    std::vector<double> out;
    for (double x : grid) {
      auto ev = cor3_df_deconv(sc.noise.lattice(), law->cdf, x, mode);
      if (ev.divergence_flagged())
        throw DivergenceError("cor3: series for F_X(" + std::to_string(x) + ") " + to_string(ev.status) +
                              " after " + std::to_string(ev.terms) + " terms");
      out.push_back(ev.value);
    }
    return out;
  }
  case EstimatorKind::neumann: {
    const NoiseModel noise = noise_model(sc.noise);
    const SignedMixture eta = e.eta.value_or(default_eta(noise));
    if (sc.target.is_normal() && sc.noise.is_normal()) {
      auto a = sc.target.normal_law(), b = sc.noise.normal_law();
      return deconv_fn_grid(eta, noise, NormalLaw{a.mean + b.mean, a.variance + b.variance}, grid, e.m);
    }
    auto law = observed_law(sc.target, sc.noise);
    if (!law)
      throw ValidationError("scenario: law of Y not available for exact evaluation");
    return deconv_fn_grid(eta, noise, *law, grid, e.m);
  }
  }
  return {};
}

// The plug-in estimators are finite sums for any sample; they only estimate F_X when
// the deconvolution series converges for the true law of Y.
void check_summability(const Scenario& sc, const std::vector<double>& grid)
{
  if (sc.estimator.kind != EstimatorKind::cor3 || sc.target.left_extremity())
    return;
  auto law = observed_law(sc.target, sc.noise);
  for (double x : grid) {
    auto ev = cor3_df_deconv(sc.noise.lattice(), law->cdf, x, mode::Monotone{});
    if (ev.divergence_flagged())
      throw DivergenceError("cor3: deconvolution series " + std::string(to_string(ev.status)) + " at xi = " +
                            std::to_string(x) + "; the plug-in estimator has no limit for this target/noise pair");
  }
}

Estimator sample_estimator(const Scenario& sc, const std::vector<double>& grid)
{
  const auto& e = sc.estimator;
  switch (e.kind) {
  case EstimatorKind::cor1: {
    const auto noise = sc.noise.lattice();
    const double xi0 = sc.target.lattice().z0(), s = sc.target.lattice().t();
    return [=](const EmpiricalSample& y) { return plugin_fig1(y, noise, xi0, s, grid); };
  }
  case EstimatorKind::cor2: {
    ContinuousNoiseSetup setup;
    const Distribution noise = sc.noise;
    setup.cdf = [noise](double x) { return noise.cdf(x); };
    setup.z0 = *sc.noise.left_extremity();
    setup.xi0 = sc.target.lattice().z0();
    setup.s = sc.target.lattice().t();
    setup.sigma = e.sigma.value_or(setup.s);
    return [=](const EmpiricalSample& y) { return plugin_fig2(y, setup, grid); };
  }
  case EstimatorKind::cor3: {
    const auto noise = sc.noise.lattice();
    return [=](const EmpiricalSample& y) { return plugin_fig3(y, noise, grid); };
  }
  case EstimatorKind::neumann: {
    const NoiseModel noise = noise_model(sc.noise);
    const SignedMixture eta = e.eta.value_or(default_eta(noise));
    const SignedMixture measure = convolve(eta, neumann_sum(eta, noise, e.m));
    return [=](const EmpiricalSample& y) { return evaluate_against(measure, y, grid); };
  }
  }
  return {};
}

} // namespace

ResultFrame run_scenario(const Scenario& sc)
{
  validate_compatibility(sc);
  const auto grid = sc.grid.points();
  const std::size_t G = grid.size();
  ResultFrame frame;
  frame.scenario = sc.name;

  std::vector<double> values;
  std::size_t R = 1;
  if (sc.estimator.source == Source::exact) {
    values = exact_estimate(sc, grid);
  } else {
    check_summability(sc, grid);
    R = sc.replications;
    const Estimator est = sample_estimator(sc, grid);
    values.assign(R * G, 0.0);
    std::exception_ptr failure;
    const auto nrep = std::int64_t(R);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t r = 0; r < nrep; ++r) {
      try {
        auto y = sample_observations(sc.target, sc.noise, sc.n, replication_seed(sc.seed, std::uint64_t(r)));
        auto v = est(y);
        std::copy(v.begin(), v.end(), values.begin() + std::ptrdiff_t(std::size_t(r) * G));
      } catch (...) {
#pragma omp critical
        if (!failure)
          failure = std::current_exception();
      }
    }
    if (failure)
      std::rethrow_exception(failure);
  }
  frame.replications = R;

  auto law = observed_law(sc.target, sc.noise);
  for (std::size_t g = 0; g < G; ++g) {
    CompensatedSum<double> sum;
    for (std::size_t r = 0; r < R; ++r)
      sum.add(values[r * G + g]);
    const double mean = sum.value() / double(R);
    CompensatedSum<double> sq;
    for (std::size_t r = 0; r < R; ++r)
      sq.add((values[r * G + g] - mean) * (values[r * G + g] - mean));
    const double sd = R > 1 ? std::sqrt(sq.value() / double(R - 1)) : 0.0;
    frame.rows.push_back({grid[g], sc.target.cdf(grid[g]),
                          law ? law->cdf(grid[g]) : std::numeric_limits<double>::quiet_NaN(), mean, sd});
  }
  if (sc.keep_replications)
    for (std::size_t r = 0; r < R; ++r)
      frame.per_replication.emplace_back(values.begin() + std::ptrdiff_t(r * G),
                                         values.begin() + std::ptrdiff_t((r + 1) * G));
  return frame;
}

} // namespace deconv::sim
