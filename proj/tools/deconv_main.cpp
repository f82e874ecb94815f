#include "deconv/operator_analysis.hpp"
#include "deconv/sim/scenario.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

using namespace deconv;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_divergence = 3;

void apply_thread_cap()
{
  const char* env = std::getenv("DECONV_THREADS");
  if (!env)
    return;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1)
    throw ValidationError("DECONV_THREADS must be a positive integer");
  omp_set_num_threads(int(std::min<long>(n, omp_get_num_procs())));
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    out.push_back(item);
  return out;
}

double to_number(const std::string& s)
{
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items)
{
  std::map<std::string, double> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ValidationError("parameter must look like key=value, got '" + item + "'");
    out[item.substr(0, eq)] = to_number(item.substr(eq + 1));
  }
  return out;
}

double param(const std::map<std::string, double>& p, const std::string& key)
{
  auto it = p.find(key);
  if (it == p.end())
    throw ValidationError("missing parameter '" + key + "'");
  return it->second;
}

ClosedFormFamily family_from(const std::string& name, const std::map<std::string, double>& p)
{
  if (name == "bernoulli")
    return family::Bernoulli{param(p, "u0"), p.count("u1") ? p.at("u1") : 1.0 - param(p, "u0")};
  if (name == "geometric")
    return family::Geometric{param(p, "u")};
  if (name == "poisson")
    return family::Poisson{param(p, "lambda")};
  if (name == "uniform") {
    double K = param(p, "K");
    if (K < 1 || K != std::floor(K))
      throw ValidationError("uniform K must be a positive integer");
    return family::Uniform{int(K), p.count("u") ? p.at("u") : 1.0 / (K + 1)};
  }
  throw ValidationError("unknown family '" + name + "' (bernoulli, geometric, poisson, uniform)");
}

// "family:k=v,k=v"; lattice weights are separated by ';'.
NoiseModel parse_noise(const std::string& text)
{
  auto colon = text.find(':');
  nlohmann::json j;
  j["family"] = text.substr(0, colon);
  if (colon != std::string::npos)
    for (const auto& item : split(text.substr(colon + 1), ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw ValidationError("noise parameter must look like key=value, got '" + item + "'");
      const auto key = item.substr(0, eq), value = item.substr(eq + 1);
      if (key == "weights") {
        j[key] = nlohmann::json::array();
        for (const auto& w : split(value, ';'))
          j[key].push_back(to_number(w));
      } else {
        j[key] = to_number(value);
      }
    }
  return sim::noise_model(sim::Distribution::from_json(j));
}

// "c@x,c@x,...": point masses c at x.
SignedMixture parse_eta(const std::string& text)
{
  std::vector<MixtureTerm> terms;
  for (const auto& item : split(text, ',')) {
    auto at = item.find('@');
    if (at == std::string::npos)
      throw ValidationError("eta term must look like coeff@location, got '" + item + "'");
    terms.push_back({to_number(item.substr(0, at)), DiracAt{to_number(item.substr(at + 1))}});
  }
  if (terms.empty())
    throw ValidationError("eta needs at least one term");
  return SignedMixture(std::move(terms));
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Deconvolution of distribution functions under additive noise"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a simulation scenario");
  std::string scenario_path, out_path, format = "csv";
  std::vector<std::string> overrides;
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_path, "Output file (default: stdout)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--override", overrides, "Override a scenario field, e.g. estimator.m=30");

  auto* gam = app.add_subcommand("gamma", "Print the inverse sequence of a noise family");
  std::string fam;
  std::vector<std::string> params;
  std::int64_t zmax = 20;
  bool closed = false;
  gam->add_option("--family", fam, "bernoulli, geometric, poisson or uniform")->required();
  gam->add_option("--params", params, "key=value pairs (bernoulli: u0[,u1]; geometric: u; poisson: lambda; "
                                      "uniform: K[,u])");
  gam->add_option("--zmax", zmax, "Last index")->check(CLI::Range(std::int64_t(0), std::int64_t(100000)));
  gam->add_flag("--closed-form", closed, "Use the closed form instead of the recurrence");

  auto* inv = app.add_subcommand("check-invertibility", "Total variation of delta_0 - eta * noise");
  std::string eta_text = "default", noise_text;
  inv->add_option("--eta", eta_text, "Point masses coeff@location, comma separated (default: canonical eta)");
  inv->add_option("--noise", noise_text, "family:key=value,...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_validation;
  }

  try {
    apply_thread_cap();
    if (*run) {
      auto doc = sim::load_json_file(scenario_path);
      for (const auto& o : overrides)
        sim::apply_override(doc, o);
      sim::Scenario sc;
      try {
        sc = sim::parse_scenario(doc);
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
      }
      auto frame = sim::run_scenario(sc);
      auto fmt = sim::parse_format(format);
      if (out_path.empty()) {
        if (fmt == sim::Format::csv)
          sim::write_csv(frame, std::cout);
        else
          sim::write_json(frame, std::cout);
      } else {
        sim::export_frame(frame, out_path, fmt);
      }
    } else if (*gam) {
      auto f = family_from(fam, parse_params(params));
      auto g = closed ? closed_form_gamma(f, zmax) : gamma(family_sequence(f, zmax), zmax);
      std::printf("z,gamma\n");
      for (std::int64_t z = 0; z <= zmax; ++z)
        std::printf("%lld,%.17g\n", static_cast<long long>(z), g(z).real());
    } else if (*inv) {
      auto noise = parse_noise(noise_text);
      auto eta = eta_text == "default" ? default_eta(noise) : parse_eta(eta_text);
      auto rep = tv_of_pi(eta, noise);
      std::printf("tv,%.17g\natom_overlap,%.17g\njordan_case,%s\ninvertible,%s\n", rep.tv, rep.atom_overlap,
                  to_string(rep.jordan_case), rep.invertible_sufficient ? "true" : "false");
    }
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return exit_divergence;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const SingularLeadingCoefficient& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
