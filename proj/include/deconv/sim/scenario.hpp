#pragma once

#include "deconv/neumann_deconv.hpp"
#include "deconv/sim/distributions.hpp"
#include "deconv/sim/result_frame.hpp"

#include <json.hpp>

namespace deconv::sim {

enum class EstimatorKind { cor1, cor2, cor3, neumann };
enum class Source { sample, exact };

struct EstimatorSpec
{
  EstimatorKind kind = EstimatorKind::cor3;
  // exact: apply the deconvolution to the true law of Y instead of simulated samples.
  Source source = Source::sample;
  std::int64_t m = 15;
  std::optional<SignedMixture> eta;
  std::optional<double> s;
  std::optional<double> sigma;
};

struct GridSpec
{
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> points() const;
};

struct Scenario
{
  std::string name;
  Distribution target;
  Distribution noise;
  EstimatorSpec estimator;
  std::size_t n = 1;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  GridSpec grid;
  bool keep_replications = false;
};

// Parses and validates estimator/family compatibility.
Scenario parse_scenario(const nlohmann::json& doc);
nlohmann::json load_json_file(const std::string& path);

// "a.b.c=value"; value is read as JSON when it parses, as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

NoiseModel noise_model(const Distribution& noise);

ResultFrame run_scenario(const Scenario& s);

} // namespace deconv::sim
