#include "deconv/sim/result_frame.hpp"
#include "deconv/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace deconv::sim {

namespace {

const char* header = "xi,fx_true,fy_true,est_mean,est_sd";

std::string fmt(double x)
{
  if (std::isnan(x))
    return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json num(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

double from_json(const nlohmann::json& j)
{
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

} // namespace

Format parse_format(const std::string& s)
{
  if (s == "csv")
    return Format::csv;
  if (s == "json")
    return Format::json;
  throw ValidationError("unknown output format '" + s + "' (expected csv or json)");
}

void write_csv(const ResultFrame& frame, std::ostream& os)
{
  os << header << '\n';
  for (const auto& r : frame.rows)
    os << fmt(r.xi) << ',' << fmt(r.fx_true) << ',' << fmt(r.fy_true) << ',' << fmt(r.est_mean) << ','
       << fmt(r.est_sd) << '\n';
}

void write_json(const ResultFrame& frame, std::ostream& os)
{
  nlohmann::json j;
  j["scenario"] = frame.scenario;
  j["replications"] = frame.replications;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : frame.rows)
    j["rows"].push_back({{"xi", num(r.xi)},
                         {"fx_true", num(r.fx_true)},
                         {"fy_true", num(r.fy_true)},
                         {"est_mean", num(r.est_mean)},
                         {"est_sd", num(r.est_sd)}});
  if (!frame.per_replication.empty()) {
    auto& reps = j["per_replication"] = nlohmann::json::array();
    for (const auto& rep : frame.per_replication) {
      auto row = nlohmann::json::array();
      for (double v : rep)
        row.push_back(num(v));
      reps.push_back(std::move(row));
    }
  }
  os << j.dump(2) << '\n';
}

void export_frame(const ResultFrame& frame, const std::string& path, Format format)
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  if (format == Format::csv)
    write_csv(frame, os);
  else
    write_json(frame, os);
  os.flush();
  if (!os)
    throw std::runtime_error("write to '" + path + "' failed");
}

ResultFrame read_csv(std::istream& is)
{
  ResultFrame frame;
  std::string line;
  if (!std::getline(is, line) || line != header)
    throw ValidationError("result csv: missing header");
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    std::stringstream ss(line);
    std::string cell;
    double v[5];
    for (double& x : v) {
      if (!std::getline(ss, cell, ','))
        throw ValidationError("result csv: short row");
      x = std::strtod(cell.c_str(), nullptr);
    }
    frame.rows.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  return frame;
}

ResultFrame read_json(std::istream& is)
{
  nlohmann::json j = nlohmann::json::parse(is);
  ResultFrame frame;
  frame.scenario = j.value("scenario", "");
  frame.replications = j.value("replications", std::size_t(0));
  for (const auto& r : j.at("rows"))
    frame.rows.push_back({from_json(r.at("xi")), from_json(r.at("fx_true")), from_json(r.at("fy_true")),
                          from_json(r.at("est_mean")), from_json(r.at("est_sd"))});
  if (j.contains("per_replication"))
    for (const auto& rep : j.at("per_replication")) {
      std::vector<double> v;
      for (const auto& x : rep)
        v.push_back(from_json(x));
      frame.per_replication.push_back(std::move(v));
    }
  return frame;
}

} // namespace deconv::sim
