#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deconv::sim {

struct FrameRow
{
  double xi;
  double fx_true; // NaN when not available
  double fy_true;
  double est_mean;
  double est_sd;
};

struct ResultFrame
{
  std::string scenario;
  std::size_t replications = 0;
  std::vector<FrameRow> rows;
  // per_replication[r][g], filled only on request.
  std::vector<std::vector<double>> per_replication;
};

enum class Format { csv, json };

Format parse_format(const std::string& s);

void write_csv(const ResultFrame& frame, std::ostream& os);
void write_json(const ResultFrame& frame, std::ostream& os);
void export_frame(const ResultFrame& frame, const std::string& path, Format format);

ResultFrame read_csv(std::istream& is);
ResultFrame read_json(std::istream& is);

} // namespace deconv::sim
