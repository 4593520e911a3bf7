#pragma once

// CSV and JSON output. Numbers are written with 17 significant digits so a
// reader recovers the exact doubles; nothing time-dependent goes into these
// payloads, which keeps reruns byte-identical.

#include <json.hpp>
#include <string>
#include <vector>

#include "opdyn/model.hpp"
#include "opdyn/path_sim.hpp"
#include "opdyn/pde_check.hpp"
#include "opdyn/stationary.hpp"
#include "opdyn/stats.hpp"

namespace opdyn::io {

using nlohmann::json;

std::string format_double(double v);

/// Columns of equal length under a header row.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// t, x, is_jump.
void write_path_csv(const std::string& path, const SamplePath& sample_path);

/// n x d row-major values as d columns x1..xd (or a single column x).
void write_samples_csv(const std::string& path, const std::vector<double>& values, std::size_t d = 1);

/// First column of a CSV; a non-numeric first line is taken as a header.
/// Throws ConfigError("sample") for unreadable or malformed files.
std::vector<double> read_sample_csv(const std::string& path);

void write_json(const std::string& path, const json& j);

json to_json(const ModelParams& p);
json to_json(const MultiAgentConfig& c);
json to_json(const ResidualReport& r);
json to_json(const stats::ComparisonReport& r);
json to_json(const stats::Summary& s);
json density_metadata(const DensitySeries& d);

}  // namespace opdyn::io
