#pragma once

// Trajectory export. Numbers use the classic locale and 17 significant digits,
// so identical runs give byte-identical files.

#include "momentflow/dynamics.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace momentflow {

std::string version();

std::string format_double(double v);

// Header "t,<names...>" then one row per sample.
void write_csv(std::ostream& out, const std::vector<std::string>& names, const std::vector<double>& t,
               const std::vector<std::vector<double>>& rows);
void write_csv(std::ostream& out, const Trajectory& tr);

// Columns in the same order as the CSV.
std::vector<std::vector<double>> trajectory_rows(const Trajectory& tr);

// Metadata block: tool version, run kind and the resolved configuration.
nlohmann::json metadata(const std::string& command, const nlohmann::json& config);

nlohmann::json trajectory_json(const Trajectory& tr);
nlohmann::json stats_json(const IntegratorStats& s);

// Dump with 17-significant-digit numbers.
std::string dump_json(const nlohmann::json& j);

void write_file(const std::string& path, const std::string& content);

}  // namespace momentflow
