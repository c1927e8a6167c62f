#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace tfim {

/// Tab-separated numeric table, one '#' header line naming the columns,
/// values printed with 17 significant digits.
void write_table(const std::filesystem::path& file, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
Table read_table(const std::filesystem::path& file);

void write_json(const std::filesystem::path& file, const nlohmann::json& doc);

std::string format_double(double x);

}  // namespace tfim
