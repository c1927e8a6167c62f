#include "tfim/tables.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfim/errors.hpp"

namespace tfim {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_table(const std::filesystem::path& file, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out(file, std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + file.string() + " for writing");
  out << '#';
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << (c ? "\t" : " ") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "\t" : "") << format_double(row[c]);
    out << '\n';
  }
  if (!out)
    throw IoError("write to " + file.string() + " failed");
}

Table read_table(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw IoError("cannot open " + file.string());
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::istringstream ss(line[0] == '#' ? line.substr(1) : line);
    if (line[0] == '#') {
      std::string name;
      while (ss >> name)
        t.columns.push_back(name);
      continue;
    }
    std::vector<double> row;
    std::string cell;
    while (ss >> cell)
      row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_json(const std::filesystem::path& file, const nlohmann::json& doc) {
  std::ofstream out(file, std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + file.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out)
    throw IoError("write to " + file.string() + " failed");
}

}  // namespace tfim
