#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace phisim::testing {

/// One column of a diagnostics CSV, by header name.
inline std::vector<double> read_column(const std::filesystem::path& csv, const std::string& name) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open " + csv.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) header.push_back(cell);
  }
  const auto idx = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  if (idx == header.size()) throw std::runtime_error(csv.string() + " has no column " + name);
  std::vector<double> out;
  while (std::getline(in, line)) {
    std::istringstream is(line);
    std::string cell;
    for (std::size_t i = 0; i <= idx; ++i) std::getline(is, cell, ',');
    out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace phisim::testing
