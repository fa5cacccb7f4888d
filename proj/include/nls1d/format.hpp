#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace nls1d {

/// Fixed 17-significant-digit rendering used by every delimited output.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes a comma-separated table with '\n' line ends.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      std::span<const std::vector<double>> columns) {
  for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
  os << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << format_real(columns[j][i]);
    os << '\n';
  }
}

}  // namespace nls1d
