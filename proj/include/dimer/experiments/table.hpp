// table.hpp: CSV output with a header row and 12 significant digits.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace dimer::experiments {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument if the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

/// %.12g, with "nan", "inf" and "-inf" spelled out.
std::string format_number(double x);

void write_csv(const Table& t, std::ostream& os);
/// Creates parent directories as needed; throws std::runtime_error on I/O failure.
void write_csv(const Table& t, const std::filesystem::path& path);

}  // namespace dimer::experiments
