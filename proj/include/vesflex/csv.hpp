#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace vesflex::csv {

/// Numeric table with a header row. Empty fields parse as NaN.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;
};

/// Parses a numeric CSV; throws InputError naming the offending line.
/// `expected_header`, when non-empty, must match exactly.
Table read(std::istream& in, const std::vector<std::string>& expected_header = {});
Table read_file(const std::string& path, const std::vector<std::string>& expected_header = {});

/// Shortest representation that parses back to the identical double.
std::string format_number(double v);

void write(std::ostream& out, const Table& table);
void write_file(const std::string& path, const Table& table);

/// Checks that column `t` starts at 0 and is uniformly spaced; returns dt.
double uniform_step(const std::vector<double>& t, double tol = 1e-9);

}  // namespace vesflex::csv
