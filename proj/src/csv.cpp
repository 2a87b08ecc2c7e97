#include "vesflex/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vesflex/core.hpp"

namespace vesflex::csv {

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i];
  }
  return s;
}

double parse_field(const std::string& f, std::size_t line_no) {
  if (f.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line_no) + ": malformed number '" + f + "'");
  }
  return v;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw InputError("missing CSV column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> Table::column_values(const std::string& name) const {
  const auto c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

Table read(std::istream& in, const std::vector<std::string>& expected_header) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      if (!expected_header.empty() && table.header != expected_header) {
        throw InputError("CSV header '" + join(table.header) + "' does not match expected '" +
                         join(expected_header) + "'");
      }
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_field(f, line_no));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError("CSV input is empty");
  return table;
}

Table read_file(const std::string& path, const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return read(in, expected_header);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write(std::ostream& out, const Table& table) {
  out << join(table.header) << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_number(row[i]);
    }
    out << '\n';
  }
}

void write_file(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write(out, table);
}

double uniform_step(const std::vector<double>& t, double tol) {
  if (t.size() < 2) throw InputError("time column needs at least two samples to infer a step");
  if (std::abs(t[0]) > tol) throw InputError("time column must start at 0, got " + format_number(t[0]));
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) throw InputError("time column must be strictly increasing");
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double expected = t[0] + static_cast<double>(k) * dt;
    if (std::abs(t[k] - expected) > tol) {
      throw InputError("time column is not uniform at row " + std::to_string(k) + " (t = " +
                       format_number(t[k]) + ", expected " + format_number(expected) + ")");
    }
  }
  return dt;
}

}  // namespace vesflex::csv
