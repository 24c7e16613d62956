#include "edmkit/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace edm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": cannot parse '" +
                             std::string(field) + "' as a number");
  }
  return value;
}

std::vector<std::vector<double>> read_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = body.find(',', start);
      row.push_back(parse_number(body.substr(start, comma - start), line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
  const auto rows = read_rows(in);
  if (rows.empty()) return Matrix(0, 0);
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw std::runtime_error("csv: row " + std::to_string(i + 1) + " has " +
                               std::to_string(rows[i].size()) + " fields, expected " +
                               std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix read_matrix_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_matrix_csv(in);
}

std::vector<double> read_values_csv_file(const std::string& path) {
  auto in = open_input(path);
  std::vector<double> values;
  for (const auto& row : read_rows(in)) values.insert(values.end(), row.begin(), row.end());
  return values;
}

void write_matrix_csv(const Matrix& m, std::ostream& out) {
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_matrix_csv_file(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_matrix_csv(m, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace edm
