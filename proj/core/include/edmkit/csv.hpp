#pragma once

// Plain numeric CSV for matrices: one row per line, comma separated, no
// header. Blank lines and lines starting with '#' are skipped.

#include "edmkit/edm_core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace edm {

Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv_file(const std::string& path);

/// All numbers of a CSV file in reading order, ignoring the row structure.
std::vector<double> read_values_csv_file(const std::string& path);

/// 17 significant digits.
void write_matrix_csv(const Matrix& m, std::ostream& out);
void write_matrix_csv_file(const Matrix& m, const std::string& path);

}  // namespace edm
