#include "ako/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace ako {

namespace {

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(cell.c_str(), &end);
  return errno == 0 && end == cell.c_str() + cell.size();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvIoError("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  size_t width = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    size_t bad_col = 0;
    for (size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], row[c])) {
        numeric = false;
        bad_col = c;
        break;
      }
    }
    if (!numeric) {
      if (first_data_row) continue;  // header row
      throw CsvError(path + ": non-numeric cell at row " +
                     std::to_string(line_no) + ", column " +
                     std::to_string(bad_col + 1));
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw CsvError(path + ": ragged row " + std::to_string(line_no) +
                     " has " + std::to_string(row.size()) + " cells, expected " +
                     std::to_string(width));
    }
    first_data_row = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError(path + ": no numeric rows");

  Matrix m(rows.size(), width);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
  return m;
}

Vector read_csv_vector(const std::string& path) {
  Matrix m = read_csv_matrix(path);
  if (m.cols() != 1)
    throw CsvError(path + ": expected a single column, found " +
                   std::to_string(m.cols()));
  return m.col(0);
}

namespace {

void write_rows(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw CsvIoError("cannot write file: " + path);
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw CsvIoError("write failed: " + path);
}

}  // namespace

void write_csv_matrix(const std::string& path, const Matrix& m) {
  write_rows(path, m);
}

void write_csv_vector(const std::string& path, const Vector& v) {
  write_rows(path, v);
}

}  // namespace ako
