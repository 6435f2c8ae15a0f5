#ifndef AKO_CSV_HPP
#define AKO_CSV_HPP

#include <string>

#include "ako/linalg.hpp"

namespace ako {

// Parse failures carry row/column diagnostics in what().
struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File-system level failures (missing file, unwritable path).
struct CsvIoError : CsvError {
  using CsvError::CsvError;
};

// Rectangular numeric CSV, comma-delimited. A single leading header row of
// non-numeric labels is skipped automatically.
Matrix read_csv_matrix(const std::string& path);

// Single-column variant.
Vector read_csv_vector(const std::string& path);

// 17 significant digits so a read-back round-trips bit-exactly.
void write_csv_matrix(const std::string& path, const Matrix& m);
void write_csv_vector(const std::string& path, const Vector& v);

}  // namespace ako

#endif  // AKO_CSV_HPP
