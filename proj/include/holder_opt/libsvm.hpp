#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "holder_opt/core.hpp"

namespace holder_opt {

class LibsvmParseError : public std::runtime_error {
 public:
  LibsvmParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct LibsvmData {
  Matrix A;  // dense, zeros for absent indices; one row per sample
  Vector b;  // labels
  std::vector<std::string> warnings;
};

// `label index:value ...` per line, 1-based indices. Blank lines are skipped.
LibsvmData parse_libsvm(std::istream& in);
LibsvmData load_libsvm(const std::filesystem::path& path);

// Writes nonzero entries only, with round-trip exact decimal values.
void write_libsvm(std::ostream& out, const Matrix& A, const Vector& b);

}  // namespace holder_opt
