#include "holder_opt/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "holder_opt/numfmt.hpp"

namespace holder_opt {

LibsvmParseError::LibsvmParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("libsvm line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Entry {
  std::size_t index;  // 0-based
  double value;
};

struct Row {
  double label;
  std::vector<Entry> entries;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

double parse_token_real(std::string_view token, std::size_t line, std::size_t column) {
  const std::string_view original = token;
  if (token.size() > 1 && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
    throw LibsvmParseError(line, column, "non-numeric token '" + std::string(original) + "'");
  return value;
}

Row parse_line(std::string_view text, std::size_t line) {
  Row row{};
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    if (pos >= text.size()) break;
    const std::size_t start = pos;
    while (pos < text.size() && !is_space(text[pos])) ++pos;
    const std::string_view token = text.substr(start, pos - start);
    const std::size_t column = start + 1;
    if (first) {
      row.label = parse_token_real(token, line, column);
      first = false;
      continue;
    }
    const auto colon = token.find(':');
    if (colon == std::string_view::npos)
      throw LibsvmParseError(line, column, "expected index:value, got '" + std::string(token) + "'");
    const std::string_view index_text = token.substr(0, colon);
    long long index = 0;
    const auto [ptr, ec] =
        std::from_chars(index_text.data(), index_text.data() + index_text.size(), index);
    if (ec != std::errc() || ptr != index_text.data() + index_text.size())
      throw LibsvmParseError(line, column, "non-numeric index '" + std::string(index_text) + "'");
    if (index <= 0)
      throw LibsvmParseError(line, column, "index must be positive, got " + std::to_string(index));
    const double value = parse_token_real(token.substr(colon + 1), line, column + colon + 1);
    row.entries.push_back({static_cast<std::size_t>(index - 1), value});
  }
  return row;
}

}  // namespace

LibsvmData parse_libsvm(std::istream& in) {
  std::vector<Row> rows;
  std::size_t cols = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    bool blank = true;
    for (char c : text) blank = blank && is_space(c);
    if (blank) continue;
    Row row = parse_line(text, line);
    for (const auto& e : row.entries) cols = std::max(cols, e.index + 1);
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw LibsvmParseError(line, 0, "read error");

  LibsvmData data;
  const auto n = static_cast<Eigen::Index>(rows.size());
  data.A = Matrix::Zero(n, static_cast<Eigen::Index>(cols));
  data.b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    data.b[i] = rows[i].label;
    for (const auto& e : rows[i].entries) data.A(i, static_cast<Eigen::Index>(e.index)) = e.value;
  }
  if (n == 0) data.warnings.emplace_back("no samples found");
  return data;
}

LibsvmData load_libsvm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LibsvmParseError(0, 0, "cannot open '" + path.string() + "'");
  return parse_libsvm(in);
}

void write_libsvm(std::ostream& out, const Matrix& A, const Vector& b) {
  if (A.rows() != b.size()) throw DimensionError("write_libsvm: A rows must match b");
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    out << format_real(b[i]);
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (A(i, j) != 0.0) out << ' ' << (j + 1) << ':' << format_real(A(i, j));
    }
    out << '\n';
  }
}

}  // namespace holder_opt
