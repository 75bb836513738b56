#include "holder_opt/trace_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

#include "holder_opt/numfmt.hpp"

namespace holder_opt {

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace,
                     std::optional<double> target) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.iter << ',' << format_real(r.psi_y) << ',' << format_real(r.psi_best) << ',';
    if (target) out << format_real(r.psi_best - *target);
    out << ',' << format_real(r.beta) << ',' << format_real(r.r_bar) << ',' << format_real(r.A)
        << ',' << format_real(r.tau) << ',' << r.ls_stage1 << ',' << r.ls_stage2 << ','
        << r.counters.f_evals << ',' << r.counters.grad_evals << ','
        << r.counters.stoch_grad_evals << ',' << r.counters.prox_evals << ','
        << format_real(r.wall_ms) << '\n';
  }
}

namespace {

constexpr std::size_t kColumns = 15;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double real_field(std::string_view text, std::size_t line, const char* column) {
  const auto value = parse_real(text);
  if (!value)
    throw TraceFormatError("trace line " + std::to_string(line) + ": bad value in column " + column);
  return *value;
}

std::uint64_t count_field(std::string_view text, std::size_t line, const char* column) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw TraceFormatError("trace line " + std::to_string(line) + ": bad count in column " + column);
  return value;
}

}  // namespace

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw TraceFormatError("trace: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw TraceFormatError("trace: unexpected header '" + line + "'");

  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != kColumns)
      throw TraceFormatError("trace line " + std::to_string(lineno) + ": expected " +
                             std::to_string(kColumns) + " fields, got " + std::to_string(f.size()));
    TraceRow row;
    auto& r = row.record;
    r.iter = count_field(f[0], lineno, "iter");
    r.psi_y = real_field(f[1], lineno, "psi_y");
    r.psi_best = real_field(f[2], lineno, "psi_best");
    if (!f[3].empty()) row.gap = real_field(f[3], lineno, "gap");
    r.beta = real_field(f[4], lineno, "beta");
    r.r_bar = real_field(f[5], lineno, "r_bar");
    r.A = real_field(f[6], lineno, "A");
    r.tau = real_field(f[7], lineno, "tau");
    r.ls_stage1 = count_field(f[8], lineno, "ls_stage1");
    r.ls_stage2 = count_field(f[9], lineno, "ls_stage2");
    r.counters.f_evals = count_field(f[10], lineno, "f_evals");
    r.counters.grad_evals = count_field(f[11], lineno, "grad_evals");
    r.counters.stoch_grad_evals = count_field(f[12], lineno, "stoch_grad_evals");
    r.counters.prox_evals = count_field(f[13], lineno, "prox_evals");
    r.wall_ms = real_field(f[14], lineno, "wall_ms");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace holder_opt
