#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holder_opt/core.hpp"

namespace holder_opt {

/// Column order of trace CSV files.
inline constexpr const char* kTraceHeader =
    "iter,psi_y,psi_best,gap,beta,r_bar,A,tau,ls_stage1,ls_stage2,f_evals,grad_evals,"
    "stoch_grad_evals,prox_evals,wall_ms";

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceRow {
  TraceRecord record;
  std::optional<double> gap;

  bool operator==(const TraceRow&) const = default;
};

// gap = psi_best - target per row when a target is given, empty otherwise.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace,
                     std::optional<double> target);
std::vector<TraceRow> read_trace_csv(std::istream& in);

}  // namespace holder_opt
