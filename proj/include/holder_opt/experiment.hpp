#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holder_opt/config.hpp"
#include "holder_opt/core.hpp"
#include "holder_opt/problem.hpp"

namespace holder_opt {

inline constexpr std::array<double, 5> kToleranceLadder = {1.0, 0.8, 0.6, 0.4, 0.2};
inline constexpr double kSummarySlopeWindow = 0.5;

CompositeProblem build_problem(const ProblemSpec& spec, const Extras& extras);

struct RunSummary {
  std::string name;
  std::uint64_t iterations = 0;
  double final_psi_best = 0.0;
  std::optional<double> target_value;
  // Paired with kToleranceLadder; empty when the tolerance was not reached
  // or no target is known.
  std::array<std::optional<std::uint64_t>, 5> iters_to_tol{};
  std::optional<double> slope;
  bool slope_approximate = false;  // gap measured against the final value
  std::uint64_t total_ls_evals = 0;
  std::uint64_t total_grad_evals = 0;
  std::uint64_t total_f_evals = 0;
  double wall_ms = 0.0;
  double r_bar_used = 0.0;
  std::optional<double> beta0_used;
  std::optional<std::uint64_t> kstar_theorem3;  // lf_agda only
  std::optional<std::uint64_t> kstar_theorem2;  // lf_agda only
  std::optional<double> psi_at_kstar;
  bool diverged = false;  // agd_fixed only
  std::optional<std::string> error;
  std::optional<std::uint64_t> error_iteration;
};

nlohmann::json to_json(const RunSummary& summary);

RunSummary summarize(const std::vector<TraceRecord>& trace, std::optional<double> target);

struct RunOutcome {
  std::vector<TraceRecord> trace;
  RunSummary summary;
};

/// Runs one configuration in memory. Solver failures are reported in
/// summary.error with the partial trace kept.
RunOutcome execute(const RunConfig& config);

/// execute() plus trace.csv and summary.json under config.output_dir.
RunOutcome run_experiment(const RunConfig& config);

/// Runs members on up to `threads` workers and writes `index.json` into
/// `index_dir` once all have finished.
nlohmann::json run_sweep(const std::vector<RunConfig>& members,
                         const std::filesystem::path& index_dir, unsigned threads);

/// HOLDER_OPT_THREADS if set and positive, else the hardware concurrency.
unsigned sweep_thread_count();

}  // namespace holder_opt
