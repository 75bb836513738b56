#include "holder_opt/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "holder_opt/agda.hpp"
#include "holder_opt/baselines.hpp"
#include "holder_opt/init.hpp"
#include "holder_opt/lf_agda.hpp"
#include "holder_opt/libsvm.hpp"
#include "holder_opt/numfmt.hpp"
#include "holder_opt/problems.hpp"
#include "holder_opt/slope.hpp"
#include "holder_opt/solver.hpp"
#include "holder_opt/trace_io.hpp"

namespace holder_opt {

using nlohmann::json;

namespace {

// Stream ids of the run-level generators, kept apart from solver streams.
constexpr std::uint64_t kInitStream = 0x1A17;

RegressionData regression_data(const ProblemSpec& spec) {
  if (spec.dataset) {
    LibsvmData data = load_libsvm(*spec.dataset);
    if (data.A.rows() == 0 || data.A.cols() == 0)
      throw std::runtime_error("dataset '" + *spec.dataset + "' has no samples");
    return {std::move(data.A), std::move(data.b)};
  }
  return make_regression_data(*spec.n, *spec.d, spec.seed);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

CompositeProblem build_problem(const ProblemSpec& spec, const Extras& extras) {
  CompositeProblem problem;
  if (spec.kind == "softmax") {
    problem = make_softmax(*spec.n, *spec.d, *spec.mu, spec.seed);
  } else if (spec.kind == "matrix_game") {
    problem = make_matrix_game(*spec.n, *spec.m, spec.seed);
  } else if (spec.kind == "quadratic") {
    SeededRng rng(spec.seed);
    problem = make_quadratic(rng.uniform_vector(*spec.d, -1.0, 1.0));
  } else if (spec.kind == "least_squares") {
    RegressionData data = regression_data(spec);
    NoiseMode mode = noise::None{};
    if (extras.noise == NoiseKind::row_sampling) mode = noise::RowSampling{extras.batch};
    if (extras.noise == NoiseKind::gaussian) mode = noise::Gaussian{extras.sigma};
    return make_least_squares_ball(std::move(data.A), std::move(data.b), *spec.radius, mode);
  } else if (spec.kind == "lp_regression") {
    RegressionData data = regression_data(spec);
    problem = make_lp_regression(std::move(data.A), std::move(data.b), *spec.p, spec.radius);
  } else {
    throw std::invalid_argument("unknown problem kind '" + spec.kind + "'");
  }
  if (extras.noise == NoiseKind::gaussian) problem = with_gaussian_noise(std::move(problem), extras.sigma);
  if (extras.noise == NoiseKind::row_sampling)
    throw std::invalid_argument("row_sampling noise is only available for least_squares");
  return problem;
}

RunSummary summarize(const std::vector<TraceRecord>& trace, std::optional<double> target) {
  RunSummary s;
  if (trace.empty()) return s;
  const TraceRecord& last = trace.back();
  s.iterations = last.iter;
  s.final_psi_best = last.psi_best;
  s.target_value = target;
  for (const auto& r : trace) s.total_ls_evals += r.ls_stage1 + r.ls_stage2;
  s.total_grad_evals = last.counters.grad_evals + last.counters.stoch_grad_evals;
  s.total_f_evals = last.counters.f_evals;

  const double reference = target ? *target : last.psi_best;
  s.slope_approximate = !target;
  if (target) {
    for (std::size_t i = 0; i < kToleranceLadder.size(); ++i)
      s.iters_to_tol[i] = iterations_to_gap(trace, *target, kToleranceLadder[i]);
  }
  try {
    const auto points = gap_points(trace, reference);
    s.slope = estimate_slope(points, kSummarySlopeWindow);
  } catch (const SlopeError&) {
    s.slope.reset();
  }
  return s;
}

json to_json(const RunSummary& s) {
  json out;
  out["name"] = s.name;
  out["iterations"] = s.iterations;
  out["final_psi_best"] = s.final_psi_best;
  out["target_value"] = optional_json(s.target_value);
  out["final_gap"] = s.target_value ? json(s.final_psi_best - *s.target_value) : json(nullptr);
  json ladder = json::object();
  for (std::size_t i = 0; i < kToleranceLadder.size(); ++i)
    ladder[format_real(kToleranceLadder[i])] = optional_json(s.iters_to_tol[i]);
  out["iters_to_tol"] = ladder;
  out["slope"] = optional_json(s.slope);
  out["slope_approximate"] = s.slope_approximate;
  out["total_ls_evals"] = s.total_ls_evals;
  out["total_grad_evals"] = s.total_grad_evals;
  out["total_f_evals"] = s.total_f_evals;
  out["wall_ms"] = s.wall_ms;
  out["r_bar_used"] = s.r_bar_used;
  out["beta0_used"] = optional_json(s.beta0_used);
  out["kstar_theorem3"] = optional_json(s.kstar_theorem3);
  out["kstar_theorem2"] = optional_json(s.kstar_theorem2);
  out["psi_at_kstar"] = optional_json(s.psi_at_kstar);
  out["diverged"] = s.diverged;
  out["error"] = s.error ? json(*s.error) : json(nullptr);
  out["error_iteration"] = optional_json(s.error_iteration);
  return out;
}

RunOutcome execute(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const CompositeProblem problem = build_problem(config.problem, config.extras);
  const std::optional<double> target =
      config.target_value ? config.target_value : problem.known_min_value;
  StopRule stop{config.max_iters, target, config.tol};

  double r_bar = config.r_bar;
  std::optional<double> beta0 = config.beta0;
  SeededRng init_rng(config.seed, kInitStream);
  const bool uses_beta0 = config.algorithm == Algorithm::agda;
  if (config.r_bar_auto) {
    // With beta0 automatic too, the search probes with the default beta0.
    r_bar = init_rbar(problem, problem.x0, config.r_guess, beta0.value_or(kDefaultBeta0)).first;
  }
  if (uses_beta0 && !beta0) beta0 = init_beta0(problem, problem.x0, r_bar, std::nullopt, init_rng).first;

  RunOutcome outcome;
  RunSummary extra;
  try {
    switch (config.algorithm) {
      case Algorithm::agda: {
        AgdaOptions opt;
        opt.r_bar = r_bar;
        opt.beta0 = *beta0;
        opt.stop = stop;
        opt.timing = config.timing;
        outcome.trace = run_agda(opt, problem).trace;
        break;
      }
      case Algorithm::lf_agda: {
        LfAgdaOptions opt;
        opt.r_bar = r_bar;
        opt.seed = config.seed;
        opt.stop = stop;
        opt.timing = config.timing;
        LfAgdaRun run = run_lf_agda(opt, problem);
        outcome.trace = std::move(run.trace);
        if (run.final_state.k >= 1) {
          extra.kstar_theorem3 = run.kstar_ratio;
          extra.kstar_theorem2 = run.kstar_sqrt_ratio;
          extra.psi_at_kstar = run.psi_at_kstar;
        }
        break;
      }
      case Algorithm::dog: {
        DogOptions opt;
        opt.r_eps = r_bar;
        opt.stop = stop;
        opt.timing = config.timing;
        outcome.trace = run_dog(opt, problem);
        break;
      }
      case Algorithm::agd_fixed: {
        AgdFixedOptions opt;
        opt.L = *config.extras.L;
        opt.stop = stop;
        opt.timing = config.timing;
        AgdFixedRun run = run_agd_fixed(opt, problem);
        outcome.trace = std::move(run.trace);
        extra.diverged = run.diverged;
        break;
      }
    }
  } catch (const SolverError& e) {
    outcome.trace = e.partial_trace();
    extra.error = e.what();
    extra.error_iteration = e.iteration();
  }

  outcome.summary = summarize(outcome.trace, target);
  outcome.summary.name = config.name;
  outcome.summary.r_bar_used = r_bar;
  outcome.summary.beta0_used = uses_beta0 ? beta0 : std::nullopt;
  outcome.summary.kstar_theorem3 = extra.kstar_theorem3;
  outcome.summary.kstar_theorem2 = extra.kstar_theorem2;
  outcome.summary.psi_at_kstar = extra.psi_at_kstar;
  outcome.summary.diverged = extra.diverged;
  outcome.summary.error = extra.error;
  outcome.summary.error_iteration = extra.error_iteration;
  outcome.summary.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return outcome;
}

RunOutcome run_experiment(const RunConfig& config) {
  RunOutcome outcome = execute(config);
  std::filesystem::create_directories(config.output_dir);
  {
    std::ofstream out(config.output_dir / "trace.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace in '" + config.output_dir.string() + "'");
    write_trace_csv(out, outcome.trace, outcome.summary.target_value);
  }
  json doc = to_json(outcome.summary);
  doc["config"] = to_json(config);
  write_text(config.output_dir / "summary.json", doc.dump(2) + "\n");
  return outcome;
}

unsigned sweep_thread_count() {
  if (const char* env = std::getenv("HOLDER_OPT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

json run_sweep(const std::vector<RunConfig>& members, const std::filesystem::path& index_dir,
               unsigned threads) {
  std::vector<json> entries(members.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= members.size()) return;
      json entry;
      entry["name"] = members[i].name;
      entry["output_dir"] = members[i].output_dir.string();
      entry["config"] = to_json(members[i]);
      try {
        entry["summary"] = to_json(run_experiment(members[i]).summary);
      } catch (const std::exception& e) {
        entry["summary"] = nullptr;
        entry["error"] = e.what();
      }
      entries[i] = std::move(entry);
    }
  };
  const unsigned count =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(members.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json index;
  index["members"] = entries;
  std::filesystem::create_directories(index_dir);
  write_text(index_dir / "index.json", index.dump(2) + "\n");
  return index;
}

}  // namespace holder_opt
