#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace holder_opt {

/// Field-level validation failures, one message per offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

enum class Algorithm { agda, lf_agda, dog, agd_fixed };
enum class NoiseKind { none, gaussian, row_sampling };

const char* to_string(Algorithm a);
const char* to_string(NoiseKind n);

/// Synthetic-instance descriptor or dataset reference. Every field is filled
/// in after parsing; unused ones stay empty.
struct ProblemSpec {
  std::string kind;  // softmax | matrix_game | least_squares | lp_regression | quadratic
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> d;
  std::optional<std::int64_t> m;
  std::optional<double> mu;
  std::optional<double> p;
  std::optional<double> radius;
  std::uint64_t seed = 0;
  std::optional<std::string> dataset;  // LIBSVM path, replaces n/d/seed

  bool operator==(const ProblemSpec&) const = default;
};

struct Extras {
  std::optional<double> L;  // agd_fixed
  NoiseKind noise = NoiseKind::none;
  double sigma = 0.0;
  std::int64_t batch = 1;

  bool operator==(const Extras&) const = default;
};

struct RunConfig {
  std::string name;
  ProblemSpec problem;
  Algorithm algorithm = Algorithm::agda;
  double r_bar = 1e-3;
  bool r_bar_auto = false;
  double r_guess = 1.0;  // starting guess when r_bar_auto
  std::optional<double> beta0 = 1e-3;  // empty means automatic
  std::uint64_t max_iters = 1000;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<double> target_value;
  std::filesystem::path output_dir = "out";
  bool timing = false;
  Extras extras;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config(const std::string& text);
// Fully normalized form: every field present, defaults spelled out.
nlohmann::json to_json(const RunConfig& config);

/// Expands every list-valued top-level field into the cartesian product of
/// member configs, in key order. Members get `<name>_<index>` names and
/// `<output_dir>/<member name>` output directories.
std::vector<RunConfig> expand_sweep(const nlohmann::json& doc);

}  // namespace holder_opt
