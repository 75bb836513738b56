#include "holder_opt/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace holder_opt {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid config";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

class FieldReader {
 public:
  FieldReader(const json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

  void reject_unknown(const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj_.items())
      if (!allowed.count(key)) fail(key, "unknown key");
  }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  std::optional<double> number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_number()) {
      fail(key, "must be a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      fail(key, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<double> positive(const std::string& key) {
    auto x = number(key);
    if (x && !(*x > 0.0)) {
      fail(key, "must be positive");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::int64_t> integer(const std::string& key, std::int64_t min_value) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer()) {
      fail(key, "must be an integer");
      return std::nullopt;
    }
    const auto x = v.get<std::int64_t>();
    if (x < min_value) {
      fail(key, "must be >= " + std::to_string(min_value));
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key, "must be a nonnegative integer");
      return std::nullopt;
    }
    return v.get<std::uint64_t>();
  }

  std::optional<std::string> string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_string()) {
      fail(key, "must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<bool> boolean(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) {
      fail(key, "must be a boolean");
      return std::nullopt;
    }
    return v.get<bool>();
  }

  void fail(const std::string& key, const std::string& message) {
    errors_.push_back(prefix_ + key + " " + message);
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
};

struct KindRules {
  std::set<std::string> keys;
  bool dataset_allowed;
};

const KindRules* rules_for(const std::string& kind) {
  static const KindRules softmax{{"kind", "n", "d", "mu", "seed"}, false};
  static const KindRules game{{"kind", "n", "m", "seed"}, false};
  static const KindRules lsq{{"kind", "n", "d", "radius", "seed", "dataset"}, true};
  static const KindRules lp{{"kind", "n", "d", "p", "radius", "seed", "dataset"}, true};
  static const KindRules quad{{"kind", "d", "seed"}, false};
  if (kind == "softmax") return &softmax;
  if (kind == "matrix_game") return &game;
  if (kind == "least_squares") return &lsq;
  if (kind == "lp_regression") return &lp;
  if (kind == "quadratic") return &quad;
  return nullptr;
}

ProblemSpec parse_problem(const json& obj, std::vector<std::string>& errors) {
  ProblemSpec spec;
  if (!obj.is_object()) {
    errors.emplace_back("problem must be an object");
    return spec;
  }
  FieldReader r(obj, "problem.", errors);
  const auto kind = r.string("kind");
  if (!kind) {
    if (!r.has("kind")) r.fail("kind", "is required");
    return spec;
  }
  const KindRules* rules = rules_for(*kind);
  if (!rules) {
    r.fail("kind", "must be one of softmax, matrix_game, least_squares, lp_regression, quadratic");
    return spec;
  }
  r.reject_unknown(rules->keys);
  spec.kind = *kind;
  spec.seed = r.unsigned_integer("seed").value_or(0);
  spec.dataset = r.string("dataset");

  if (spec.kind == "softmax") {
    spec.n = r.integer("n", 1).value_or(1000);
    spec.d = r.integer("d", 1).value_or(2000);
    spec.mu = r.positive("mu").value_or(0.005);
  } else if (spec.kind == "matrix_game") {
    spec.n = r.integer("n", 1).value_or(448);
    spec.m = r.integer("m", 1).value_or(64);
  } else if (spec.kind == "quadratic") {
    spec.d = r.integer("d", 1).value_or(50);
  } else {
    if (spec.dataset) {
      if (r.has("n")) r.fail("n", "cannot be combined with dataset");
      if (r.has("d")) r.fail("d", "cannot be combined with dataset");
    } else {
      spec.n = r.integer("n", 1).value_or(50);
      spec.d = r.integer("d", 1).value_or(20);
    }
    if (spec.kind == "least_squares") {
      spec.radius = r.positive("radius").value_or(10.0);
    } else {
      spec.radius = r.positive("radius");
      spec.p = r.number("p").value_or(1.5);
      if (!(*spec.p >= 1.0 && *spec.p <= 2.0)) r.fail("p", "must be in [1, 2]");
    }
  }
  return spec;
}

Extras parse_extras(const json& obj, std::vector<std::string>& errors) {
  Extras ex;
  if (!obj.is_object()) {
    errors.emplace_back("extras must be an object");
    return ex;
  }
  FieldReader r(obj, "extras.", errors);
  r.reject_unknown({"L", "noise", "sigma", "batch"});
  ex.L = r.positive("L");
  if (auto noise = r.string("noise")) {
    if (*noise == "none") ex.noise = NoiseKind::none;
    else if (*noise == "gaussian") ex.noise = NoiseKind::gaussian;
    else if (*noise == "row_sampling") ex.noise = NoiseKind::row_sampling;
    else r.fail("noise", "must be one of none, gaussian, row_sampling");
  }
  if (auto sigma = r.number("sigma")) {
    if (*sigma < 0.0) r.fail("sigma", "must be >= 0");
    else ex.sigma = *sigma;
  }
  ex.batch = r.integer("batch", 1).value_or(1);
  return ex;
}

json problem_to_json(const ProblemSpec& p) {
  json out;
  out["kind"] = p.kind;
  if (p.n) out["n"] = *p.n;
  if (p.d) out["d"] = *p.d;
  if (p.m) out["m"] = *p.m;
  if (p.mu) out["mu"] = *p.mu;
  if (p.p) out["p"] = *p.p;
  if (p.radius) out["radius"] = *p.radius;
  if (p.dataset) out["dataset"] = *p.dataset;
  else out["seed"] = p.seed;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::agda: return "agda";
    case Algorithm::lf_agda: return "lf_agda";
    case Algorithm::dog: return "dog";
    case Algorithm::agd_fixed: return "agd_fixed";
  }
  return "?";
}

const char* to_string(NoiseKind n) {
  switch (n) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::row_sampling: return "row_sampling";
  }
  return "?";
}

RunConfig parse_config(const json& doc) {
  std::vector<std::string> errors;
  RunConfig cfg;
  if (!doc.is_object()) throw ConfigError({"config must be a JSON object"});

  FieldReader r(doc, "", errors);
  r.reject_unknown({"name", "problem", "algorithm", "r_bar", "r_bar_mode", "r_guess", "beta0",
                    "max_iters", "seed", "tol", "target_value", "output_dir", "timing", "extras"});

  cfg.name = r.string("name").value_or("");
  if (!r.has("problem")) r.fail("problem", "is required");
  else cfg.problem = parse_problem(doc.at("problem"), errors);

  if (auto alg = r.string("algorithm")) {
    if (*alg == "agda") cfg.algorithm = Algorithm::agda;
    else if (*alg == "lf_agda") cfg.algorithm = Algorithm::lf_agda;
    else if (*alg == "dog") cfg.algorithm = Algorithm::dog;
    else if (*alg == "agd_fixed") cfg.algorithm = Algorithm::agd_fixed;
    else r.fail("algorithm", "must be one of agda, lf_agda, dog, agd_fixed");
  }

  if (r.has("r_bar") && doc.at("r_bar").is_string()) {
    if (doc.at("r_bar").get<std::string>() == "auto") cfg.r_bar_auto = true;
    else r.fail("r_bar", "must be a positive number or \"auto\"");
  } else if (auto rb = r.positive("r_bar")) {
    cfg.r_bar = *rb;
  }
  if (auto mode = r.string("r_bar_mode")) {
    if (*mode == "auto") cfg.r_bar_auto = true;
    else if (*mode != "fixed") r.fail("r_bar_mode", "must be \"fixed\" or \"auto\"");
  }
  cfg.r_guess = r.positive("r_guess").value_or(cfg.r_guess);

  if (r.has("beta0") && doc.at("beta0").is_string()) {
    if (doc.at("beta0").get<std::string>() == "auto") cfg.beta0.reset();
    else r.fail("beta0", "must be a positive number or \"auto\"");
  } else if (auto b0 = r.positive("beta0")) {
    cfg.beta0 = *b0;
  }

  cfg.max_iters = r.unsigned_integer("max_iters").value_or(cfg.max_iters);
  cfg.seed = r.unsigned_integer("seed").value_or(0);
  cfg.tol = r.positive("tol");
  cfg.target_value = r.number("target_value");
  if (auto dir = r.string("output_dir")) {
    if (dir->empty()) r.fail("output_dir", "must not be empty");
    else cfg.output_dir = *dir;
  }
  cfg.timing = r.boolean("timing").value_or(false);
  if (r.has("extras")) cfg.extras = parse_extras(doc.at("extras"), errors);

  if (cfg.algorithm == Algorithm::agd_fixed && !cfg.extras.L)
    errors.emplace_back("extras.L is required for agd_fixed");
  if (cfg.extras.noise == NoiseKind::row_sampling && !cfg.problem.kind.empty() &&
      cfg.problem.kind != "least_squares")
    errors.emplace_back("extras.noise row_sampling is only available for least_squares");

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json out;
  out["name"] = c.name;
  out["problem"] = problem_to_json(c.problem);
  out["algorithm"] = to_string(c.algorithm);
  out["r_bar"] = c.r_bar;
  out["r_bar_mode"] = c.r_bar_auto ? "auto" : "fixed";
  out["r_guess"] = c.r_guess;
  out["beta0"] = c.beta0 ? json(*c.beta0) : json("auto");
  out["max_iters"] = c.max_iters;
  out["seed"] = c.seed;
  out["tol"] = c.tol ? json(*c.tol) : json(nullptr);
  out["target_value"] = c.target_value ? json(*c.target_value) : json(nullptr);
  out["output_dir"] = c.output_dir.string();
  out["timing"] = c.timing;
  json ex;
  ex["L"] = c.extras.L ? json(*c.extras.L) : json(nullptr);
  ex["noise"] = to_string(c.extras.noise);
  ex["sigma"] = c.extras.sigma;
  ex["batch"] = c.extras.batch;
  out["extras"] = ex;
  return out;
}

std::vector<RunConfig> expand_sweep(const json& doc) {
  if (!doc.is_object()) throw ConfigError({"config must be a JSON object"});
  std::vector<json> members{doc};
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_array()) continue;
    if (value.empty()) throw ConfigError({key + " sweep list must not be empty"});
    std::vector<json> next;
    next.reserve(members.size() * value.size());
    for (const auto& base : members) {
      for (const auto& choice : value) {
        json m = base;
        m[key] = choice;
        next.push_back(std::move(m));
      }
    }
    members = std::move(next);
  }

  const std::string base_name = doc.value("name", std::string("run"));
  const std::filesystem::path base_dir =
      doc.contains("output_dir") && doc.at("output_dir").is_string()
          ? std::filesystem::path(doc.at("output_dir").get<std::string>())
          : std::filesystem::path("out");
  std::vector<RunConfig> configs;
  configs.reserve(members.size());
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < members.size(); ++i) {
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_%03zu", i);
    json m = members[i];
    m["name"] = (base_name.empty() ? std::string("run") : base_name) + suffix;
    m["output_dir"] = (base_dir / m["name"].get<std::string>()).string();
    try {
      configs.push_back(parse_config(m));
    } catch (const ConfigError& e) {
      for (const auto& msg : e.errors()) errors.push_back("member " + std::to_string(i) + ": " + msg);
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return configs;
}

}  // namespace holder_opt
