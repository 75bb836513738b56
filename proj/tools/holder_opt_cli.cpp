#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "holder_opt/config.hpp"
#include "holder_opt/experiment.hpp"
#include "holder_opt/slope.hpp"
#include "holder_opt/trace_io.hpp"

using nlohmann::json;
using namespace holder_opt;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::uint64_t> max_iters;
};

int fail(const std::string& kind, const std::string& message, json details = nullptr) {
  json err{{"error", kind}, {"message", message}};
  if (!details.is_null()) err["details"] = std::move(details);
  std::cerr << err.dump() << "\n";
  return kind == "usage" ? 2 : 1;
}

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

void apply(const Overrides& o, json& doc) {
  if (!doc.is_object()) return;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.out) doc["output_dir"] = *o.out;
  if (o.max_iters) doc["max_iters"] = *o.max_iters;
}

int cmd_run(const std::string& path, const Overrides& o) {
  json doc = load_document(path);
  apply(o, doc);
  const RunConfig cfg = parse_config(doc);
  const RunOutcome outcome = run_experiment(cfg);
  const json summary = to_json(outcome.summary);
  std::cout << summary.dump(2) << "\n";
  if (outcome.summary.error)
    return fail("solver", *outcome.summary.error,
                {{"iteration", summary["error_iteration"]},
                 {"output_dir", cfg.output_dir.string()}});
  return 0;
}

int cmd_sweep(const std::string& path, const Overrides& o) {
  json doc = load_document(path);
  apply(o, doc);
  const std::vector<RunConfig> members = expand_sweep(doc);
  const std::string base = doc.value("output_dir", std::string("out"));
  const json index = run_sweep(members, base, sweep_thread_count());
  json failed = json::array();
  for (const auto& m : index["members"]) {
    if (m.contains("error"))
      failed.push_back({{"name", m["name"]}, {"message", m["error"]}});
    else if (!m["summary"]["error"].is_null())
      failed.push_back({{"name", m["name"]},
                        {"message", m["summary"]["error"]},
                        {"iteration", m["summary"]["error_iteration"]}});
  }
  std::cout << json{{"members", members.size()}, {"index", (std::filesystem::path(base) / "index.json").string()}}
                   .dump(2)
            << "\n";
  if (!failed.empty()) return fail("sweep", std::to_string(failed.size()) + " member run(s) failed", failed);
  return 0;
}

int cmd_validate(const std::string& path, const Overrides& o) {
  json doc = load_document(path);
  apply(o, doc);
  bool is_sweep = false;
  for (const auto& [key, value] : doc.items())
    if (value.is_array()) is_sweep = true;
  if (is_sweep) {
    const auto members = expand_sweep(doc);
    json out = json::array();
    for (const auto& m : members) out.push_back(to_json(m));
    std::cout << json{{"valid", true}, {"members", out}}.dump(2) << "\n";
  } else {
    std::cout << json{{"valid", true}, {"config", to_json(parse_config(doc))}}.dump(2) << "\n";
  }
  return 0;
}

int cmd_slope(const std::string& path, double window) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const auto rows = read_trace_csv(in);
  if (rows.empty()) throw SlopeError("slope: trace has no records");
  bool have_gap = true;
  for (const auto& r : rows) have_gap = have_gap && r.gap.has_value();
  std::vector<GapPoint> points;
  const double final_value = rows.back().record.psi_best;
  for (const auto& r : rows)
    points.push_back({static_cast<double>(r.record.iter),
                      have_gap ? *r.gap : r.record.psi_best - final_value});
  const double slope = estimate_slope(points, window);
  std::cout << json{{"slope", slope}, {"approximate", !have_gap}, {"window", window}}.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-free accelerated gradient experiments"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_path;
  std::string trace_path;
  double window = kSummarySlopeWindow;

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration JSON")->required();
    sub->add_option("--seed", o.seed, "override the run seed");
    sub->add_option("--out", o.out, "override output_dir");
    sub->add_option("--max-iters", o.max_iters, "override max_iters");
  };
  CLI::App* run = app.add_subcommand("run", "run one configuration");
  add_overrides(run);
  CLI::App* sweep = app.add_subcommand("sweep", "expand list-valued fields and run every member");
  add_overrides(sweep);
  CLI::App* validate = app.add_subcommand("validate", "check a configuration without running it");
  add_overrides(validate);
  CLI::App* slope = app.add_subcommand("slope", "log-log slope of a trace CSV");
  slope->add_option("trace", trace_path, "trace CSV")->required();
  slope->add_option("--window", window, "trailing fraction of records")->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (run->parsed()) return cmd_run(config_path, o);
    if (sweep->parsed()) return cmd_sweep(config_path, o);
    if (validate->parsed()) return cmd_validate(config_path, o);
    return cmd_slope(trace_path, window);
  } catch (const ConfigError& e) {
    return fail("config", e.what(), e.errors());
  } catch (const json::exception& e) {
    return fail("json", e.what());
  } catch (const std::exception& e) {
    return fail("runtime", e.what());
  }
}
