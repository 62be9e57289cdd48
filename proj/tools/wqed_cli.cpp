#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wqed/errors.hpp"
#include "wqed/scenarios.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  int threads = 0;
  double budget = 0.0;
};

int run(const std::string& kind, const Options& o) {
  std::ifstream is(o.config);
  if (!is) throw wqed::ValidationError("cannot open config '" + o.config + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw wqed::ValidationError("config '" + o.config + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw wqed::ValidationError("config must be a JSON object");
  if (!j.contains("scenario")) j["scenario"] = kind;
  if (j["scenario"] != kind)
    throw wqed::ValidationError("config describes scenario '" + j["scenario"].dump() + "', not '" + kind + "'");
  if (!o.out.empty()) j["output"] = o.out;
  if (o.threads > 0) j["threads"] = o.threads;
  if (o.budget > 0.0) j["budget"] = o.budget;

  wqed::ScenarioConfig cfg;
  try {
    cfg = wqed::parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw wqed::ValidationError(std::string("config: ") + e.what());
  }
  const wqed::OutputManifest m = wqed::run_scenario(cfg);
  std::cout << "run " << m.run_id << " (" << kind << ") finished in " << m.wall_clock_s << " s\n";
  for (const auto& f : m.files) std::cout << "  wrote " << f.path << " (" << f.rows << " rows)\n";
  std::cout << "  manifest " << cfg.output << "_manifest.json\n";
  if (!m.summary.empty()) std::cout << "  summary " << m.summary.dump() << "\n";
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Waveguide-QED photon transport scenarios"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wqed::library_version());
  Options opt;
  std::string chosen;
  for (const char* kind :
       {"spectrum", "g2map", "pulse-switch", "decay", "dephasing-sweep", "optimize-t0", "scaling"}) {
    CLI::App* sub = app.add_subcommand(kind, std::string("run a ") + kind + " scenario");
    sub->add_option("--config", opt.config, "scenario config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output path prefix (overrides the config)");
    sub->add_option("--threads", opt.threads, "worker threads (WQED_THREADS overrides)")->check(CLI::PositiveNumber);
    sub->add_option("--budget", opt.budget, "max projected cost, dimension x steps x N")->check(CLI::PositiveNumber);
    sub->callback([&chosen, kind] { chosen = kind; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return run(chosen, opt);
  } catch (const wqed::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const wqed::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
