// Command-line front end: reads a JSON job, applies env and flag overrides,
// runs it and reports where the records went.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "satmodel/errors.hpp"
#include "satmodel/runner.hpp"

extern char** environ;

namespace {

std::map<std::string, std::string> environment() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    const std::string kv(*e);
    const auto eq = kv.find('=');
    if (eq != std::string::npos) env[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return env;
}

int fail(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e << '\n';
  return satmodel::kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated Moebius-power model: render, centers, criterion, levin, verify, address"};
  app.set_version_flag("--version", std::string(satmodel::kVersion));

  std::string config_path;
  std::optional<std::string> command, precision, out_dir, C, candidate, backend;
  std::optional<std::size_t> horizon, samples, levin_last;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "Overrides the config's command");
  app.add_option("--config", config_path, "JSON job file")->required()->check(CLI::ExistingFile);
  app.add_option("--precision", precision, "Working precision in bits, or auto");
  app.add_option("--horizon", horizon, "Horizon N");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads (0: all cores)");
  app.add_option("--C", C, "Model constant C > 1");
  app.add_option("--candidate", candidate, "criterion candidate kind")->check(CLI::IsMember({"theorem", "fixed", "center"}));
  app.add_option("--backend", backend, "render backend")->check(CLI::IsMember({"auto", "fast", "exact"}));
  app.add_option("--samples", samples, "verify sample count");
  app.add_option("--seed", seed, "verify RNG seed");
  app.add_option("--levin-last", levin_last, "last index of the Levin window");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  std::stringstream text;
  text << in.rdbuf();

  satmodel::JobConfig config;
  try {
    if (command) {
      // Inject before parsing so horizon defaults follow the final command.
      auto doc = nlohmann::json::parse(text.str(), nullptr, false);
      if (doc.is_object()) {
        doc["command"] = *command;
        text.str(doc.dump());
      }
    }
    config = satmodel::parse_config(text.str());
    satmodel::apply_overrides(config, satmodel::overrides_from_env(environment()));
    satmodel::Overrides flags;
    flags.precision = precision;
    flags.horizon = horizon;
    flags.out_dir = out_dir;
    flags.threads = threads;
    satmodel::apply_overrides(config, flags);
  } catch (const satmodel::ValidationError& e) {
    return fail(e.messages().empty() ? std::vector<std::string>{e.what()} : e.messages());
  }
  if (C) config.C = *C;
  if (candidate) config.candidate_kind = *candidate;
  if (backend) config.backend = *backend == "fast" ? satmodel::Backend::kFast
                               : *backend == "exact" ? satmodel::Backend::kExact
                                                     : satmodel::Backend::kAuto;
  if (samples) config.samples = *samples;
  if (seed) config.seed = *seed;
  if (levin_last) config.levin_last = *levin_last;

  const satmodel::RunResult r = satmodel::run(config);
  if (r.status == satmodel::kExitValidation && r.artifacts.empty()) return fail(r.errors);
  for (const auto& e : r.errors) std::cerr << "error: " << e << '\n';
  for (const auto& a : r.artifacts) std::cout << config.out_dir << '/' << a << '\n';
  return r.status;
}
