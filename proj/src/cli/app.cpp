#include "qsa/cli.hpp"

#include "experiments.hpp"
#include "qsa/qsgd.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>

namespace qsa {
namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

int config_failure(const std::string& path, const std::string& what, int line, int column) {
  std::cerr << "qsa-lab: " << path;
  if (line > 0) std::cerr << ":" << line << ":" << column;
  std::cerr << ": " << what << "\n";
  return kExitConfig;
}

int run_experiment(const std::string& path, const std::vector<std::string>& overrides, unsigned jobs) {
  using namespace cli;
  toml::table user;
  try {
    user = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    const auto& b = e.source().begin;
    return config_failure(path, std::string(e.description()), static_cast<int>(b.line),
                          static_cast<int>(b.column));
  }

  std::optional<Config> cfg;
  const Experiment* exp = nullptr;
  try {
    for (const auto& o : overrides) apply_override(user, o);
    const auto name = user["experiment"].value<std::string>();
    if (!name) throw ConfigError("missing required key 'experiment'");
    exp = find_experiment(*name);
    if (!exp) {
      const auto& src = user.get("experiment")->source().begin;
      throw ConfigError("unknown experiment '" + *name + "'", static_cast<int>(src.line),
                        static_cast<int>(src.column));
    }
    cfg.emplace(resolve(user, exp->schema));
  } catch (const ConfigError& e) {
    return config_failure(path, e.what(), e.line(), e.column());
  }

  std::string out_dir = cfg->str("out_dir");
  if (const char* env = std::getenv("QSA_LAB_OUT"); env && *env) out_dir = env;
  OutputDir out(out_dir);
  const auto resolved = to_json(cfg->table());
  RunContext ctx{*cfg, out, jobs};
  try {
    exp->run(ctx);
  } catch (const ConfigError& e) {
    return config_failure(path, e.what(), e.line(), e.column());
  } catch (const DivergenceError& e) {
    out.write_csv("trajectory_partial.csv", trajectory_csv(e.partial()));
    out.write_manifest(resolved, "diverged", {{"diverged_at", e.time()}, {"message", e.what()}});
    std::cerr << "qsa-lab: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const QsgdLossError& e) {
    out.write_manifest(resolved, "diverged", {{"message", e.what()}, {"point", vec_json(e.point())}});
    std::cerr << "qsa-lab: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "qsa-lab: " << e.what() << "\n";
    return kExitRuntime;
  }
  out.write_manifest(resolved, "ok");
  std::cout << "wrote " << out.path().string() << "\n";
  return 0;
}

void list_experiments() {
  std::size_t width = 0;
  for (const auto& e : cli::registry()) width = std::max(width, e.name.size());
  for (const auto& e : cli::registry())
    std::cout << std::left << std::setw(static_cast<int>(width) + 2) << e.name << e.description << "\n";
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Quasi-stochastic approximation experiments", "qsa-lab"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "run the experiment named in a TOML config");
  run->add_option("config", config, "config file")->required();
  run->add_option("--override", overrides, "dotted key=value, parsed as TOML")->allow_extra_args(false);
  run->add_option("--jobs", jobs, "worker threads for trial-level parallelism")->check(CLI::PositiveNumber);
  auto* list = app.add_subcommand("list", "print the experiment registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (list->parsed()) {
    list_experiments();
    return 0;
  }
  try {
    return run_experiment(config, overrides, jobs);
  } catch (const std::exception& e) {
    std::cerr << "qsa-lab: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace qsa
