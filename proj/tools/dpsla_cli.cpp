#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "dpsla/dpsla.h"

namespace {

int report(dpsla_status st) {
  if (st != DPSLA_OK) std::fprintf(stderr, "dpsla: %s\n", dpsla_last_error());
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed Polyak stepsize simulator"};
  app.set_version_flag("--version", std::string(dpsla_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run one configured experiment, write trace.csv and manifest.json");
  run->add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (overrides output.directory)");

  std::string which;
  std::uint64_t seed = 1;
  auto* repro = app.add_subcommand("reproduce", "Rerun a built-in experiment");
  repro->add_option("experiment", which, "divergence, main or speedup")
      ->required()
      ->check(CLI::IsMember({"divergence", "main", "speedup"}));
  repro->add_option("--out", out_dir, "Output directory");
  repro->add_option("--seed", seed, "Base seed");

  auto* oracle = app.add_subcommand("oracle", "Print x*, f* and f_i(x*) as JSON");
  oracle->add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  const char* out = out_dir.empty() ? nullptr : out_dir.c_str();
  if (*run) return report(dpsla_cmd_run(config_path.c_str(), out));
  if (*repro) return report(dpsla_cmd_reproduce(which.c_str(), out, seed));
  if (*oracle) {
    char* json = nullptr;
    const dpsla_status st = dpsla_cmd_oracle(config_path.c_str(), &json);
    if (st == DPSLA_OK) {
      std::printf("%s\n", json);
      dpsla_string_free(json);
    }
    return report(st);
  }
  return 1;
}
