#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpsla/config.hpp"

namespace dpsla {

/// Name of the environment variable that, when set, roots every relative
/// output directory.
inline constexpr const char* kOutputRootEnv = "DPSLA_OUTPUT_ROOT";

/// `dir` resolved against $DPSLA_OUTPUT_ROOT when that is set and `dir` is
/// relative.
std::string resolve_output_dir(const std::string& dir);

/// Runs the configured experiment and writes trace.csv and manifest.json into
/// the output directory. Everything is computed before the first file is
/// written; returns the directory used.
std::string cmd_run(const RunConfig& cfg, const std::optional<std::string>& out_dir = std::nullopt);
std::string cmd_run_file(const std::string& config_path, const std::optional<std::string>& out_dir = std::nullopt);

enum class Experiment { Divergence, Main, Speedup };
Experiment parse_experiment(const std::string& name);

struct ReproduceOptions {
  std::optional<std::string> out_dir;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// divergence: dgd.csv, naive_polyak.csv.
/// main: dpsla.csv, dgd.csv, level_gap.csv, stepsize.csv.
/// speedup: speedup.csv (n,seed,gap).
/// Each also writes manifest.json. Returns the directory used.
std::string cmd_reproduce(Experiment which, const ReproduceOptions& opts = {});

/// x*, f*, f_i(x*) for the configured instance, as JSON.
std::string cmd_oracle(const RunConfig& cfg);

inline constexpr std::int64_t kDivergenceIterations = 500;
inline constexpr std::int64_t kMainIterations = 300;
inline constexpr std::int64_t kSpeedupHorizon = 600;
inline constexpr std::size_t kSpeedupSeeds = 10;
inline const std::vector<std::size_t> kSpeedupAgents{4, 8, 16, 32};

}  // namespace dpsla
