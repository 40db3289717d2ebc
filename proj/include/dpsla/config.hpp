#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpsla/engine.hpp"
#include "dpsla/problem.hpp"

namespace dpsla {

struct RunConfig {
  struct Problem {
    std::string type = "paper";  // paper | triangle | file
    std::string path;            // instance JSON, type == file only
    std::size_t n_agents = 4;
    std::size_t dim = 6;
    std::size_t rows_per_agent = 2;
    std::uint64_t seed = 1;
    GraphKind graph = GraphKind::Random;
    double edge_prob = 0.5;
    X0Policy x0 = X0Policy::Center;
    bool operator==(const Problem&) const = default;
  };
  struct Algorithm {
    std::string name = "dpsla";  // dpsla | dgd | naive_polyak
    StepsizeConfig stepsize{};
    std::vector<double> level_init{-500.0};
    double dgd_scale = 2.0;
    NaiveTarget naive_target = NaiveTarget::LocalMin;
  };
  struct Run {
    std::int64_t iterations = 300;
    std::int64_t record_every = 1;
    unsigned threads = 1;
    ResidualForm residual_form = ResidualForm::Sum;
    bool operator==(const Run&) const = default;
  };
  struct Output {
    std::string directory = "out";
    bool operator==(const Output&) const = default;
  };

  Problem problem;
  Algorithm algorithm;
  Run run;
  Output output;

  AlgorithmSpec algorithm_spec() const;
  RunOptions run_options() const;
};

bool operator==(const RunConfig::Algorithm& a, const RunConfig::Algorithm& b);
bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses and validates a JSON config. Missing keys take their defaults,
/// unknown keys are rejected. Errors carry ErrorCode::Config and name the
/// offending field (or the line and column of a syntax error).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical JSON with every field spelled out; parse_config() reads it back
/// to an equal RunConfig.
std::string config_to_json(const RunConfig& cfg);

/// FNV-1a over the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Builds the instance the config describes (no oracle solved yet).
ProblemInstance build_instance(const RunConfig& cfg);

std::string read_text_file(const std::string& path);

}  // namespace dpsla
