#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpsla/numerics.hpp"
#include "dpsla/problem.hpp"

namespace dpsla {

struct RunTrace;

/// Sum is Σ f_i; Average divides both terms by n.
enum class ResidualForm { Sum, Average };

/// f(x̄) − f(x*) with x̄ the mean of `xs`. Throws if the instance has no oracle.
double residual(const ProblemInstance& inst, const std::vector<Vec>& xs, ResidualForm form = ResidualForm::Sum);

/// (1/n) Σ_i ‖x_i − x̄‖
double consensus_error(const std::vector<Vec>& xs);

Vec mean(const std::vector<Vec>& xs);

struct MetricRow {
  std::int64_t k = 0;
  double residual = 0.0;
  double consensus_error = 0.0;
  std::vector<double> alpha;
  std::vector<double> level;
  std::vector<double> level_gap;  // f_i(x*) − level_i
  bool diverged = false;
};

std::vector<MetricRow> metric_rows(const RunTrace& trace);

/// Header `k,residual,consensus_error,alpha_0..,level_0..,diverged`, one row
/// per recorded iteration, reals at 17 significant digits.
std::string format_csv(const RunTrace& trace);
void write_csv(const RunTrace& trace, const std::string& path);

/// `k,gap_0..gap_{n-1}` (f_i(x*) − level).
std::string format_level_gap_csv(const RunTrace& trace);
/// `k,alpha_0..alpha_{n-1}`
std::string format_stepsize_csv(const RunTrace& trace);

/// Formats a real the way every CSV here does (17 significant digits,
/// clipped to ±1e12, "nan" for missing values).
std::string format_real(double v);

/// Writes `contents` to `path` via a temporary file and rename.
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace dpsla
