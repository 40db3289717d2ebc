#include "dpsla/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dpsla/engine.hpp"
#include "dpsla/error.hpp"

namespace dpsla {

Vec mean(const std::vector<Vec>& xs) {
  if (xs.empty()) fail(ErrorCode::InvalidArgument, "mean: no states");
  Vec m(xs[0].size());
  for (const auto& x : xs) {
    if (x.size() != m.size()) fail(ErrorCode::Dimension, "mean: state dimensions differ");
    m += x;
  }
  m *= 1.0 / static_cast<double>(xs.size());
  return m;
}

double residual(const ProblemInstance& inst, const std::vector<Vec>& xs, ResidualForm form) {
  if (!inst.optimum) fail(ErrorCode::InvalidArgument, "residual: instance has no reference optimum");
  const double r = inst.total(mean(xs)) - inst.optimum->f_star;
  return form == ResidualForm::Sum ? r : r / static_cast<double>(inst.n_agents());
}

double consensus_error(const std::vector<Vec>& xs) {
  const Vec m = mean(xs);
  double s = 0.0;
  for (const auto& x : xs) s += norm(x - m);
  return s / static_cast<double>(xs.size());
}

std::vector<MetricRow> metric_rows(const RunTrace& trace) {
  std::vector<MetricRow> out;
  out.reserve(trace.rows.size());
  for (const auto& r : trace.rows) {
    MetricRow m;
    m.k = r.k;
    m.residual = r.residual;
    m.consensus_error = r.consensus_error;
    m.alpha = r.alpha;
    m.level = r.level;
    m.level_gap.resize(r.level.size(), std::numeric_limits<double>::quiet_NaN());
    if (trace.oracle)
      for (std::size_t i = 0; i < r.level.size(); ++i) m.level_gap[i] = trace.oracle->local_values[i] - r.level[i];
    m.diverged = r.diverged;
    out.push_back(std::move(m));
  }
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  v = std::clamp(v, -1e12, 1e12);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string indexed_header(const char* prefix, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += std::string(",") + prefix + std::to_string(i);
  return s;
}

}  // namespace

std::string format_csv(const RunTrace& trace) {
  const std::size_t n = trace.n_agents;
  std::string s = "k,residual,consensus_error" + indexed_header("alpha_", n) + indexed_header("level_", n) + ",diverged\n";
  for (const auto& r : trace.rows) {
    s += std::to_string(r.k) + "," + format_real(r.residual) + "," + format_real(r.consensus_error);
    for (double a : r.alpha) s += "," + format_real(a);
    for (double l : r.level) s += "," + format_real(l);
    s += r.diverged ? ",1\n" : ",0\n";
  }
  return s;
}

void write_csv(const RunTrace& trace, const std::string& path) { write_text_file(path, format_csv(trace)); }

std::string format_level_gap_csv(const RunTrace& trace) {
  std::string s = "k" + indexed_header("gap_", trace.n_agents) + "\n";
  for (const auto& m : metric_rows(trace)) {
    s += std::to_string(m.k);
    for (double g : m.level_gap) s += "," + format_real(g);
    s += "\n";
  }
  return s;
}

std::string format_stepsize_csv(const RunTrace& trace) {
  std::string s = "k" + indexed_header("alpha_", trace.n_agents) + "\n";
  for (const auto& r : trace.rows) {
    s += std::to_string(r.k);
    for (double a : r.alpha) s += "," + format_real(a);
    s += "\n";
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) fail(ErrorCode::Io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::Io, "cannot rename into " + target.string());
  }
}

}  // namespace dpsla
