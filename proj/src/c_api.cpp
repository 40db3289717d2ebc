#include "dpsla/dpsla.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "dpsla/config.hpp"
#include "dpsla/error.hpp"
#include "dpsla/experiments.hpp"

struct dpsla_problem {
  dpsla::ProblemInstance inst;
};

struct dpsla_trace {
  dpsla::RunTrace trace;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
dpsla_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DPSLA_OK;
  } catch (const dpsla::Error& e) {
    g_last_error = e.what();
    return static_cast<dpsla_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DPSLA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DPSLA_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DPSLA_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) dpsla::fail(dpsla::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const dpsla::TraceRow& row_at(const dpsla_trace* t, size_t row) {
  need(t, "trace");
  if (row >= t->trace.rows.size()) dpsla::fail(dpsla::ErrorCode::InvalidArgument, "row index out of range");
  return t->trace.rows[row];
}

}  // namespace

extern "C" {

const char* dpsla_version(void) { return "0.1.0"; }

const char* dpsla_last_error(void) { return g_last_error.c_str(); }

void dpsla_string_free(char* s) { delete[] s; }

dpsla_status dpsla_problem_from_config(const char* config_json, dpsla_problem** out) {
  return guarded([&] {
    need(config_json, "config_json");
    need(out, "out");
    *out = new dpsla_problem{dpsla::build_instance(dpsla::parse_config(config_json))};
  });
}

dpsla_status dpsla_problem_triangle(dpsla_problem** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dpsla_problem{dpsla::gen_triangle_demo()};
  });
}

dpsla_status dpsla_problem_from_json(const char* instance_json, dpsla_problem** out) {
  return guarded([&] {
    need(instance_json, "instance_json");
    need(out, "out");
    *out = new dpsla_problem{dpsla::instance_from_json(instance_json)};
  });
}

dpsla_status dpsla_problem_to_json(const dpsla_problem* p, char** out) {
  return guarded([&] {
    need(p, "problem");
    need(out, "out");
    *out = dup(dpsla::instance_to_json(p->inst));
  });
}

dpsla_status dpsla_problem_edge_list(const dpsla_problem* p, char** out) {
  return guarded([&] {
    need(p, "problem");
    need(out, "out");
    *out = dup(p->inst.graph.to_edge_list());
  });
}

dpsla_status dpsla_problem_dims(const dpsla_problem* p, size_t* n_agents, size_t* dim) {
  return guarded([&] {
    need(p, "problem");
    if (n_agents) *n_agents = p->inst.n_agents();
    if (dim) *dim = p->inst.dim();
  });
}

dpsla_status dpsla_problem_solve_oracle(dpsla_problem* p, double* f_star, double* x_star) {
  return guarded([&] {
    need(p, "problem");
    const dpsla::OracleResult& o = dpsla::ensure_oracle(p->inst);
    if (f_star) *f_star = o.f_star;
    if (x_star)
      for (std::size_t j = 0; j < o.x_star.size(); ++j) x_star[j] = o.x_star[j];
  });
}

void dpsla_problem_free(dpsla_problem* p) { delete p; }

dpsla_status dpsla_run(dpsla_problem* p, const char* config_json, dpsla_trace** out) {
  return guarded([&] {
    need(p, "problem");
    need(out, "out");
    const dpsla::RunConfig cfg = config_json ? dpsla::parse_config(config_json) : dpsla::RunConfig{};
    const auto& lv = cfg.algorithm.level_init;
    if (lv.size() != 1 && lv.size() != p->inst.n_agents())
      dpsla::fail(dpsla::ErrorCode::Config, "config: algorithm.level_init: need one value or one per agent");
    dpsla::ensure_oracle(p->inst);
    auto t = std::make_unique<dpsla_trace>();
    t->trace = dpsla::run(p->inst, cfg.algorithm_spec(), cfg.run_options());
    t->trace.config_hash = dpsla::config_hash(cfg);
    *out = t.release();
  });
}

dpsla_status dpsla_trace_size(const dpsla_trace* t, size_t* rows, size_t* n_agents) {
  return guarded([&] {
    need(t, "trace");
    if (rows) *rows = t->trace.rows.size();
    if (n_agents) *n_agents = t->trace.n_agents;
  });
}

dpsla_status dpsla_trace_row(const dpsla_trace* t, size_t row, int64_t* k, double* residual,
                             double* consensus_error, int* diverged) {
  return guarded([&] {
    const dpsla::TraceRow& r = row_at(t, row);
    if (k) *k = r.k;
    if (residual) *residual = r.residual;
    if (consensus_error) *consensus_error = r.consensus_error;
    if (diverged) *diverged = r.diverged ? 1 : 0;
  });
}

dpsla_status dpsla_trace_agents(const dpsla_trace* t, size_t row, double* alpha, double* level) {
  return guarded([&] {
    const dpsla::TraceRow& r = row_at(t, row);
    if (alpha) std::copy(r.alpha.begin(), r.alpha.end(), alpha);
    if (level) std::copy(r.level.begin(), r.level.end(), level);
  });
}

dpsla_status dpsla_trace_invariants_ok(const dpsla_trace* t, int* ok) {
  return guarded([&] {
    need(t, "trace");
    need(ok, "ok");
    *ok = t->trace.invariants.ok() ? 1 : 0;
  });
}

dpsla_status dpsla_trace_csv(const dpsla_trace* t, char** out) {
  return guarded([&] {
    need(t, "trace");
    need(out, "out");
    *out = dup(dpsla::format_csv(t->trace));
  });
}

dpsla_status dpsla_trace_write_csv(const dpsla_trace* t, const char* path) {
  return guarded([&] {
    need(t, "trace");
    need(path, "path");
    dpsla::write_csv(t->trace, path);
  });
}

void dpsla_trace_free(dpsla_trace* t) { delete t; }

dpsla_status dpsla_cmd_run(const char* config_path, const char* out_dir) {
  return guarded([&] {
    need(config_path, "config_path");
    std::optional<std::string> out;
    if (out_dir) out = out_dir;
    dpsla::cmd_run_file(config_path, out);
  });
}

dpsla_status dpsla_cmd_reproduce(const char* experiment, const char* out_dir, uint64_t seed) {
  return guarded([&] {
    need(experiment, "experiment");
    dpsla::ReproduceOptions opts;
    if (out_dir) opts.out_dir = out_dir;
    opts.seed = seed;
    dpsla::cmd_reproduce(dpsla::parse_experiment(experiment), opts);
  });
}

dpsla_status dpsla_cmd_oracle(const char* config_path, char** out_json) {
  return guarded([&] {
    need(config_path, "config_path");
    need(out_json, "out_json");
    *out_json = dup(dpsla::cmd_oracle(dpsla::load_config(config_path)));
  });
}

}  // extern "C"
