#ifndef DPSLA_H
#define DPSLA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DPSLA_API __declspec(dllexport)
#else
#define DPSLA_API __attribute__((visibility("default")))
#endif

typedef enum dpsla_status {
  DPSLA_OK = 0,
  DPSLA_ERR_INVALID_ARGUMENT = 1,
  DPSLA_ERR_CONFIG = 2,
  DPSLA_ERR_DIMENSION = 3,
  DPSLA_ERR_NUMERIC = 4,
  DPSLA_ERR_SOLVER = 5,
  DPSLA_ERR_IO = 6,
  DPSLA_ERR_INTERNAL = 99
} dpsla_status;

typedef struct dpsla_problem dpsla_problem;
typedef struct dpsla_trace dpsla_trace;

DPSLA_API const char* dpsla_version(void);

/* Message for the last failing call on this thread, "" if none. */
DPSLA_API const char* dpsla_last_error(void);

/* Strings returned through char** are owned by the caller. */
DPSLA_API void dpsla_string_free(char* s);

/* Problems */
DPSLA_API dpsla_status dpsla_problem_from_config(const char* config_json, dpsla_problem** out);
DPSLA_API dpsla_status dpsla_problem_triangle(dpsla_problem** out);
DPSLA_API dpsla_status dpsla_problem_from_json(const char* instance_json, dpsla_problem** out);
DPSLA_API dpsla_status dpsla_problem_to_json(const dpsla_problem* p, char** out);
DPSLA_API dpsla_status dpsla_problem_edge_list(const dpsla_problem* p, char** out);
DPSLA_API dpsla_status dpsla_problem_dims(const dpsla_problem* p, size_t* n_agents, size_t* dim);
/* Solves (or returns the cached) reference optimum. x_star may be NULL;
   otherwise it must hold dim values. */
DPSLA_API dpsla_status dpsla_problem_solve_oracle(dpsla_problem* p, double* f_star, double* x_star);
DPSLA_API void dpsla_problem_free(dpsla_problem* p);

/* Runs the algorithm and run sections of `config_json` (a run config; the
   problem section is ignored) on `p`. NULL config means all defaults. */
DPSLA_API dpsla_status dpsla_run(dpsla_problem* p, const char* config_json, dpsla_trace** out);

/* Traces */
DPSLA_API dpsla_status dpsla_trace_size(const dpsla_trace* t, size_t* rows, size_t* n_agents);
DPSLA_API dpsla_status dpsla_trace_row(const dpsla_trace* t, size_t row, int64_t* k, double* residual,
                                       double* consensus_error, int* diverged);
/* alpha and level may be NULL; otherwise they must hold n_agents values. */
DPSLA_API dpsla_status dpsla_trace_agents(const dpsla_trace* t, size_t row, double* alpha, double* level);
DPSLA_API dpsla_status dpsla_trace_invariants_ok(const dpsla_trace* t, int* ok);
DPSLA_API dpsla_status dpsla_trace_csv(const dpsla_trace* t, char** out);
DPSLA_API dpsla_status dpsla_trace_write_csv(const dpsla_trace* t, const char* path);
DPSLA_API void dpsla_trace_free(dpsla_trace* t);

/* Commands. out_dir may be NULL for the default. */
DPSLA_API dpsla_status dpsla_cmd_run(const char* config_path, const char* out_dir);
DPSLA_API dpsla_status dpsla_cmd_reproduce(const char* experiment, const char* out_dir, uint64_t seed);
DPSLA_API dpsla_status dpsla_cmd_oracle(const char* config_path, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
