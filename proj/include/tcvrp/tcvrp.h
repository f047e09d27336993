/* C interface to the TCVRP toolkit. Every function that can fail returns a
 * tcvrp_status; tcvrp_last_error() then describes the failure. Handles are
 * opaque and owned by the caller until passed to the matching _free. */
#ifndef TCVRP_TCVRP_H
#define TCVRP_TCVRP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TCVRP_API __declspec(dllexport)
#else
#define TCVRP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tcvrp_status {
  TCVRP_OK = 0,
  TCVRP_ERR_INPUT = 1,      /* malformed or invalid input */
  TCVRP_ERR_INFEASIBLE = 2, /* proven infeasible */
  TCVRP_ERR_TIMEOUT = 3,    /* time limit reached without a solution */
  TCVRP_ERR_IO = 4,
  TCVRP_ERR_INTERNAL = 5
} tcvrp_status;

typedef struct tcvrp_instance tcvrp_instance;
typedef struct tcvrp_solution tcvrp_solution;

TCVRP_API const char* tcvrp_version(void);

/* Message of the last failure on the calling thread; empty after success. */
TCVRP_API const char* tcvrp_last_error(void);

/* Frees strings returned through char** out-parameters. */
TCVRP_API void tcvrp_string_free(char* s);

TCVRP_API tcvrp_status tcvrp_instance_read(const char* path, tcvrp_instance** out);
TCVRP_API tcvrp_status tcvrp_instance_from_json(const char* json, tcvrp_instance** out);
TCVRP_API void tcvrp_instance_free(tcvrp_instance* inst);
TCVRP_API int tcvrp_instance_customers(const tcvrp_instance* inst);
TCVRP_API tcvrp_status tcvrp_export_mps(const tcvrp_instance* inst, const char* path);

typedef enum tcvrp_solver {
  TCVRP_SOLVER_AUTO = 0, /* exact up to 60 super-locations, ITS above */
  TCVRP_SOLVER_EXACT = 1,
  TCVRP_SOLVER_ITS = 2
} tcvrp_solver;

typedef struct tcvrp_solve_options {
  tcvrp_solver solver;
  double time_limit_s; /* exact search limit, or ITS budget per run */
  int runs;            /* ITS runs */
  uint64_t seed;
} tcvrp_solve_options;

TCVRP_API void tcvrp_solve_options_init(tcvrp_solve_options* opt);

/* TCVRP_OK whenever a feasible solution exists, including exact searches
 * stopped with a nonzero gap. */
TCVRP_API tcvrp_status tcvrp_solve(const tcvrp_instance* inst,
                                   const tcvrp_solve_options* opt,
                                   tcvrp_solution** out);
TCVRP_API void tcvrp_solution_free(tcvrp_solution* sol);

TCVRP_API double tcvrp_solution_vmt_mi(const tcvrp_solution* sol);
TCVRP_API double tcvrp_solution_vht_min(const tcvrp_solution* sol);
TCVRP_API int tcvrp_solution_vehicles(const tcvrp_solution* sol);
/* "optimal" or "gap" for exact searches, "heuristic" for ITS. */
TCVRP_API const char* tcvrp_solution_status(const tcvrp_solution* sol);
/* Exact searches only; NaN otherwise. */
TCVRP_API double tcvrp_solution_lower_bound(const tcvrp_solution* sol);
TCVRP_API double tcvrp_solution_mip_gap(const tcvrp_solution* sol);

TCVRP_API tcvrp_status tcvrp_solution_to_json(const tcvrp_solution* sol, char** out);
TCVRP_API tcvrp_status tcvrp_solution_write(const tcvrp_solution* sol, const char* path);
TCVRP_API tcvrp_status tcvrp_solution_read(const tcvrp_instance* inst, const char* path,
                                           tcvrp_solution** out);
/* Sets *feasible to 1 or 0; *out_report (optional) receives a JSON report. */
TCVRP_API tcvrp_status tcvrp_solution_validate(const tcvrp_instance* inst,
                                               const tcvrp_solution* sol,
                                               int* feasible, char** out_report);

typedef struct tcvrp_params {
  int q;
  double tbar_h;
  double p_min;
  double dbar_mi; /* <= 0: no range limit */
  int shared_economy;
  uint64_t seed;
} tcvrp_params;

TCVRP_API void tcvrp_params_init(tcvrp_params* p);

/* Writes city.json, network.json, customers.json and depots.json. */
TCVRP_API tcvrp_status tcvrp_gen_city(const char* config_json, const char* out_dir);

/* One instance_<depot>.json per depot plus assignment.json; *summary_json
 * (optional) receives per-depot customer counts. */
TCVRP_API tcvrp_status tcvrp_pipeline(const char* city_dir, const tcvrp_params* p,
                                      const char* out_dir, char** summary_json);

/* sweep_json keys: Q, Tbar_h, P_min, Dbar_mi (lists), vehicles ("bev",
 * "cv"), solver, time_limit_s, runs, seed, shared_economy. Writes one CSV
 * row per cell; failed cells carry their message in the status column. */
TCVRP_API tcvrp_status tcvrp_sweep(const char* city_dir, const char* sweep_json,
                                   const char* out_csv);

/* Scenario CSV (header and one row) over matching instance/solution files. */
TCVRP_API tcvrp_status tcvrp_report(const char* const* instance_paths,
                                    const char* const* solution_paths, size_t count,
                                    char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* TCVRP_TCVRP_H */
