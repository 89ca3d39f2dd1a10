/* hrom — structure-preserving reduced-order modeling for KdV-type equations.
 *
 * C API of the shared library. All objects are opaque handles created and
 * destroyed through these functions; every fallible call returns an
 * hrom_status and leaves a human-readable message in hrom_last_error()
 * (thread-local, valid until the next hrom_* call on the same thread).
 */
#ifndef HROM_H
#define HROM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HROM_API __declspec(dllexport)
#else
#define HROM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hrom_status {
  HROM_OK = 0,
  HROM_ERROR = 1,             /* unexpected internal failure */
  HROM_ERR_CONFIG = 2,        /* schema violation / invalid configuration */
  HROM_ERR_NUMERIC = 3,       /* numerical failure (singular or ill-conditioned solve) */
  HROM_ERR_MISSING_INPUT = 4, /* required input file or artifact absent */
  HROM_ERR_INVALID_ARG = 5,   /* bad argument (null pointer, dimension mismatch) */
  HROM_ERR_IO = 6             /* file read/write failure */
} hrom_status;

typedef struct hrom_model hrom_model;
typedef struct hrom_trajectory hrom_trajectory;
typedef struct hrom_basis hrom_basis;
typedef struct hrom_rom hrom_rom;

HROM_API const char* hrom_status_name(hrom_status s);
HROM_API const char* hrom_last_error(void);

/* ---- full-order model -------------------------------------------------- */

/* model_json: {"kind": "single_kdv"|"coupled_kdv"|"zakharov_kuznetsov",
 *              "alpha": .., "mu": ..,
 *              "grid": {"a":..,"b":..,"n":..} | {"a","b","c","d","nx","ny"},
 *              "initial_condition": {"kind": "one_soliton"|"two_soliton"|
 *                                            "gaussian"|"zk_two_pulse", ...}}
 */
HROM_API hrom_status hrom_model_create(const char* model_json, hrom_model** out);
HROM_API void hrom_model_free(hrom_model* m);
HROM_API int64_t hrom_model_dim(const hrom_model* m);
HROM_API hrom_status hrom_model_initial_state(const hrom_model* m, double* q, int64_t len);
HROM_API hrom_status hrom_model_rhs(const hrom_model* m, const double* q, int64_t len, double* out);
/* values: H, I1, I2 (and I3 for the coupled model); *count receives how many. */
HROM_API hrom_status hrom_model_invariants(const hrom_model* m, const double* q, int64_t len,
                                           double* values, int64_t cap, int64_t* count);

/* ---- time integration (Kahan's method) ---------------------------------- */

HROM_API hrom_status hrom_integrate(const hrom_model* m, const double* q0, int64_t len,
                                    int64_t steps, double dt, int64_t sample_stride,
                                    int record_invariants, hrom_trajectory** out);
HROM_API void hrom_trajectory_free(hrom_trajectory* t);
HROM_API int64_t hrom_trajectory_dim(const hrom_trajectory* t);
HROM_API int64_t hrom_trajectory_samples(const hrom_trajectory* t);
HROM_API double hrom_trajectory_dt(const hrom_trajectory* t);
HROM_API hrom_status hrom_trajectory_state(const hrom_trajectory* t, int64_t k, double* out,
                                           int64_t len);
/* Binary container with JSON sidecar; meta_json may be NULL. */
HROM_API hrom_status hrom_trajectory_save(const hrom_trajectory* t, const char* path,
                                          const char* meta_json);
HROM_API hrom_status hrom_trajectory_load(const char* path, hrom_trajectory** out);

/* ---- POD basis ---------------------------------------------------------- */

/* options_json (all optional): {"mode":"per_field"|"monolithic", "num_modes":n,
 *  "ric_threshold":99.99, "svd":{"method":"auto"|"full"|"randomized",
 *  "oversample":10,"power_iterations":2,"max_rank":150,"full_cutoff":1200},
 *  "seed":0, "include_initial":false} */
HROM_API hrom_status hrom_basis_build(const hrom_model* m, const hrom_trajectory* snapshots,
                                      const char* options_json, hrom_basis** out);
HROM_API void hrom_basis_free(hrom_basis* b);
HROM_API int64_t hrom_basis_modes(const hrom_basis* b);
HROM_API hrom_status hrom_basis_lift(const hrom_basis* b, const double* qr, int64_t n, double* q,
                                     int64_t len);
HROM_API hrom_status hrom_basis_project(const hrom_basis* b, const double* q, int64_t len,
                                        double* qr, int64_t n);

/* ---- reduced-order model ------------------------------------------------ */

#define HROM_PATH_TENSORIAL 0
#define HROM_PATH_LIFTED 1

HROM_API hrom_status hrom_rom_build(const hrom_model* m, const hrom_basis* b, hrom_rom** out);
HROM_API void hrom_rom_free(hrom_rom* r);
HROM_API int64_t hrom_rom_dim(const hrom_rom* r);
HROM_API hrom_status hrom_rom_rhs(const hrom_rom* r, const double* qr, int64_t n, double* out,
                                  int path);
HROM_API hrom_status hrom_rom_integrate(const hrom_rom* r, const double* qr0, int64_t n,
                                        int64_t steps, double dt, int64_t sample_stride, int path,
                                        hrom_trajectory** out);

/* ---- experiment driver (CLI backend) ------------------------------------ */

/* subcommand: "fom" | "basis" | "rom" | "compare" | "eoc" | "bench".
 * overrides_json (may be NULL): {"seed":u64, "out":"dir", "threads":k,
 *                                "path":"tensorial"|"lifted"|"both"}.
 * The HROM_OUT environment variable overrides the output directory. */
HROM_API hrom_status hrom_run(const char* subcommand, const char* config_path,
                              const char* overrides_json);

#ifdef __cplusplus
}
#endif

#endif /* HROM_H */
