#ifndef PIDKIT_H
#define PIDKIT_H

/* C interface to libpidkit. Every fallible call returns a pidkit_status;
 * on failure pidkit_last_error() describes the problem for the calling
 * thread. Handles are opaque and owned by the caller, who releases them with
 * the matching *_free function. Information quantities are in nats. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PIDKIT_API __declspec(dllexport)
#else
#define PIDKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pidkit_status {
  PIDKIT_OK = 0,
  PIDKIT_ERR_INVALID_ARGUMENT = 1,
  PIDKIT_ERR_VALIDITY = 2,
  PIDKIT_ERR_ALPHABET = 3,
  PIDKIT_ERR_PARSE = 4,
  PIDKIT_ERR_DEGENERATE_INPUT = 5,
  PIDKIT_ERR_NOT_POSITIVE_DEFINITE = 6,
  PIDKIT_ERR_UNSUPPORTED = 7,
  PIDKIT_ERR_ESTIMATION = 8,
  PIDKIT_ERR_IO = 9,
  PIDKIT_ERR_INTERNAL = 99
} pidkit_status;

typedef enum pidkit_kind { PIDKIT_IMIN = 0, PIDKIT_IPM = 1 } pidkit_kind;

PIDKIT_API const char* pidkit_version(void);
/* Message of the last failed call on this thread; "" after a success. */
PIDKIT_API const char* pidkit_last_error(void);
PIDKIT_API const char* pidkit_status_name(pidkit_status status);

/* Atoms and the mutual informations they partition. Infinite atoms are
 * IEEE infinities; indeterminate ones are NaN. */
typedef struct pidkit_pid {
  double r, u_x, u_y, s;
  double mi_x, mi_y, mi_xy;
} pidkit_pid;

typedef struct pidkit_sublattices {
  double r_plus, u_x_plus, u_y_plus, s_plus;
  double r_minus, u_x_minus, u_y_minus, s_minus;
} pidkit_sublattices;

/* ---- discrete joints ---------------------------------------------------- */

typedef struct pidkit_joint pidkit_joint;

/* table is indexed ((x * ny) + y) * nt + t over index alphabets. */
PIDKIT_API pidkit_status pidkit_joint_from_table(size_t nx, size_t ny, size_t nt,
                                                 const double* table, pidkit_joint** out);
/* Text form: header "alphabet x y t", then one "x y t prob" line per cell. */
PIDKIT_API pidkit_status pidkit_joint_parse(const char* text, pidkit_joint** out);
PIDKIT_API pidkit_status pidkit_joint_load(const char* path, pidkit_joint** out);
PIDKIT_API void pidkit_joint_free(pidkit_joint* joint);
PIDKIT_API pidkit_status pidkit_joint_dims(const pidkit_joint* joint, size_t* nx, size_t* ny,
                                           size_t* nt);

PIDKIT_API pidkit_status pidkit_compute_pid(const pidkit_joint* joint, pidkit_kind kind,
                                            pidkit_pid* out);
PIDKIT_API pidkit_status pidkit_pm_sublattices(const pidkit_joint* joint, pidkit_sublattices* out);

typedef struct pidkit_ci_report {
  double cmi; /* I(T; X | Y) */
  double u_x;
  double s;
  int conditionally_independent;
  int violation;
} pidkit_ci_report;

PIDKIT_API pidkit_status pidkit_ci_audit(const pidkit_joint* joint, pidkit_kind kind,
                                         pidkit_ci_report* out);

/* ---- linear Gaussian interaction T = aX + bY ------------------------------ */

typedef struct pidkit_linear_report {
  double sigma_t;
  double i_xy, i_tx, i_ty;
  pidkit_pid imin;
  pidkit_pid ipm;
  pidkit_sublattices pm_lattice;
  double unique_specificity; /* (1/pi) sqrt(1 - rho^2) */
  double uy_min_over_ity;
  double r_min_over_ity;
  double ux_pm_over_ity;
  double r_pm_over_ity;
  double ux_pm_over_uy_min;
} pidkit_linear_report;

/* Requires 0 < a < b and |rho| < 1. */
PIDKIT_API pidkit_status pidkit_linear_analyze(double a, double b, double rho,
                                               pidkit_linear_report* out);
PIDKIT_API pidkit_status pidkit_f_gamma(double gamma, double rho, double* out);

/* ---- Monte Carlo on noise-free interactions ------------------------------- */

typedef struct pidkit_kernel pidkit_kernel;

/* "linear:A,B", "sigmoidal:ALPHA" or "symmetric". */
PIDKIT_API pidkit_status pidkit_kernel_parse(const char* spec, pidkit_kernel** out);
PIDKIT_API void pidkit_kernel_free(pidkit_kernel* kernel);
/* Canonical spec string; writes at most cap bytes including the terminator
 * and stores the full length (without terminator) in *needed. */
PIDKIT_API pidkit_status pidkit_kernel_spec(const pidkit_kernel* kernel, char* buf, size_t cap,
                                            size_t* needed);

typedef struct pidkit_estimate {
  double value;
  double std_error;
  uint64_t n_samples;
  uint64_t seed;
  uint64_t excluded;
} pidkit_estimate;

typedef struct pidkit_mc_options {
  uint64_t n_samples;
  uint64_t seed;
  size_t t_bins;
  unsigned workers; /* 0: one per hardware thread */
} pidkit_mc_options;

PIDKIT_API void pidkit_mc_options_default(pidkit_mc_options* options);

typedef struct pidkit_mc_report {
  pidkit_estimate umin_x, umin_y;
  pidkit_estimate upm_x, upm_y;
  pidkit_estimate upm_x_ambiguity, upm_y_ambiguity;
  double unique_specificity;
  size_t t_bins_used;
  int bins_reduced;
  double mi_xy; /* always +inf for a noise-free interaction */
  /* Set for linear kernels with 0 < a < b. */
  int has_closed_form;
  double closed_umin_x, closed_umin_y, closed_upm_x, closed_upm_y;
} pidkit_mc_report;

PIDKIT_API pidkit_status pidkit_mc_run(const pidkit_kernel* kernel, double rho,
                                       const pidkit_mc_options* options, pidkit_mc_report* out);

/* ---- networks and experiments ----------------------------------------- */

typedef struct pidkit_network pidkit_network;

/* Line format: nodes N / rho R / kernel SPEC / edge I J [+|-] /
 * interaction X Y / mixed NODE BETA. */
PIDKIT_API pidkit_status pidkit_network_parse(const char* text, pidkit_network** out);
PIDKIT_API pidkit_status pidkit_network_load(const char* path, pidkit_network** out);
PIDKIT_API void pidkit_network_free(pidkit_network* network);
PIDKIT_API size_t pidkit_network_nodes(const pidkit_network* network);

typedef struct pidkit_experiment_config {
  size_t batches;
  size_t n_per_batch;
  size_t bins;
  double rho;
  double alpha;
  size_t k;
  const double* beta_grid;
  size_t n_beta;
  const double* alpha_grid;
  size_t n_alpha;
  uint64_t seed;
  unsigned workers;
  const pidkit_network* network; /* experiment 1 only; NULL selects network A */
} pidkit_experiment_config;

/* Grids point at static storage owned by the library. */
PIDKIT_API void pidkit_experiment_config_default(pidkit_experiment_config* config);

typedef struct pidkit_experiment pidkit_experiment;

PIDKIT_API pidkit_status pidkit_experiment_run(int id, const pidkit_experiment_config* config,
                                               pidkit_experiment** out);
PIDKIT_API void pidkit_experiment_free(pidkit_experiment* experiment);
/* Rows per CSV file: pairs x batches x grid points. */
PIDKIT_API size_t pidkit_experiment_rows(const pidkit_experiment* experiment);
/* Writes pairs_imin.csv, pairs_ipm.csv and summary.json into dir. */
PIDKIT_API pidkit_status pidkit_experiment_write(const pidkit_experiment* experiment,
                                                 const char* dir, int units_bits);
/* Same buffer contract as pidkit_kernel_spec. */
PIDKIT_API pidkit_status pidkit_experiment_summary(const pidkit_experiment* experiment,
                                                   int units_bits, char* buf, size_t cap,
                                                   size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
