/* C interface to the Laplacian growth library.
 *
 * Objects are opaque handles created by lg_*_create / lg_*_from_* functions
 * and released with the matching lg_*_free (NULL is accepted). Every fallible
 * call returns an lg_status; on failure the message is available from
 * lg_last_error() on the same thread until the next failing call.
 *
 * Variable-length outputs use the (buf, cap, needed) convention: the call
 * writes at most cap elements, stores the full length in *needed and returns
 * LG_ERR_BUFFER_TOO_SMALL when cap is insufficient. Strings are counted
 * including the terminating NUL. Complex numbers are interleaved (re, im)
 * pairs of doubles.
 */
#ifndef LGROWTH_LGROWTH_H
#define LGROWTH_LGROWTH_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(LG_BUILDING_LIBRARY)
#define LG_API __declspec(dllexport)
#else
#define LG_API __declspec(dllimport)
#endif
#else
#define LG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lg_status {
  LG_OK = 0,
  LG_ERR_INVALID_INPUT = 1,
  LG_ERR_DOMAIN = 2,
  LG_ERR_CUSP = 3,
  LG_ERR_NO_CONVERGENCE = 4,
  LG_ERR_BIFURCATION = 5,
  LG_ERR_INFEASIBLE = 6,
  LG_ERR_IO = 7,
  LG_ERR_GEOMETRY = 8,
  LG_ERR_INTERNAL = 9,
  LG_ERR_BUFFER_TOO_SMALL = 10
} lg_status;

typedef struct lg_map lg_map;
typedef struct lg_contour lg_contour;
typedef struct lg_state lg_state;
typedef struct lg_curve lg_curve;
typedef struct lg_family lg_family;
typedef struct lg_report lg_report;

LG_API const char* lg_version(void);
LG_API const char* lg_status_name(lg_status status);
/* Message of the last failing call on this thread ("" if none). */
LG_API const char* lg_last_error(void);
/* Margin and pump time of the last LG_ERR_CUSP on this thread. */
LG_API lg_status lg_last_cusp(double* margin, double* at_time);

/* ---- Conformal maps f(w) = r w + a0 + sum_k u_k w^{-k} ------------------ */

/* u holds K interleaved coefficients u_1..u_K (may be NULL when K = 0). */
LG_API lg_status lg_map_create(double r, const double a0[2], const double* u, size_t K, lg_map** out);
LG_API lg_status lg_map_from_json(const char* text, lg_map** out);
LG_API lg_status lg_map_to_json(const lg_map* m, char* buf, size_t cap, size_t* needed);
LG_API void lg_map_free(lg_map* m);

LG_API lg_status lg_map_radius(const lg_map* m, double* r);
/* Interleaved u_1..u_K; *needed is 2K. */
LG_API lg_status lg_map_coefficients(const lg_map* m, double* buf, size_t cap, size_t* needed);
LG_API lg_status lg_map_evaluate(const lg_map* m, const double w[2], double z[2]);
LG_API lg_status lg_map_area_over_pi(const lg_map* m, double* value);
LG_API lg_status lg_map_univalence_margin(const lg_map* m, size_t samples, double* margin);
/* t0 = area / pi and interleaved t_1..t_count (2 * count doubles). */
LG_API lg_status lg_map_moments(const lg_map* m, size_t count, double* t0, double* tk);
LG_API lg_status lg_map_boundary(const lg_map* m, size_t samples, lg_contour** out);
/* Pole JSON of the Schwarz function continued from the map. */
LG_API lg_status lg_map_poles_json(const lg_map* m, char* buf, size_t cap, size_t* needed);

/* ---- Contours ---------------------------------------------------------- */

LG_API lg_status lg_contour_create(const double* xy, size_t n, lg_contour** out);
LG_API lg_status lg_contour_read_csv(const char* path, lg_contour** out);
LG_API lg_status lg_contour_write_csv(const lg_contour* c, const char* path);
LG_API void lg_contour_free(lg_contour* c);
LG_API size_t lg_contour_size(const lg_contour* c);
/* Interleaved samples; *needed is 2n. */
LG_API lg_status lg_contour_samples(const lg_contour* c, double* buf, size_t cap, size_t* needed);
LG_API lg_status lg_contour_area(const lg_contour* c, double* value);
LG_API lg_status lg_contour_hausdorff(const lg_contour* a, const lg_contour* b, double* value);

/* ---- Evolution --------------------------------------------------------- */

typedef struct lg_evolution_options {
  size_t order;
  size_t samples;
  double max_step;
  double cusp_threshold;
  int max_halvings;
  double filter_level;
} lg_evolution_options;

LG_API lg_evolution_options lg_evolution_options_default(void);

/* options may be NULL for the defaults. */
LG_API lg_status lg_state_create(const lg_map* initial, const lg_evolution_options* options, lg_state** out);
LG_API void lg_state_free(lg_state* s);
/* location NULL is the sink at infinity. Checks that a finite pump lies in
 * the oil domain without stepping. */
LG_API lg_status lg_validate_pump(const lg_state* s, const double* location);
/* New state after dT of pumping at location (NULL is infinity). */
LG_API lg_status lg_state_step(const lg_state* s, const char* label, const double* location, double dT,
                               lg_state** out);
LG_API lg_status lg_state_map(const lg_state* s, lg_map** out);
LG_API lg_status lg_state_total_time(const lg_state* s, double* T);
/* {"label": T, ...} in first-use order. */
LG_API lg_status lg_state_times_json(const lg_state* s, char* buf, size_t cap, size_t* needed);
/* Hausdorff distance between the two pump orders. */
LG_API lg_status lg_commutativity(const lg_state* s, const double* location_a, const double* location_b, double dTA,
                                  double dTB, size_t contour_samples, double* hausdorff);

/* ---- N = 1 algebraic curve -------------------------------------------- */

/* Solves the double-point condition for S with poles at p (residue -mu) and
 * q (residue -nu); all arguments are complex pairs. */
LG_API lg_status lg_curve_solve(const double p[2], const double q[2], const double mu[2], const double nu[2],
                                lg_curve** out);
/* Real family: curve from the hodograph solution at (p, q, mu, T). */
LG_API lg_status lg_curve_from_hodograph(double p, double q, double mu, double T, lg_curve** out);
LG_API void lg_curve_free(lg_curve* c);
LG_API lg_status lg_curve_to_json(const lg_curve* c, char* buf, size_t cap, size_t* needed);
LG_API lg_status lg_curve_schwarz(const lg_curve* c, const double z[2], int sheet, double out[2]);
/* Traced real-axis components of the real section. */
LG_API lg_status lg_curve_component_count(const lg_curve* c, size_t* count);
LG_API lg_status lg_curve_component(const lg_curve* c, size_t index, int* physical, lg_contour** out);

/* ---- Hodograph family -------------------------------------------------- */

LG_API lg_status lg_hodograph_solve(double p, double q, double mu, double T, double E[2], double* residual);
/* Grid in mu-major order; threads = 0 uses the hardware concurrency. */
LG_API lg_status lg_family_evaluate(double p, double q, const double* mus, size_t n_mu, const double* Ts, size_t n_T,
                                    unsigned threads, int keep_contours, lg_family** out);
LG_API void lg_family_free(lg_family* f);
LG_API size_t lg_family_size(const lg_family* f);
LG_API lg_status lg_family_row_json(const lg_family* f, size_t index, char* buf, size_t cap, size_t* needed);
LG_API lg_status lg_family_row_status(const lg_family* f, size_t index, char* buf, size_t cap, size_t* needed);
/* LG_ERR_INVALID_INPUT when the row has no stored contour. */
LG_API lg_status lg_family_row_contour(const lg_family* f, size_t index, lg_contour** out);

/* ---- Verification ------------------------------------------------------ */

/* Newline-separated selector names. */
LG_API lg_status lg_verify_selectors(char* buf, size_t cap, size_t* needed);
LG_API lg_status lg_verify_run(const char* selector, unsigned long long seed, lg_report** out);
LG_API void lg_report_free(lg_report* r);
LG_API int lg_report_passed(const lg_report* r);
LG_API lg_status lg_report_to_json(const lg_report* r, char* buf, size_t cap, size_t* needed);

/* ---- Formatting -------------------------------------------------------- */

/* 17 significant digits. */
LG_API lg_status lg_format_real(double x, char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* LGROWTH_LGROWTH_H */
