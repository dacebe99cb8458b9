#ifndef RIGGED_RIGGED_H
#define RIGGED_RIGGED_H

#include <stddef.h>

#if defined(RIGGED_BUILDING_LIBRARY)
#define RIGGED_API __attribute__((visibility("default")))
#else
#define RIGGED_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns a status; on failure rigged_last_error() holds a
   message for the calling thread until its next call into the library. */
typedef enum rigged_status {
  RIGGED_OK = 0,
  RIGGED_INVALID_ARGUMENT = 1, /* bad spec, family, suite or input data */
  RIGGED_SINGULAR_ENERGY = 2,  /* threshold where a wavenumber vanishes */
  RIGGED_SPECTRUM_HIT = 3,     /* resolvent asked for on the spectrum or at a Jost zero */
  RIGGED_NO_CONVERGENCE = 4,   /* root search, quadrature or extrapolation failed */
  RIGGED_INTERNAL_ERROR = 5
} rigged_status;

typedef struct rigged_potential rigged_potential;

typedef struct rigged_bound_state {
  int n;
  double energy;
  double kappa;
  double norm_residue;  /* N_n from the resolvent residue */
  double norm_integral; /* N_n from the norm integral of Theta~ */
  double mismatch;      /* |N_res^2 - N_int^2| / N_int^2 */
} rigged_bound_state;

typedef struct rigged_verify_options {
  double tol_match; /* <= 0 keeps the default */
  double tol_quad;
  double tol_root;
  double k_max;     /* energy grid of the parseval suite; <= 0 for 120 */
  int nodes;        /* <= 0 for 2048 */
} rigged_verify_options;

typedef struct rigged_expansion {
  char* json;              /* decomposition, free with rigged_string_free */
  double round_trip_error; /* absolute L2 */
  double norm;             /* L2 norm of the input */
  int phi_c_warning;       /* 1 if a derivative-vanishing or norm condition fails */
  char* warning;           /* failed conditions joined by "; ", or NULL */
} rigged_expansion;

RIGGED_API const char* rigged_last_error(void);
RIGGED_API const char* rigged_status_name(rigged_status status);
RIGGED_API void rigged_string_free(char* s);

RIGGED_API rigged_status rigged_potential_create(double v1, double v2, double a, double b,
                                                 double c, rigged_potential** out);
RIGGED_API void rigged_potential_destroy(rigged_potential* p);

/* Bound states, energy ascending. Writes min(capacity, count) entries and
   sets *count to the total. The search runs once per handle. */
RIGGED_API rigged_status rigged_bound_states(rigged_potential* p, rigged_bound_state* out,
                                             size_t capacity, size_t* count);

/* Library default energy-grid cutoff max(12, 6 sqrt(c(V1+V2))) / min(1, a). */
RIGGED_API rigged_status rigged_default_k_max(const rigged_potential* p, double* out);
RIGGED_API rigged_status rigged_rho(const rigged_potential* p, double e, double* out);
RIGGED_API rigged_status rigged_s_matrix(const rigged_potential* p, double k, double* re,
                                         double* im);
RIGGED_API rigged_status rigged_jost(const rigged_potential* p, double k_re, double k_im,
                                     double* re, double* im);
RIGGED_API rigged_status rigged_green(const rigged_potential* p, double e_re, double e_im,
                                      double r, double s, double* re, double* im);

/* Samples a family on the points r[0..n). family is one of chi, chi_tilde,
   theta_plus, theta_minus, theta_tilde, sigma1_neg, sigma2_pos, f_of_k (at
   energy x_re + i x_im), phi_delta (real energy x_re), momentum_ket (real
   momentum x_re) or bound:N (x ignored). */
RIGGED_API rigged_status rigged_sample_wave(rigged_potential* p, const char* family,
                                            double x_re, double x_im, const double* r,
                                            size_t n, double* out_re, double* out_im);

/* Runs a suite (or "all"). *json gets the verdict array; *all_pass is 1 when
   every check passed. */
RIGGED_API rigged_status rigged_verify(const rigged_potential* p, const char* suite,
                                       const rigged_verify_options* opts, char** json,
                                       int* all_pass);

/* Expands sampled data (ascending r) on a k_max/nodes energy grid; k_max <= 0
   selects rigged_default_k_max. */
RIGGED_API rigged_status rigged_expand(rigged_potential* p, const double* r,
                                       const double* re, const double* im, size_t n,
                                       double k_max, int nodes, rigged_expansion* out);
RIGGED_API void rigged_expansion_free(rigged_expansion* e);

#ifdef __cplusplus
}
#endif

#endif
