#ifndef QLMASS_QLMASS_H
#define QLMASS_QLMASS_H

/* C interface of the qlmass library. Every function returns QLM_OK or one of
 * the QLM_E_* codes; the message of the most recent failure on the calling
 * thread is available from qlm_last_error(). Reports come back as JSON
 * strings owned by the caller and released with qlm_string_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QLMASS_BUILDING_LIBRARY)
#define QLM_API __declspec(dllexport)
#else
#define QLM_API __declspec(dllimport)
#endif
#else
#define QLM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  QLM_OK = 0,
  QLM_E_INVALID_ARGUMENT = 1,
  QLM_E_POLE_CLOSURE = 2,
  QLM_E_NONPOSITIVE_INTERIOR = 3,
  QLM_E_NON_REALIZABLE = 4,
  QLM_E_NOT_EMBEDDABLE = 5,
  QLM_E_CURVATURE_BOUND = 6,
  QLM_E_ODE_BREAKDOWN = 7,
  QLM_E_POINT_NOT_ENCLOSED = 8,
  QLM_E_SOLVER_DIVERGENCE = 9,
  QLM_E_NONPOSITIVE_SOLUTION = 10,
  QLM_E_NONPOSITIVE_FACTOR = 11,
  QLM_E_NOT_MINIMAL = 12,
  QLM_E_NOT_IN_F = 13,
  QLM_E_INVALID_RADII = 14,
  QLM_E_NOT_MINIMAL_INNER = 15,
  QLM_E_NOT_CONVEX = 16,
  QLM_E_NOT_ADMISSIBLE = 17,
  QLM_E_EMPTY_COMPONENT = 18,
  QLM_E_IO = 19,
  QLM_E_PARSE = 20,
  QLM_E_INTERNAL = 99
};

/* Inner boundary roles of a radial domain. */
enum { QLM_ROLE_CENTER = 0, QLM_ROLE_HORIZON = 1, QLM_ROLE_CUT = 2 };

/* Axis point selection for the hyperbolic upper bound. */
enum { QLM_P_CENTER = 0, QLM_P_GRID = 1 };

typedef struct qlm_metric qlm_metric; /* axisymmetric metric on a 2-sphere */
typedef struct qlm_radial qlm_radial; /* rotationally symmetric 3-domain */
typedef struct qlm_tet qlm_tet;       /* tetrahedral 3-domain given by edge lengths */

/* kappa > 0 selects a single curvature; otherwise kappa_grid values are
 * used (0 for the default of 16). */
typedef struct qlm_bound_options {
  double kappa;
  size_t kappa_grid;
  int p_mode;
  size_t boundary_nodes; /* boundary sphere sampling for radial domains, 0 = 1024 */
} qlm_bound_options;

typedef struct qlm_check_options {
  size_t seeds;
  uint64_t first_seed;
  size_t resolution;
  double tol;
} qlm_check_options;

QLM_API const char* qlm_version(void);
QLM_API const char* qlm_last_error(void);
QLM_API const char* qlm_error_name(int code);
QLM_API void qlm_string_free(char* s);
QLM_API void qlm_bound_options_default(qlm_bound_options* options);
QLM_API void qlm_check_options_default(qlm_check_options* options);

/* Metrics. */
QLM_API int qlm_metric_from_samples(const double* s, const double* f, size_t n, double tol, qlm_metric** out);
QLM_API int qlm_metric_load_csv(const char* path, double tol, qlm_metric** out);
QLM_API int qlm_metric_round(double radius, size_t nodes, qlm_metric** out);
QLM_API size_t qlm_metric_size(const qlm_metric* metric);
QLM_API void qlm_metric_free(qlm_metric* metric);

/* Radial domains. */
QLM_API int qlm_radial_from_samples(const double* r, const double* h, size_t n, int role, double tol,
                                    qlm_radial** out);
/* Reads an r,h CSV; the role comes from a .json sidecar or is inferred. */
QLM_API int qlm_radial_load_csv(const char* path, double tol, qlm_radial** out);
QLM_API int qlm_radial_save_csv(const qlm_radial* domain, const char* path);
QLM_API int qlm_radial_random_fillin(uint64_t seed, size_t nodes, qlm_radial** out);
QLM_API size_t qlm_radial_size(const qlm_radial* domain);
QLM_API int qlm_radial_role(const qlm_radial* domain);
QLM_API void qlm_radial_free(qlm_radial* domain);

/* Named presets "round[:rho]", "schwarzschild[:m,R]", "cap[:r0]",
 * "dumbbell[:depth]". The boundary metric is always returned; *domain is set
 * to NULL for presets without a domain. Either output may be NULL. */
QLM_API int qlm_preset(const char* spec, size_t nodes, qlm_metric** boundary, qlm_radial** domain, int* convex);

/* Tetrahedral domains. */
QLM_API int qlm_tet_load(const char* path, double tol, qlm_tet** out);
QLM_API int qlm_tet_save(const qlm_tet* domain, const char* path);
/* Flat icosphere ball, as a ready-made mesh. */
QLM_API int qlm_tet_ball(double radius, size_t frequency, size_t layers, qlm_tet** out);
QLM_API size_t qlm_tet_vertex_count(const qlm_tet* domain);
QLM_API void qlm_tet_free(qlm_tet* domain);

/* Embeddings. */
QLM_API int qlm_embed_euclidean_total(const qlm_metric* metric, double* total_H0_over_8pi);
/* Writes <prefix>_euclidean.{csv,obj} and, for kappa > 0,
 * <prefix>_hyperbolic.{csv,obj}; the JSON summarizes both. */
QLM_API int qlm_embed_write(const qlm_metric* metric, double kappa, const char* prefix, char** json);
QLM_API int qlm_lambda_upper(const qlm_metric* metric, const qlm_bound_options* options, double* value, char** json);

/* Mass. */
QLM_API int qlm_brown_york(const qlm_radial* domain, size_t boundary_nodes, double* value);
QLM_API int qlm_lambda_bracket(const qlm_metric* metric, const qlm_bound_options* options, char** json);
QLM_API int qlm_mass_bracket(const qlm_radial* domain, const qlm_bound_options* options, char** json);
/* Per-component brackets and their additivity combination. */
QLM_API int qlm_mass_bracket_combined(const qlm_radial* const* domains, size_t count,
                                      const qlm_bound_options* options, char** json);

/* Fill-ins and conformal constructions. */
QLM_API int qlm_validate_fillin(const qlm_radial* domain, const qlm_metric* target, char** json);
QLM_API int qlm_shitam_check(const qlm_radial* domain, char** json);
QLM_API int qlm_cap_fill(const qlm_radial* domain, double collar_fraction, qlm_radial** out, char** json);
QLM_API int qlm_doubling(const qlm_radial* domain, double epsilon, char** json);
QLM_API int qlm_weak_meanconvex_fix(const qlm_radial* domain, double epsilon, char** json);
QLM_API int qlm_positivity_perturbation(const qlm_radial* domain, double tau, char** json);
QLM_API int qlm_scalar_flat(const qlm_radial* domain, char** json);
QLM_API int qlm_scalar_flat_tet(const qlm_tet* domain, char** json);

/* Property suite; *all_pass is 1 when every property holds. */
QLM_API int qlm_check(const qlm_check_options* options, int* all_pass, char** json);

#ifdef __cplusplus
}
#endif

#endif
