#ifndef MODARRAY_H
#define MODARRAY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum ModarrayStatus {
  MODARRAY_STATUS_OK = 0,
  MODARRAY_STATUS_INVALID_CONFIG = 1,
  MODARRAY_STATUS_INVALID_INDEX = 2,
  MODARRAY_STATUS_DOMAIN = 3,
  MODARRAY_STATUS_SINGULAR_GEOMETRY = 4,
  MODARRAY_STATUS_NOT_FACTORIZABLE = 5,
  MODARRAY_STATUS_INSUFFICIENT_DATA = 6,
  MODARRAY_STATUS_USAGE = 7,
  MODARRAY_STATUS_IO = 8,
  MODARRAY_STATUS_NULL_POINTER = 9,
  MODARRAY_STATUS_BUFFER_TOO_SMALL = 10,
  MODARRAY_STATUS_INVALID_UTF8 = 11,
  MODARRAY_STATUS_PANIC = 12,
} ModarrayStatus;

/**
 * Propagation regime; `None` when no distance was classified.
 */
typedef enum ModarrayRegime {
  MODARRAY_REGIME_NONE = -1,
  MODARRAY_REGIME_NUSW_REQUIRED = 0,
  MODARRAY_REGIME_USW_EXACT = 1,
  MODARRAY_REGIME_SUBARRAY_DIFFERENT_ANGLES = 2,
  MODARRAY_REGIME_SUBARRAY_COMMON_ANGLE = 3,
  MODARRAY_REGIME_UPW_FAR_FIELD = 4,
} ModarrayRegime;

/**
 * Channel models for steering vectors.
 */
typedef enum ModarrayModel {
  MODARRAY_MODEL_NUSW = 0,
  MODARRAY_MODEL_USW = 1,
  MODARRAY_MODEL_UPW = 2,
  MODARRAY_MODEL_SUBARRAY_DIFF = 3,
  MODARRAY_MODEL_SUBARRAY_COMMON = 4,
} ModarrayModel;

/**
 * Beam pattern evaluators.
 */
typedef enum ModarrayPattern {
  MODARRAY_PATTERN_NUSW = 0,
  MODARRAY_PATTERN_USW = 1,
  MODARRAY_PATTERN_UPW = 2,
  MODARRAY_PATTERN_SUBARRAY_DIFF = 3,
  MODARRAY_PATTERN_SUBARRAY_COMMON = 4,
  MODARRAY_PATTERN_FRESNEL = 5,
} ModarrayPattern;

/**
 * Opaque array configuration.
 */
typedef struct ModarrayConfig ModarrayConfig;

/**
 * Region boundaries in meters.
 */
typedef struct ModarrayRegions {
  double amplitude_uniform_bound;
  double module_rayleigh;
  double extended_far_field_bound;
  double array_rayleigh;
  enum ModarrayRegime regime;
} ModarrayRegions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a configuration of `num_modules` modules with
 * `antennas_per_module` elements each.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum ModarrayStatus modarray_config_new(uintptr_t num_modules,
                                        uintptr_t antennas_per_module,
                                        double gamma,
                                        double element_spacing,
                                        double wavelength,
                                        struct ModarrayConfig **out);

/**
 * Reads a `key = value` configuration file.
 *
 * # Safety
 * `path` must be a nul-terminated string; `out` must be valid for writing
 * one pointer.
 */
enum ModarrayStatus modarray_config_load(const char *path, struct ModarrayConfig **out);

/**
 * Releases a configuration. Null is ignored.
 *
 * # Safety
 * `config` must come from this library and not be used afterwards.
 */
void modarray_config_free(struct ModarrayConfig *config);

/**
 * Number of elements `N M`, or 0 for a null handle.
 *
 * # Safety
 * `config` must be null or a live handle.
 */
uintptr_t modarray_config_num_elements(const struct ModarrayConfig *config);

/**
 * Region boundaries without classification (`regime` is `None`).
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum ModarrayStatus modarray_region_boundaries(const struct ModarrayConfig *config,
                                               struct ModarrayRegions *out);

/**
 * Region boundaries and the regime of a source at distance `r`.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum ModarrayStatus modarray_classify_region(const struct ModarrayConfig *config,
                                             double r,
                                             struct ModarrayRegions *out);

/**
 * Writes the steering vector for a source at `(r, theta)` into `re` and
 * `im`, module-major. `len` must be at least the element count.
 *
 * # Safety
 * `re` and `im` must be valid for `len` writes.
 */
enum ModarrayStatus modarray_steering_vector(const struct ModarrayConfig *config,
                                             enum ModarrayModel model,
                                             double r,
                                             double theta,
                                             double *re,
                                             double *im,
                                             uintptr_t len);

/**
 * Beam pattern gain at `(r, theta)` for a beam focused on
 * `(r_focus, theta_focus)`.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum ModarrayStatus modarray_pattern(const struct ModarrayConfig *config,
                                     enum ModarrayPattern pattern,
                                     double r_focus,
                                     double theta_focus,
                                     double r,
                                     double theta,
                                     double *out);

/**
 * Gain between two distances along the same direction.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum ModarrayStatus modarray_same_direction_gain(const struct ModarrayConfig *config,
                                                 double r,
                                                 double r_prime,
                                                 double theta,
                                                 bool collocated,
                                                 double *out);

/**
 * Fresnel integrals `C(x) = int_0^x cos(t^2) dt` and `S(x)`.
 *
 * # Safety
 * `c` and `s` must be writable.
 */
enum ModarrayStatus modarray_fresnel(double x, double *c, double *s);

/**
 * Dirichlet kernel `sin(pi M d x) / (M sin(pi d x))`; NaN when `count` is 0.
 */
double modarray_dirichlet(uintptr_t count, double spacing, double delta);

/**
 * Writes the CSV of a figure preset (`"fig3"`, `"fig4a"`, `"fig4b"`,
 * `"fig4c"`) to `path`.
 *
 * # Safety
 * `name` and `path` must be nul-terminated strings.
 */
enum ModarrayStatus modarray_figure_csv(const char *name, const char *path);

/**
 * Message of the last failure on this thread, or null after a success.
 * Valid until the next call into the library on the same thread.
 */
const char *modarray_last_error(void);

/**
 * Library version as a static string.
 */
const char *modarray_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODARRAY_H */
