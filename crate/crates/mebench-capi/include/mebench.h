/* C interface to the mebench motion-estimation library. */

#ifndef MEBENCH_H
#define MEBENCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Candidate-distance metric of the fitness strategy.
 */
typedef enum MebMetric {
  MEB_METRIC_EUCLIDEAN = 0,
  MEB_METRIC_MANHATTAN = 1,
  MEB_METRIC_CHEBYSHEV = 2,
} MebMetric;

/**
 * Result of every fallible call.
 */
typedef enum MebStatus {
  /**
   * The call succeeded.
   */
  MEB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MEB_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument failed validation; see meb_last_error_message().
   */
  MEB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * An internal invariant failed; see meb_last_error_message().
   */
  MEB_STATUS_PANIC = 3,
} MebStatus;

/**
 * Opaque luma frame handle.
 */
typedef struct MebFrame MebFrame;

/**
 * Opaque per-block motion field handle, with its search statistics.
 */
typedef struct MebMotionField MebMotionField;

/**
 * Search parameters; fill with meb_config_default() and adjust.
 */
typedef struct MebConfig {
  /**
   * Search window radius in pixels.
   */
  uint32_t window;
  /**
   * Harmony memory size.
   */
  uint32_t hms;
  /**
   * Memory-consideration rate in [0, 1].
   */
  double hmcr;
  /**
   * Pitch-adjustment rate in [0, 1].
   */
  double par;
  /**
   * Pitch-adjustment bandwidth in pixels.
   */
  double bw;
  /**
   * Improvisations per block.
   */
  uint32_t ni;
  /**
   * Distance threshold of the fitness strategy; 0 disables estimation.
   */
  double d;
  /**
   * Run seed; equal seeds reproduce results exactly.
   */
  uint64_t seed;
  /**
   * Bias the fresh candidate draw one lattice step positive.
   */
  bool offset_reinit;
  /**
   * Distance metric used by the fitness strategy.
   */
  enum MebMetric metric;
} MebConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *meb_version(void);

/**
 * Message of the last failure on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *meb_last_error_message(void);

/**
 * Creates a frame from `len` row-major 8-bit luma samples; `len` must
 * equal `width * height`.
 */
enum MebStatus meb_frame_new(uint32_t width,
                             uint32_t height,
                             const uint8_t *samples,
                             size_t len,
                             struct MebFrame **out);

/**
 * Releases a frame. Null is a no-op.
 */
void meb_frame_free(struct MebFrame *frame);

/**
 * Reads a frame's dimensions.
 */
enum MebStatus meb_frame_dimensions(const struct MebFrame *frame,
                                    uint32_t *width,
                                    uint32_t *height);

/**
 * Borrows a frame's sample buffer (row-major, `width * height` bytes).
 * The pointer is valid while the frame handle lives.
 */
enum MebStatus meb_frame_samples(const struct MebFrame *frame,
                                 const uint8_t **samples,
                                 size_t *len);

/**
 * Fills `out` with the tuned defaults for a window radius (8 or 16 are
 * the standard choices).
 */
enum MebStatus meb_config_default(uint32_t window, struct MebConfig *out);

/**
 * Runs the harmony search over one frame pair on a `block_edge` grid
 * (16 is the standard edge). Both frames must have equal dimensions,
 * divisible by the edge. The result carries one vector per block plus
 * evaluation statistics; free it with meb_motion_field_free().
 */
enum MebStatus meb_estimate(const struct MebFrame *current,
                            const struct MebFrame *previous,
                            const struct MebConfig *config,
                            uint64_t frame_index,
                            uint32_t block_edge,
                            struct MebMotionField **out);

/**
 * Releases a motion field. Null is a no-op.
 */
void meb_motion_field_free(struct MebMotionField *field);

/**
 * Reads the block-grid dimensions of a motion field.
 */
enum MebStatus meb_motion_field_dimensions(const struct MebMotionField *field,
                                           uint32_t *cols,
                                           uint32_t *rows);

/**
 * Reads one block's motion vector and its matching error.
 */
enum MebStatus meb_motion_field_vector(const struct MebMotionField *field,
                                       uint32_t row,
                                       uint32_t col,
                                       int32_t *u,
                                       int32_t *v,
                                       uint32_t *sad);

/**
 * Reads the search cost: exact error evaluations, total and per block.
 */
enum MebStatus meb_motion_field_cost(const struct MebMotionField *field,
                                     uint64_t *total_evaluations,
                                     double *avg_evaluations_per_block);

/**
 * Rebuilds the predicted frame a motion field describes over `previous`.
 */
enum MebStatus meb_compensate(const struct MebFrame *previous,
                              const struct MebMotionField *field,
                              struct MebFrame **out);

/**
 * Peak signal-to-noise ratio between two equal-sized frames, in dB,
 * capped at 100 for identical frames.
 */
enum MebStatus meb_psnr(const struct MebFrame *a, const struct MebFrame *b, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEBENCH_H */
