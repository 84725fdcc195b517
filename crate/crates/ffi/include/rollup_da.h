#ifndef ROLLUP_DA_H
#define ROLLUP_DA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define RDA_SCALAR_LEN 32

#define RDA_G1_LEN 48

#define RDA_TARGET_LEN 32

typedef enum RdaStatus {
  RDA_STATUS_OK = 0,
  RDA_STATUS_NULL_POINTER = 1,
  RDA_STATUS_INVALID_ARGUMENT = 2,
  RDA_STATUS_DECODE = 3,
  RDA_STATUS_BUFFER_TOO_SMALL = 4,
  RDA_STATUS_BACKEND = 5,
  RDA_STATUS_PANIC = 255,
} RdaStatus;

/**
 * Reference string plus the proof-of-download and proof-of-existence
 * contexts built on it.
 */
typedef struct RdaSrs RdaSrs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *rda_status_message(enum RdaStatus status);

/**
 * Seeded setup supporting up to `max_parts` parts; free with [`rda_srs_free`].
 *
 * # Safety
 * `out_srs` must be valid for writes.
 */
enum RdaStatus rda_srs_setup(uintptr_t max_parts, uint64_t seed, struct RdaSrs **out_srs);

/**
 * # Safety
 * `srs` must come from this library and not be used afterwards. Null is a no-op.
 */
void rda_srs_free(struct RdaSrs *srs);

/**
 * # Safety
 * `srs` must be a live handle; `out_max` valid for writes.
 */
enum RdaStatus rda_srs_max_degree(const struct RdaSrs *srs, uintptr_t *out_max);

/**
 * # Safety
 * `buf` must hold `cap` bytes; `written` valid for writes.
 */
enum RdaStatus rda_srs_serialize(const struct RdaSrs *srs,
                                 uint8_t *buf,
                                 uintptr_t cap,
                                 uintptr_t *written);

/**
 * # Safety
 * `data` must hold `len` bytes; `out_srs` valid for writes.
 */
enum RdaStatus rda_srs_deserialize(const uint8_t *data, uintptr_t len, struct RdaSrs **out_srs);

/**
 * Hidden state of `payload` split into `k` parts, 48 bytes into `out_state`.
 *
 * # Safety
 * `payload` must hold `len` bytes; `out_state` must hold 48 bytes.
 */
enum RdaStatus rda_pod_prove(const struct RdaSrs *srs,
                             const uint8_t *payload,
                             uintptr_t len,
                             uintptr_t k,
                             uint8_t *out_state);

/**
 * # Safety
 * `state` must hold 48 bytes, `payload` `len` bytes; `out_valid` valid for writes.
 */
enum RdaStatus rda_pod_verify(const struct RdaSrs *srs,
                              const uint8_t *state,
                              const uint8_t *payload,
                              uintptr_t len,
                              uintptr_t k,
                              bool *out_valid);

/**
 * Evaluation witness of part `part_index`, 48 bytes into `out_witness`.
 *
 * # Safety
 * `payload` must hold `len` bytes; `out_witness` must hold 48 bytes.
 */
enum RdaStatus rda_part_witness(const struct RdaSrs *srs,
                                const uint8_t *payload,
                                uintptr_t len,
                                uintptr_t k,
                                uint32_t part_index,
                                uint8_t *out_witness);

/**
 * Uniform challenge scalar derived from `seed`, 32 bytes into `out_challenge`.
 *
 * # Safety
 * `out_challenge` must hold 32 bytes.
 */
enum RdaStatus rda_challenge_from_seed(uint64_t seed, uint8_t *out_challenge);

/**
 * Response to `challenge` from a stored part and its witness.
 *
 * # Safety
 * `challenge` 32 bytes, `part` `part_len` bytes, `witness` 48 bytes,
 * `buf` `cap` bytes; `written` valid for writes.
 */
enum RdaStatus rda_poe_respond(const struct RdaSrs *srs,
                               const uint8_t *challenge,
                               uint32_t part_index,
                               const uint8_t *part,
                               uintptr_t part_len,
                               const uint8_t *witness,
                               uint8_t *buf,
                               uintptr_t cap,
                               uintptr_t *written);

/**
 * # Safety
 * `challenge` 32 bytes, `proof` `proof_len` bytes, `state` 48 bytes;
 * `out_valid` valid for writes.
 */
enum RdaStatus rda_poe_verify(const struct RdaSrs *srs,
                              const uint8_t *challenge,
                              const uint8_t *proof,
                              uintptr_t proof_len,
                              const uint8_t *state,
                              bool *out_valid);

/**
 * Lucky number of an L1 block header on a ring of circumference `ring`.
 *
 * # Safety
 * `header` must hold `len` bytes; `out_luck` valid for writes.
 */
enum RdaStatus rda_lucky_number(const uint8_t *header,
                                uintptr_t len,
                                double ring,
                                double *out_luck);

/**
 * Target for a proposal at `distance`: 32 bytes big-endian, or `*out_full`
 * set when the target is the whole range `2^256`.
 *
 * # Safety
 * `out_target` must hold 32 bytes; `out_full` valid for writes.
 */
enum RdaStatus rda_difficulty_target(double a,
                                     double b,
                                     double distance,
                                     uint8_t *out_target,
                                     bool *out_full);

/**
 * Whether `SHA-256(header || nonce)` is below the target.
 *
 * # Safety
 * `header` `len` bytes, `nonce` and `target` 32 bytes; `out_ok` valid for writes.
 */
enum RdaStatus rda_check_nonce(const uint8_t *header,
                               uintptr_t len,
                               const uint8_t *nonce,
                               const uint8_t *target,
                               bool full,
                               bool *out_ok);

/**
 * Honest over colluding difficulty; `INFINITY` when the colluding target is zero.
 *
 * # Safety
 * `out_ratio` valid for writes.
 */
enum RdaStatus rda_difficulty_ratio(double a,
                                    double b,
                                    double d_honest,
                                    double d_colluder,
                                    double *out_ratio);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROLLUP_DA_H */
