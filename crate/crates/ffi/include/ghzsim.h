/* Copyright 2026 The ghzsim Developers */
/* SPDX-License-Identifier: Apache-2.0 */

#ifndef GHZSIM_H
#define GHZSIM_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define GHZ_ABI_VERSION 1

typedef enum GhzStatus {
  GHZ_STATUS_OK = 0,
  GHZ_STATUS_NULL_POINTER = 1,
  GHZ_STATUS_INVALID_ARGUMENT = 2,
  GHZ_STATUS_CONFIG = 3,
  GHZ_STATUS_UNDEFINED_AVERAGE = 4,
  GHZ_STATUS_DATA_FORMAT = 5,
  GHZ_STATUS_IO = 6,
  GHZ_STATUS_PANIC = 7,
} GhzStatus;

typedef enum GhzArrangement {
  GHZ_ARRANGEMENT_ARRANGED = 0,
  GHZ_ARRANGEMENT_DISARRANGED = 1,
  GHZ_ARRANGEMENT_UNRELATED = 2,
  GHZ_ARRANGEMENT_MIXED = 3,
} GhzArrangement;

// Outcome counts of one experiment.
typedef struct GhzCounts GhzCounts;

// Mermin report over three experiments.
typedef struct GhzReport GhzReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t ghz_abi_version(void);

// Message for the last failed call on this thread, or null. Valid until the
// next call on the same thread.
const char *ghz_last_error(void);

// Simulates `shots` runs of `experiment` (1, 2 or 3).
//
// `readout_flip` holds `flip_len` per-qubit flip probabilities starting at
// q0, or is null for a noiseless readout.
enum GhzStatus ghz_simulate(uint8_t experiment,
                            uint64_t shots,
                            uint64_t seed,
                            const double *readout_flip,
                            size_t flip_len,
                            struct GhzCounts **out);

// Writes three handles, one per experiment, into `out[0..3]`.
enum GhzStatus ghz_hv_sample(double arranged_fraction,
                             uint64_t shots_per_setting,
                             uint64_t seed,
                             struct GhzCounts **out);

// Count for the five-bit outcome `bits` (bit k is qubit k).
enum GhzStatus ghz_counts_get(const struct GhzCounts *counts, uint8_t bits, uint64_t *out);

enum GhzStatus ghz_counts_total(const struct GhzCounts *counts, uint64_t *out);

void ghz_counts_free(struct GhzCounts *counts);

// Analyzes the counts of experiments 1, 2 and 3.
enum GhzStatus ghz_analyze_counts(const struct GhzCounts *first,
                                  const struct GhzCounts *second,
                                  const struct GhzCounts *third,
                                  struct GhzReport **out);

// Analyzes a tallies document; null `json` selects the bundled table.
enum GhzStatus ghz_analyze_tallies(const char *json, struct GhzReport **out);

enum GhzStatus ghz_report_m3(const struct GhzReport *report, double *out);

enum GhzStatus ghz_report_standard_error(const struct GhzReport *report, double *out);

enum GhzStatus ghz_report_discard_fraction(const struct GhzReport *report, double *out);

// Per-experiment averages: `nosc[3]` for one phase gate, `osc[3]` for three.
enum GhzStatus ghz_report_averages(const struct GhzReport *report, double *nosc, double *osc);

void ghz_report_free(struct GhzReport *report);

enum GhzStatus ghz_calibrate_p(double m3_target, double *out);

enum GhzStatus ghz_expected_m3(double p, double *out);

enum GhzStatus ghz_classical_bound(double *min, double *max);

// Register/selector verdict for a comma-separated list of bundle names.
enum GhzStatus ghz_derive_relation(const char *bundles, enum GhzArrangement *out);

// Same as `ghz_derive_relation` for a named preset such as `fig13`.
enum GhzStatus ghz_derive_preset(const char *name, enum GhzArrangement *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GHZSIM_H */
