#ifndef PATHGAIN_H
#define PATHGAIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_POINTER = 1,
  PG_STATUS_INVALID_UTF8 = 2,
  PG_STATUS_INVALID_PARAMETER = 3,
  PG_STATUS_CONFIG = 4,
  PG_STATUS_MISSING_FIELDS = 5,
  PG_STATUS_IO = 6,
  PG_STATUS_CSV = 7,
  PG_STATUS_NUMERICAL = 8,
  PG_STATUS_GEOMETRY = 9,
  PG_STATUS_BUFFER_TOO_SMALL = 10,
  PG_STATUS_PANIC = 11,
} PgStatus;

// A measurement dataset.
typedef struct PgDataset PgDataset;

// A configured morphology or reference model.
typedef struct PgModel PgModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *pg_version(void);

// Copies the calling thread's last error message; empty after a
// successful call.
//
// # Safety
// `buf` must point to `len` writable bytes or be null; `needed` must be
// null or writable.
enum PgStatus pg_last_error_message(char *buf, size_t len, size_t *needed);

// Builds a model from TOML text and a morphology or reference model name.
//
// # Safety
// `toml` and `model` must be NUL-terminated strings; `out_model` must be
// writable. On success `*out_model` owns a handle to release with
// [`pg_model_free`].
enum PgStatus pg_model_from_toml(const char *toml, const char *model, struct PgModel **out_model);

// As [`pg_model_from_toml`] with the config read from a file.
//
// # Safety
// As [`pg_model_from_toml`], with `path` a NUL-terminated string.
enum PgStatus pg_model_from_file(const char *path, const char *model, struct PgModel **out_model);

// Releases a model. Null is ignored.
//
// # Safety
// `model` must come from a `pg_model_from_*` call and not be used after.
void pg_model_free(struct PgModel *model);

// Number of per-component gains the model reports.
//
// # Safety
// `model` must be a live handle; `out_count` writable.
enum PgStatus pg_model_component_count(const struct PgModel *model, size_t *out_count);

// Name of component `index`, NUL-terminated into `buf`.
//
// # Safety
// `model` must be a live handle; `buf` must point to `len` writable bytes;
// `needed` null or writable.
enum PgStatus pg_model_component_name(const struct PgModel *model,
                                      size_t index,
                                      char *buf,
                                      size_t len,
                                      size_t *needed);

// Path gain in dB at horizontal distance `range_m`, with its regime flags.
//
// # Safety
// `model` must be a live handle; `out_gain_db` writable; `out_flags` null
// or writable.
enum PgStatus pg_model_predict(const struct PgModel *model,
                               double range_m,
                               double *out_gain_db,
                               uint32_t *out_flags);

// Component gains in dB at `range_m`, written to `out_db[0..len]`; `len`
// must equal the component count.
//
// # Safety
// `model` must be a live handle; `out_db` must point to `len` writable
// doubles.
enum PgStatus pg_model_predict_components(const struct PgModel *model,
                                          double range_m,
                                          double *out_db,
                                          size_t len);

// Flag bits as `|`-joined names.
//
// # Safety
// `buf` must point to `len` writable bytes; `needed` null or writable.
enum PgStatus pg_flag_names(uint32_t flags, char *buf, size_t len, size_t *needed);

// Reads a measurement CSV (`range_m,path_gain_db[,street,flag]`).
//
// # Safety
// `path` must be a NUL-terminated string; `out_dataset` writable. Release
// the handle with [`pg_dataset_free`].
enum PgStatus pg_dataset_read_csv(const char *path,
                                  double frequency_hz,
                                  struct PgDataset **out_dataset);

// Builds a dataset from parallel range and gain arrays.
//
// # Safety
// `range_m` and `gain_db` must point to `n` doubles; `out_dataset`
// writable.
enum PgStatus pg_dataset_from_arrays(const double *range_m,
                                     const double *gain_db,
                                     size_t n,
                                     double frequency_hz,
                                     struct PgDataset **out_dataset);

// Releases a dataset. Null is ignored.
//
// # Safety
// `dataset` must come from a `pg_dataset_*` constructor and not be used
// after.
void pg_dataset_free(struct PgDataset *dataset);

// # Safety
// `dataset` must be a live handle; `out_len` writable.
enum PgStatus pg_dataset_len(const struct PgDataset *dataset, size_t *out_len);

// Least-squares `P_dB = intercept - 10 n log10(r)` fit.
//
// # Safety
// `dataset` must be a live handle; the outputs writable.
enum PgStatus pg_fit(const struct PgDataset *dataset,
                     double *out_intercept_db,
                     double *out_exponent,
                     double *out_rmse_db);

// RMS of measured minus predicted gain, in dB.
//
// # Safety
// `dataset` and `model` must be live handles; `out_rmse_db` writable.
enum PgStatus pg_rmse(const struct PgDataset *dataset,
                      const struct PgModel *model,
                      double *out_rmse_db);

// Runs every oracle suite; `strict` nonzero selects the strict numerical
// profile.
//
// # Safety
// `out_checks` and `out_failed` must be writable.
enum PgStatus pg_verify_all(int32_t strict, size_t *out_checks, size_t *out_failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHGAIN_H */
