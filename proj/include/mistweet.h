/* Apache License, Version 2.0, refer to LICENSE.txt */
#ifndef MISTWEET_H
#define MISTWEET_H

/* C interface to the mistweet library.
 *
 * Every function returns a status code (mistweet_status) unless documented
 * otherwise. On failure the thread-local message from mistweet_last_error()
 * describes the problem; it stays valid until the next failing call on the
 * same thread. Out-parameters are written only on MISTWEET_OK.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mistweet_status {
    MISTWEET_OK = 0,
    MISTWEET_INPUT_ERROR = 2,
    MISTWEET_PRECONDITION_ERROR = 3,
    MISTWEET_INTERNAL_ERROR = 4
} mistweet_status;

/* Library version, e.g. "1.0.0". Static storage, never freed. */
const char* mistweet_version(void);

/* Message for the most recent failure on the calling thread, or "" when the
 * last call succeeded. */
const char* mistweet_last_error(void);

/* ---- pipeline ---- */

typedef struct mistweet_config mistweet_config;

/* Returns NULL only on allocation failure. */
mistweet_config* mistweet_config_new(void);
void mistweet_config_free(mistweet_config* config);

/* Sets a string option. Keys mirror the CLI flags: input, out, seed, threads,
 * lexicon_dir, format, k, k_grid, iterations, alpha, beta, holdout_fraction,
 * folds, model, trees, features_per_split, max_depth, min_samples_split,
 * knn_k, test_fraction, features, top_words, model_path, ranking_path.
 * Values are parsed when the pipeline runs; numeric keys are validated here. */
int mistweet_config_set(mistweet_config* config, const char* key, const char* value);

/* Runs one pipeline stage: ingest, analyze, topics, train, explain, ablate,
 * or report. The returned status is the intended process exit code. */
int mistweet_run(const char* subcommand, const mistweet_config* config);

/* ---- text kernels (embedded default lexicons) ---- */

/* Normalizes raw tweet text. *out receives a NUL-terminated UTF-8 string
 * owned by the caller; release it with mistweet_string_free. */
int mistweet_clean_text(const char* text, char** out);
void mistweet_string_free(char* s);

/* Compound sentiment of the cleaned text, in [-1, 1]. */
int mistweet_sentiment_compound(const char* text, double* out);

/* Number of columns in the frozen feature schema (18). */
size_t mistweet_feature_count(void);

/* Name of schema column i, or NULL when i is out of range. Static storage. */
const char* mistweet_feature_name(size_t i);

/* Extracts the full schema row for one text; out must hold
 * mistweet_feature_count() doubles. */
int mistweet_text_features(const char* text, double* out);

/* ---- statistics ---- */

int mistweet_ks_two_sample(const double* xs, size_t n_xs, const double* ys, size_t n_ys,
                           double* d, double* p_value);

int mistweet_kendall_tau_b(const double* xs, const double* ys, size_t n, double* tau);

/* counts is row-major n_subjects x n_categories. */
int mistweet_fleiss_kappa(const int64_t* counts, size_t n_subjects, size_t n_categories,
                          double* kappa);

/* ---- serialized models ---- */

typedef struct mistweet_model mistweet_model;

int mistweet_model_load(const char* path, mistweet_model** out);
void mistweet_model_free(mistweet_model* model);

int mistweet_model_num_features(const mistweet_model* model, size_t* out);

/* Probability of the positive (misleading) class for one row of n features. */
int mistweet_model_predict(const mistweet_model* model, const double* x, size_t n, double* out);

/* Per-feature Shapley attributions; phi must hold n doubles. base and
 * prediction may be NULL. Guarantees base + sum(phi) == prediction to 1e-9. */
int mistweet_model_shap(const mistweet_model* model, const double* x, size_t n, double* phi,
                        double* base, double* prediction);

#ifdef __cplusplus
}
#endif

#endif /* MISTWEET_H */
