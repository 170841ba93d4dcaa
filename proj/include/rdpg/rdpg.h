/* Copyright 2026 The rdpgcpd Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of librdpg: online change-point detection for graph streams
 * under a random dot product graph null model.
 *
 * Conventions:
 *   - Every fallible call returns rdpg_status; on failure the message is
 *     available from rdpg_last_error() (thread-local, valid until the next
 *     failing call on the same thread).
 *   - Objects are opaque handles released with the matching *_free function.
 *     Free functions accept NULL.
 *   - Dense matrices are N x N, row-major, doubles.
 *   - A detector keeps its model alive; the model handle may be freed first.
 */
#ifndef RDPG_RDPG_H
#define RDPG_RDPG_H

#include <stddef.h>
#include <stdint.h>

#if defined(RDPG_BUILDING_LIBRARY)
#define RDPG_API __attribute__((visibility("default")))
#else
#define RDPG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdpg_status {
    RDPG_OK = 0,
    RDPG_ERR_INVALID_ARGUMENT = 1, /* NULL pointer, bad enum value */
    RDPG_ERR_DIMENSION = 2,        /* shape or size mismatch */
    RDPG_ERR_DOMAIN = 3,           /* parameter out of range */
    RDPG_ERR_PARSE = 4,            /* malformed input file */
    RDPG_ERR_IO = 5,               /* file could not be read or written */
    RDPG_ERR_INDEFINITE = 6,       /* negative retained eigenvalue */
    RDPG_ERR_USAGE = 7,            /* call not valid in the current state */
    RDPG_ERR_INTERNAL = 99
} rdpg_status;

RDPG_API const char* rdpg_last_error(void);
RDPG_API const char* rdpg_status_string(rdpg_status status);
RDPG_API const char* rdpg_version(void);

/* ---- Graph sequences ---------------------------------------------------- */

typedef struct rdpg_sequence rdpg_sequence;

typedef enum rdpg_format { RDPG_FORMAT_EDGE_LIST = 0, RDPG_FORMAT_DENSE_CSV = 1 } rdpg_format;

RDPG_API rdpg_status rdpg_sequence_create(size_t n_nodes, int directed, rdpg_sequence** out);
/* Appends one snapshot; t must exceed the time of the previous snapshot. */
RDPG_API rdpg_status rdpg_sequence_append(rdpg_sequence* seq, const double* weights, int64_t t);
/* Edge list file, or a dense CSV file / directory of CSV files. */
RDPG_API rdpg_status rdpg_sequence_load(const char* path, rdpg_format format, int directed, rdpg_sequence** out);
/* Canonical edge list. */
RDPG_API rdpg_status rdpg_sequence_save(const rdpg_sequence* seq, const char* path);
RDPG_API size_t rdpg_sequence_size(const rdpg_sequence* seq);
RDPG_API size_t rdpg_sequence_n_nodes(const rdpg_sequence* seq);
RDPG_API int rdpg_sequence_directed(const rdpg_sequence* seq);
/* Copies snapshot `index` into `weights` (N*N) and its time into `t` (nullable). */
RDPG_API rdpg_status rdpg_sequence_get(const rdpg_sequence* seq, size_t index, double* weights, int64_t* t);
/* Snapshots [first, last). */
RDPG_API rdpg_status rdpg_sequence_slice(const rdpg_sequence* seq, size_t first, size_t last, rdpg_sequence** out);
/* Original label of a node; NULL when out of range. */
RDPG_API const char* rdpg_sequence_label(const rdpg_sequence* seq, size_t node);
RDPG_API void rdpg_sequence_free(rdpg_sequence* seq);

/* ---- Null model --------------------------------------------------------- */

typedef struct rdpg_model rdpg_model;

typedef enum rdpg_aggregation { RDPG_AGGREGATE_NORM = 0, RDPG_AGGREGATE_ENTRYWISE = 1 } rdpg_aggregation;

typedef struct rdpg_train_options {
    int d;                /* embedding dimension, 0 = scree elbow */
    int d_extra;          /* added to the elbow */
    int loo_reps;         /* leave-one-out repetitions */
    double loo_quantile;  /* quantile level of the error estimate */
    int weighted;         /* also embed second moments */
    int clamp_negative;   /* clamp negative retained eigenvalues instead of failing */
    rdpg_aggregation aggregation;
    uint64_t seed;
} rdpg_train_options;

RDPG_API void rdpg_train_options_init(rdpg_train_options* options);

typedef struct rdpg_model_info {
    size_t n_nodes;
    size_t r; /* length of the monitoring vector */
    int d;
    int directed;
    int weighted;
    size_t m; /* training snapshots, 0 for oracle models */
    double e_hat_sq_norm;
    double sigma_l1;
    size_t n_warnings;
} rdpg_model_info;

/* Trains on every snapshot of `train`. `options` may be NULL for defaults. */
RDPG_API rdpg_status rdpg_model_train(const rdpg_sequence* train, const rdpg_train_options* options,
                                      rdpg_model** out);
RDPG_API rdpg_status rdpg_model_save(const rdpg_model* model, const char* path);
RDPG_API rdpg_status rdpg_model_load(const char* path, rdpg_model** out);
RDPG_API rdpg_status rdpg_model_get_info(const rdpg_model* model, rdpg_model_info* info);
RDPG_API const char* rdpg_model_warning(const rdpg_model* model, size_t index);
RDPG_API void rdpg_model_free(rdpg_model* model);

/* ---- Detector ----------------------------------------------------------- */

typedef struct rdpg_detector rdpg_detector;

typedef enum rdpg_statistic {
    RDPG_STAT_CUSUM = 0,
    RDPG_STAT_MOSUM = 1,
    RDPG_STAT_MMOSUM = 2,
    RDPG_STAT_EWSUM = 3
} rdpg_statistic;

typedef enum rdpg_threshold {
    RDPG_THRESHOLD_THREE_SIGMA = 0,
    RDPG_THRESHOLD_TWO_SIGMA = 1,
    RDPG_THRESHOLD_QUANTILE = 2
} rdpg_threshold;

typedef struct rdpg_detector_options {
    rdpg_statistic statistic;
    size_t window; /* MOSUM L */
    double h;      /* mMOSUM fraction */
    double beta;   /* EWSUM forgetting factor */
    rdpg_threshold threshold;
    double alpha;
    size_t mc_samples;
    uint64_t seed;
    int projection; /* monitor (P - A) X instead of the residual; never alarms */
} rdpg_detector_options;

RDPG_API void rdpg_detector_options_init(rdpg_detector_options* options);

typedef struct rdpg_decision {
    int64_t k;
    double gamma;
    double gamma_weighted;
    double threshold; /* NaN for the projection statistic */
    int alarm;
} rdpg_decision;

RDPG_API rdpg_status rdpg_detector_create(const rdpg_model* model, const rdpg_detector_options* options,
                                          rdpg_detector** out);
RDPG_API rdpg_status rdpg_detector_step(rdpg_detector* det, const rdpg_sequence* seq, size_t index,
                                        rdpg_decision* decision);
RDPG_API rdpg_status rdpg_detector_step_dense(rdpg_detector* det, const double* weights, rdpg_decision* decision);
/* k of the first alarm, or -1. */
RDPG_API int64_t rdpg_detector_first_alarm(const rdpg_detector* det);
RDPG_API void rdpg_detector_free(rdpg_detector* det);

/* ---- Simulation presets ------------------------------------------------- */

typedef struct rdpg_scenario_params {
    size_t n;
    size_t m;
    int64_t k_c;
    int64_t horizon;
    double p;
    double q1;
    double q2;
    double p_after;
    double lambda;
    double lambda_after;
    uint64_t seed;
} rdpg_scenario_params;

RDPG_API rdpg_status rdpg_scenario_defaults(const char* name, rdpg_scenario_params* params);
/* Training snapshots and monitoring stream of a preset. */
RDPG_API rdpg_status rdpg_simulate(const char* name, const rdpg_scenario_params* params, rdpg_sequence** train,
                                   rdpg_sequence** monitor);
/* Expected adjacency before and after the change (N*N each, nullable). */
RDPG_API rdpg_status rdpg_scenario_expectation(const char* name, const rdpg_scenario_params* params,
                                               double* p_before, double* p_after);
RDPG_API int rdpg_scenario_weighted(const char* name);

/* ---- Delay prediction --------------------------------------------------- */

typedef struct rdpg_delay_report {
    int detectable;
    double margin;
    double e_norm;
    double delta_norm;
    double cos_theta;
    int64_t predicted_k; /* -1 when the threshold is not reached within the horizon */
} rdpg_delay_report;

/* delta = P_before - P_after; P_before defaults to the model's estimate. */
RDPG_API rdpg_status rdpg_predict_delay(const rdpg_model* model, const double* p_after, const double* p_before,
                                        int64_t k_c, int64_t horizon, double n_sigma, rdpg_delay_report* report);
RDPG_API rdpg_status rdpg_er_detectability_bound(double p, double delta, size_t n, size_t m, double* bound);

/* ---- Embeddings --------------------------------------------------------- */

typedef struct rdpg_embedding rdpg_embedding;

/* ASE (or directed ASE) of one snapshot. d = 0 picks the scree elbow. */
RDPG_API rdpg_status rdpg_embed(const rdpg_sequence* seq, size_t index, int d, rdpg_embedding** out);
/* Omnibus embedding of two undirected snapshots. */
RDPG_API rdpg_status rdpg_embed_omnibus(const rdpg_sequence* a, size_t index_a, const rdpg_sequence* b,
                                        size_t index_b, int d, rdpg_embedding** out);
/* Blocks: 1 for ASE, 2 for directed ASE (out, in) and omnibus (a, b). */
RDPG_API size_t rdpg_embedding_blocks(const rdpg_embedding* emb);
RDPG_API size_t rdpg_embedding_rows(const rdpg_embedding* emb);
RDPG_API int rdpg_embedding_dim(const rdpg_embedding* emb);
/* Copies block `block` (rows x dim, row-major). */
RDPG_API rdpg_status rdpg_embedding_block(const rdpg_embedding* emb, size_t block, double* out);
RDPG_API void rdpg_embedding_free(rdpg_embedding* emb);

#ifdef __cplusplus
}
#endif

#endif /* RDPG_RDPG_H */
