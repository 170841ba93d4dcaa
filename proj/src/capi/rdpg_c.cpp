// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdpg/rdpg.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "rdpg/error.hpp"
#include "rdpg/ingest.hpp"
#include "rdpg/monitor.hpp"
#include "rdpg/nullmodel.hpp"
#include "rdpg/scenarios.hpp"
#include "rdpg/spectral.hpp"

struct rdpg_sequence {
    rdpg::LabeledSequence data;
    std::size_t n = 0;
    bool directed = false;
};

struct rdpg_model {
    std::shared_ptr<const rdpg::NullModel> model;
};

struct rdpg_detector {
    std::shared_ptr<const rdpg::NullModel> model;
    std::unique_ptr<rdpg::Detector> detector;
};

struct rdpg_embedding {
    std::vector<rdpg::Matrix> blocks;
};

namespace {

thread_local std::string g_last_error;

// Unknown enum value passed across the C boundary.
struct BadEnum : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

rdpg_status fail(rdpg_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename F>
rdpg_status guarded(F&& f) {
    try {
        f();
        return RDPG_OK;
    } catch (const rdpg::ParseError& e) {
        return fail(RDPG_ERR_PARSE, e.what());
    } catch (const rdpg::IoError& e) {
        return fail(RDPG_ERR_IO, e.what());
    } catch (const rdpg::DimensionError& e) {
        return fail(RDPG_ERR_DIMENSION, e.what());
    } catch (const rdpg::DomainError& e) {
        return fail(RDPG_ERR_DOMAIN, e.what());
    } catch (const rdpg::IndefiniteSpectrumError& e) {
        return fail(RDPG_ERR_INDEFINITE, e.what());
    } catch (const rdpg::UsageError& e) {
        return fail(RDPG_ERR_USAGE, e.what());
    } catch (const BadEnum& e) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, e.what());
    } catch (const rdpg::Error& e) {
        return fail(RDPG_ERR_INTERNAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RDPG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RDPG_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RDPG_ERR_INTERNAL, "unknown error");
    }
}

rdpg::Matrix from_row_major(const double* data, std::size_t n) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto nn = static_cast<Eigen::Index>(n);
    return Eigen::Map<const RowMajor>(data, nn, nn);
}

void to_row_major(const rdpg::Matrix& m, double* out) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMajor>(out, m.rows(), m.cols()) = m;
}

rdpg::ScenarioConfig to_config(const rdpg_scenario_params& p) {
    rdpg::ScenarioConfig c;
    c.n = p.n;
    c.m = p.m;
    c.k_c = p.k_c;
    c.horizon = p.horizon;
    c.p = p.p;
    c.q1 = p.q1;
    c.q2 = p.q2;
    c.p_after = p.p_after;
    c.lambda = p.lambda;
    c.lambda_after = p.lambda_after;
    c.seed = p.seed;
    return c;
}

rdpg_sequence* wrap(rdpg::GraphSequence seq) {
    auto out = std::make_unique<rdpg_sequence>();
    out->n = seq.n_nodes();
    out->directed = seq.directed();
    for (std::size_t i = 0; i < out->n; ++i) {
        out->data.labels.push_back(std::to_string(i));
    }
    out->data.graphs = std::move(seq);
    return out.release();
}

std::size_t checked_index(const rdpg_sequence* seq, std::size_t index) {
    if (index >= seq->data.graphs.size()) {
        throw rdpg::UsageError("snapshot index " + std::to_string(index) + " out of range (size " +
                               std::to_string(seq->data.graphs.size()) + ")");
    }
    return index;
}

} // namespace

extern "C" {

const char* rdpg_last_error(void) { return g_last_error.c_str(); }

const char* rdpg_status_string(rdpg_status status) {
    switch (status) {
    case RDPG_OK:
        return "ok";
    case RDPG_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case RDPG_ERR_DIMENSION:
        return "dimension mismatch";
    case RDPG_ERR_DOMAIN:
        return "parameter out of range";
    case RDPG_ERR_PARSE:
        return "parse error";
    case RDPG_ERR_IO:
        return "i/o error";
    case RDPG_ERR_INDEFINITE:
        return "indefinite spectrum";
    case RDPG_ERR_USAGE:
        return "usage error";
    case RDPG_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char* rdpg_version(void) { return "0.1.0"; }

rdpg_status rdpg_sequence_create(size_t n_nodes, int directed, rdpg_sequence** out) {
    if (out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null output pointer");
    }
    *out = nullptr;
    return guarded([&] {
        if (n_nodes < 1) {
            throw rdpg::DomainError("a sequence needs at least one node");
        }
        auto seq = std::make_unique<rdpg_sequence>();
        seq->n = n_nodes;
        seq->directed = directed != 0;
        for (std::size_t i = 0; i < n_nodes; ++i) {
            seq->data.labels.push_back(std::to_string(i));
        }
        *out = seq.release();
    });
}

rdpg_status rdpg_sequence_append(rdpg_sequence* seq, const double* weights, int64_t t) {
    if (seq == nullptr || weights == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        seq->data.graphs.push_back(rdpg::GraphSnapshot(from_row_major(weights, seq->n), seq->directed, t));
    });
}

rdpg_status rdpg_sequence_load(const char* path, rdpg_format format, int directed, rdpg_sequence** out) {
    if (path == nullptr || out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    if (format != RDPG_FORMAT_EDGE_LIST && format != RDPG_FORMAT_DENSE_CSV) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "unknown format");
    }
    return guarded([&] {
        auto seq = std::make_unique<rdpg_sequence>();
        seq->data = rdpg::ingest(path,
                                 format == RDPG_FORMAT_EDGE_LIST ? rdpg::StreamFormat::EdgeList
                                                                 : rdpg::StreamFormat::DenseCsv,
                                 directed != 0);
        seq->n = seq->data.graphs.n_nodes();
        seq->directed = directed != 0;
        *out = seq.release();
    });
}

rdpg_status rdpg_sequence_save(const rdpg_sequence* seq, const char* path) {
    if (seq == nullptr || path == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        std::ofstream out(path);
        if (!out) {
            throw rdpg::IoError(std::string("cannot open ") + path + " for writing");
        }
        rdpg::write_edge_list(seq->data, out);
        if (!out) {
            throw rdpg::IoError(std::string("failed writing ") + path);
        }
    });
}

size_t rdpg_sequence_size(const rdpg_sequence* seq) { return seq ? seq->data.graphs.size() : 0; }
size_t rdpg_sequence_n_nodes(const rdpg_sequence* seq) { return seq ? seq->n : 0; }
int rdpg_sequence_directed(const rdpg_sequence* seq) { return seq && seq->directed ? 1 : 0; }

rdpg_status rdpg_sequence_get(const rdpg_sequence* seq, size_t index, double* weights, int64_t* t) {
    if (seq == nullptr || weights == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto& snap = seq->data.graphs[checked_index(seq, index)];
        to_row_major(snap.weights(), weights);
        if (t != nullptr) {
            *t = snap.time();
        }
    });
}

rdpg_status rdpg_sequence_slice(const rdpg_sequence* seq, size_t first, size_t last, rdpg_sequence** out) {
    if (seq == nullptr || out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto slice = std::make_unique<rdpg_sequence>();
        slice->data.graphs = seq->data.graphs.slice(first, last);
        slice->data.labels = seq->data.labels;
        slice->n = seq->n;
        slice->directed = seq->directed;
        *out = slice.release();
    });
}

const char* rdpg_sequence_label(const rdpg_sequence* seq, size_t node) {
    if (seq == nullptr || node >= seq->data.labels.size()) {
        return nullptr;
    }
    return seq->data.labels[node].c_str();
}

void rdpg_sequence_free(rdpg_sequence* seq) { delete seq; }

void rdpg_train_options_init(rdpg_train_options* options) {
    if (options == nullptr) {
        return;
    }
    const rdpg::TrainOptions d;
    options->d = d.d;
    options->d_extra = d.d_extra;
    options->loo_reps = d.loo_reps;
    options->loo_quantile = d.loo_quantile;
    options->weighted = d.weighted ? 1 : 0;
    options->clamp_negative = d.negative_eigenvalues == rdpg::NegativeEigenvalues::Clamp ? 1 : 0;
    options->aggregation =
        d.aggregation == rdpg::ErrorAggregation::Norm ? RDPG_AGGREGATE_NORM : RDPG_AGGREGATE_ENTRYWISE;
    options->seed = d.seed;
}

rdpg_status rdpg_model_train(const rdpg_sequence* train, const rdpg_train_options* options, rdpg_model** out) {
    if (train == nullptr || out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    rdpg_train_options opts;
    rdpg_train_options_init(&opts);
    if (options != nullptr) {
        opts = *options;
    }
    if (opts.aggregation != RDPG_AGGREGATE_NORM && opts.aggregation != RDPG_AGGREGATE_ENTRYWISE) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "unknown aggregation");
    }
    return guarded([&] {
        rdpg::TrainOptions o;
        o.d = opts.d;
        o.d_extra = opts.d_extra;
        o.loo_reps = opts.loo_reps;
        o.loo_quantile = opts.loo_quantile;
        o.weighted = opts.weighted != 0;
        o.negative_eigenvalues =
            opts.clamp_negative ? rdpg::NegativeEigenvalues::Clamp : rdpg::NegativeEigenvalues::Error;
        o.aggregation =
            opts.aggregation == RDPG_AGGREGATE_NORM ? rdpg::ErrorAggregation::Norm : rdpg::ErrorAggregation::Entrywise;
        o.seed = opts.seed;
        auto model = std::make_unique<rdpg_model>();
        model->model = std::make_shared<const rdpg::NullModel>(rdpg::train(train->data.graphs, o));
        *out = model.release();
    });
}

rdpg_status rdpg_model_save(const rdpg_model* model, const char* path) {
    if (model == nullptr || path == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { rdpg::save_model(*model->model, std::string(path)); });
}

rdpg_status rdpg_model_load(const char* path, rdpg_model** out) {
    if (path == nullptr || out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto model = std::make_unique<rdpg_model>();
        model->model = std::make_shared<const rdpg::NullModel>(rdpg::load_model(std::string(path)));
        *out = model.release();
    });
}

rdpg_status rdpg_model_get_info(const rdpg_model* model, rdpg_model_info* info) {
    if (model == nullptr || info == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    const auto& m = *model->model;
    info->n_nodes = m.n_nodes();
    info->r = m.r();
    info->d = m.d();
    info->directed = m.directed ? 1 : 0;
    info->weighted = m.weighted ? 1 : 0;
    info->m = m.m;
    info->e_hat_sq_norm = m.e_hat.squaredNorm();
    info->sigma_l1 = m.sigma.cwiseAbs().sum();
    info->n_warnings = m.warnings.size();
    return RDPG_OK;
}

const char* rdpg_model_warning(const rdpg_model* model, size_t index) {
    if (model == nullptr || index >= model->model->warnings.size()) {
        return nullptr;
    }
    return model->model->warnings[index].c_str();
}

void rdpg_model_free(rdpg_model* model) { delete model; }

void rdpg_detector_options_init(rdpg_detector_options* options) {
    if (options == nullptr) {
        return;
    }
    const rdpg::ThresholdRule rule;
    options->statistic = RDPG_STAT_CUSUM;
    options->window = 10;
    options->h = 0.4;
    options->beta = 0.9;
    options->threshold = RDPG_THRESHOLD_THREE_SIGMA;
    options->alpha = rule.alpha;
    options->mc_samples = rule.mc_samples;
    options->seed = rule.seed;
    options->projection = 0;
}

rdpg_status rdpg_detector_create(const rdpg_model* model, const rdpg_detector_options* options,
                                 rdpg_detector** out) {
    if (model == nullptr || out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    rdpg_detector_options o;
    rdpg_detector_options_init(&o);
    if (options != nullptr) {
        o = *options;
    }
    return guarded([&] {
        rdpg::StatisticKind kind;
        switch (o.statistic) {
        case RDPG_STAT_CUSUM:
            kind = rdpg::StatisticKind::cusum();
            break;
        case RDPG_STAT_MOSUM:
            kind = rdpg::StatisticKind::mosum(o.window);
            break;
        case RDPG_STAT_MMOSUM:
            kind = rdpg::StatisticKind::mmosum(o.h);
            break;
        case RDPG_STAT_EWSUM:
            kind = rdpg::StatisticKind::ewsum(o.beta);
            break;
        default:
            throw BadEnum("unknown statistic");
        }
        rdpg::ThresholdRule rule;
        switch (o.threshold) {
        case RDPG_THRESHOLD_THREE_SIGMA:
            rule = rdpg::ThresholdRule::three_sigma();
            break;
        case RDPG_THRESHOLD_TWO_SIGMA:
            rule = rdpg::ThresholdRule::two_sigma();
            break;
        case RDPG_THRESHOLD_QUANTILE:
            rule = rdpg::ThresholdRule::quantile(o.alpha, o.mc_samples, o.seed);
            break;
        default:
            throw BadEnum("unknown threshold rule");
        }
        auto det = std::make_unique<rdpg_detector>();
        det->model = model->model;
        det->detector = std::make_unique<rdpg::Detector>(
            *det->model, kind, rule,
            o.projection ? rdpg::MonitoringFunction::Projection : rdpg::MonitoringFunction::Residual);
        *out = det.release();
    });
}

static void fill_decision(const rdpg::Decision& d, rdpg_decision* out) {
    out->k = d.k;
    out->gamma = d.gamma;
    out->gamma_weighted = d.gamma_weighted;
    out->threshold = d.threshold;
    out->alarm = d.alarm ? 1 : 0;
}

rdpg_status rdpg_detector_step(rdpg_detector* det, const rdpg_sequence* seq, size_t index,
                               rdpg_decision* decision) {
    if (det == nullptr || seq == nullptr || decision == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { fill_decision(det->detector->step(seq->data.graphs[checked_index(seq, index)]), decision); });
}

rdpg_status rdpg_detector_step_dense(rdpg_detector* det, const double* weights, rdpg_decision* decision) {
    if (det == nullptr || weights == nullptr || decision == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const rdpg::GraphSnapshot snap(from_row_major(weights, det->model->n_nodes()), det->model->directed);
        fill_decision(det->detector->step(snap), decision);
    });
}

int64_t rdpg_detector_first_alarm(const rdpg_detector* det) {
    if (det == nullptr) {
        return -1;
    }
    const auto k = det->detector->first_alarm();
    return k ? *k : -1;
}

void rdpg_detector_free(rdpg_detector* det) { delete det; }

rdpg_status rdpg_scenario_defaults(const char* name, rdpg_scenario_params* params) {
    if (name == nullptr || params == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto c = rdpg::scenario_defaults(name);
        params->n = c.n;
        params->m = c.m;
        params->k_c = c.k_c;
        params->horizon = c.horizon;
        params->p = c.p;
        params->q1 = c.q1;
        params->q2 = c.q2;
        params->p_after = c.p_after;
        params->lambda = c.lambda;
        params->lambda_after = c.lambda_after;
        params->seed = c.seed;
    });
}

rdpg_status rdpg_simulate(const char* name, const rdpg_scenario_params* params, rdpg_sequence** train,
                          rdpg_sequence** monitor) {
    if (name == nullptr || params == nullptr || train == nullptr || monitor == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    *train = nullptr;
    *monitor = nullptr;
    return guarded([&] {
        const rdpg::Scenario sc(name, to_config(*params));
        std::unique_ptr<rdpg_sequence> tr(wrap(sc.training_sequence()));
        std::unique_ptr<rdpg_sequence> mo(wrap(sc.monitoring_sequence()));
        *train = tr.release();
        *monitor = mo.release();
    });
}

rdpg_status rdpg_scenario_expectation(const char* name, const rdpg_scenario_params* params, double* p_before,
                                      double* p_after) {
    if (name == nullptr || params == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const rdpg::Scenario sc(name, to_config(*params));
        if (p_before != nullptr) {
            to_row_major(sc.p_before(), p_before);
        }
        if (p_after != nullptr) {
            to_row_major(sc.p_after(), p_after);
        }
    });
}

int rdpg_scenario_weighted(const char* name) { return name != nullptr && std::strcmp(name, "weighted-sbm") == 0; }

rdpg_status rdpg_predict_delay(const rdpg_model* model, const double* p_after, const double* p_before, int64_t k_c,
                               int64_t horizon, double n_sigma, rdpg_delay_report* report) {
    if (model == nullptr || p_after == nullptr || report == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto& m = *model->model;
        const std::size_t n = m.n_nodes();
        std::optional<rdpg::Matrix> before;
        if (p_before != nullptr) {
            before = from_row_major(p_before, n);
        }
        const auto spec = rdpg::make_change_spec(m, from_row_major(p_after, n), before);
        const auto det = rdpg::detectability(m.e_hat, spec.delta);
        const auto k = rdpg::predict_delay(k_c, m.e_hat, m.sigma, spec.sigma_after, spec.delta, m.r(), horizon,
                                           n_sigma);
        report->detectable = det.detectable ? 1 : 0;
        report->margin = det.margin;
        report->e_norm = det.e_norm;
        report->delta_norm = det.delta_norm;
        report->cos_theta = det.cos_theta;
        report->predicted_k = k ? *k : -1;
    });
}

rdpg_status rdpg_er_detectability_bound(double p, double delta, size_t n, size_t m, double* bound) {
    if (bound == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { *bound = rdpg::er_detectability_bound(p, delta, n, m); });
}

rdpg_status rdpg_embed(const rdpg_sequence* seq, size_t index, int d, rdpg_embedding** out) {
    if (seq == nullptr || out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const auto& snap = seq->data.graphs[checked_index(seq, index)];
        int dim = d;
        if (dim <= 0) {
            dim = rdpg::select_dimension(rdpg::scree_spectrum(snap.weights(), snap.directed())).d;
        }
        auto emb = std::make_unique<rdpg_embedding>();
        if (snap.directed()) {
            const auto e = rdpg::directed_ase(snap.weights(), dim);
            emb->blocks = {e.left, e.right};
        } else {
            emb->blocks = {rdpg::ase(snap.weights(), dim, rdpg::NegativeEigenvalues::Clamp).left};
        }
        *out = emb.release();
    });
}

rdpg_status rdpg_embed_omnibus(const rdpg_sequence* a, size_t index_a, const rdpg_sequence* b, size_t index_b,
                               int d, rdpg_embedding** out) {
    if (a == nullptr || b == nullptr || out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const auto& sa = a->data.graphs[checked_index(a, index_a)];
        const auto& sb = b->data.graphs[checked_index(b, index_b)];
        if (sa.directed() || sb.directed()) {
            throw rdpg::UsageError("omnibus embedding needs undirected snapshots");
        }
        int dim = d;
        if (dim <= 0) {
            const rdpg::Matrix avg = 0.5 * (sa.weights() + sb.weights());
            dim = rdpg::select_dimension(rdpg::scree_spectrum(avg, false)).d;
        }
        auto [xa, xb] = rdpg::omnibus_embed(sa.weights(), sb.weights(), dim, rdpg::NegativeEigenvalues::Clamp);
        auto emb = std::make_unique<rdpg_embedding>();
        emb->blocks = {std::move(xa), std::move(xb)};
        *out = emb.release();
    });
}

size_t rdpg_embedding_blocks(const rdpg_embedding* emb) { return emb ? emb->blocks.size() : 0; }

size_t rdpg_embedding_rows(const rdpg_embedding* emb) {
    return emb && !emb->blocks.empty() ? static_cast<size_t>(emb->blocks.front().rows()) : 0;
}

int rdpg_embedding_dim(const rdpg_embedding* emb) {
    return emb && !emb->blocks.empty() ? static_cast<int>(emb->blocks.front().cols()) : 0;
}

rdpg_status rdpg_embedding_block(const rdpg_embedding* emb, size_t block, double* out) {
    if (emb == nullptr || out == nullptr) {
        return fail(RDPG_ERR_INVALID_ARGUMENT, "null argument");
    }
    if (block >= emb->blocks.size()) {
        return fail(RDPG_ERR_USAGE, "embedding block index out of range");
    }
    to_row_major(emb->blocks[block], out);
    return RDPG_OK;
}

void rdpg_embedding_free(rdpg_embedding* emb) { delete emb; }

} // extern "C"
