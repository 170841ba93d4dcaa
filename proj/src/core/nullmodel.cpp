// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdpg/nullmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdpg/error.hpp"

namespace rdpg {
namespace {

constexpr double kVarianceClip = 1e-9;

int resolve_dimension(const Matrix& mean, bool directed, const TrainOptions& options) {
    if (options.d > 0) {
        return std::min<int>(options.d, static_cast<int>(mean.rows()));
    }
    const auto spectrum = scree_spectrum(mean, directed);
    return select_dimension(spectrum, options.d_extra).d;
}

Embedding embed_mean(const Matrix& mean, int d, bool directed, NegativeEigenvalues policy) {
    return directed ? directed_ase(mean, d) : ase(mean, d, policy);
}

void check_lengths(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size()) {
        throw DimensionError(std::string(what) + ": vector lengths differ (" + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + ")");
    }
}

} // namespace

Vector bernoulli_variance(const Vector& p) {
    return p.unaryExpr([](double v) {
        const double c = std::clamp(v, kVarianceClip, 1.0 - kVarianceClip);
        return c * (1.0 - c);
    });
}

double quantile(std::vector<double>& values, double q) {
    if (values.empty()) {
        throw UsageError("quantile of an empty set");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw DomainError("quantile level must be in [0, 1]");
    }
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
    const double v_lo = values[lo];
    if (frac == 0.0 || lo + 1 >= values.size()) {
        return v_lo;
    }
    const double v_hi = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
    return v_lo + frac * (v_hi - v_lo);
}

Vector aggregate_error(const Matrix& samples, double q, ErrorAggregation aggregation) {
    const Eigen::Index r = samples.rows();
    const Eigen::Index reps = samples.cols();
    if (reps == 0) {
        return Vector::Zero(r);
    }
    if (aggregation == ErrorAggregation::Norm) {
        std::vector<std::pair<double, Eigen::Index>> norms;
        norms.reserve(static_cast<std::size_t>(reps));
        for (Eigen::Index j = 0; j < reps; ++j) {
            norms.emplace_back(samples.col(j).norm(), j);
        }
        std::sort(norms.begin(), norms.end());
        // Nearest-rank order statistic, so ê is one of the observed matrices.
        const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(reps)));
        const std::size_t idx = std::clamp<std::size_t>(rank, 1, static_cast<std::size_t>(reps)) - 1;
        return samples.col(norms[idx].second);
    }
    Vector out(r);
    std::vector<double> mags(static_cast<std::size_t>(reps));
    std::vector<double> signed_vals(static_cast<std::size_t>(reps));
    for (Eigen::Index l = 0; l < r; ++l) {
        for (Eigen::Index j = 0; j < reps; ++j) {
            signed_vals[static_cast<std::size_t>(j)] = samples(l, j);
            mags[static_cast<std::size_t>(j)] = std::abs(samples(l, j));
        }
        const double mag = quantile(mags, q);
        const double med = quantile(signed_vals, 0.5);
        out[l] = med < 0.0 ? -mag : mag;
    }
    return out;
}

Vector estimate_error_loo(const GraphSequence& seq, int d, int reps, double q, Rng& rng,
                          ErrorAggregation aggregation, NegativeEigenvalues policy,
                          std::vector<std::string>* warnings) {
    if (seq.empty()) {
        throw UsageError("leave-one-out estimation needs training snapshots");
    }
    if (reps < 1) {
        throw DomainError("leave-one-out repetitions must be >= 1");
    }
    if (!(q > 0.0 && q <= 1.0)) {
        throw DomainError("leave-one-out quantile must be in (0, 1]");
    }
    const ResidualLayout layout(seq.n_nodes(), seq.directed());
    const std::size_t m = seq.size();
    if (m < 2) {
        if (warnings != nullptr) {
            warnings->push_back("only one training snapshot: error estimate set to zero");
        }
        return Vector::Zero(static_cast<Eigen::Index>(layout.size()));
    }
    if (static_cast<std::size_t>(reps) > m) {
        if (warnings != nullptr) {
            warnings->push_back("leave-one-out repetitions clamped from " + std::to_string(reps) + " to " +
                                std::to_string(m));
        }
        reps = static_cast<int>(m);
    }

    // Partial Fisher-Yates: the first `reps` entries are distinct indices.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(reps); ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
        std::swap(order[i], order[j]);
    }

    const bool directed = seq.directed();
    const Matrix total = mean_adjacency(seq) * static_cast<double>(m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m - 1));
    Matrix samples(static_cast<Eigen::Index>(layout.size()), reps);
    for (int rep = 0; rep < reps; ++rep) {
        const auto& left_out = seq[order[static_cast<std::size_t>(rep)]].weights();
        const Matrix rest = (total - left_out) / static_cast<double>(m - 1);
        const Matrix single = embed_mean(left_out, d, directed, policy).reconstruct();
        const Matrix pooled = embed_mean(rest, d, directed, policy).reconstruct();
        samples.col(rep) = vec_residual((single - pooled) * scale, layout);
    }
    return aggregate_error(samples, q, aggregation);
}

NullModel train(const GraphSequence& seq, const TrainOptions& options) {
    if (seq.empty()) {
        throw UsageError("training needs at least one snapshot");
    }
    if (options.d < 0 || options.d_extra < 0) {
        throw DomainError("embedding dimension options must be nonnegative");
    }
    NullModel model;
    model.directed = seq.directed();
    model.weighted = options.weighted;
    model.layout = ResidualLayout(seq.n_nodes(), seq.directed());
    model.m = seq.size();
    model.options = options;

    const Matrix mean = mean_adjacency(seq);
    const int d = resolve_dimension(mean, model.directed, options);
    model.embedding = embed_mean(mean, d, model.directed, options.negative_eigenvalues);
    if (model.weighted && !model.directed) {
        model.embedding.kind = EmbeddingKind::WeightedMoment;
    }
    model.p_hat = model.embedding.reconstruct();
    model.p_vec = vec_residual(model.p_hat, model.layout);

    if (model.weighted) {
        const Matrix second = mean_entrywise_power(seq.snapshots(), 2);
        const int d2 = resolve_dimension(second, model.directed, options);
        Embedding emb2 = embed_mean(second, d2, model.directed, options.negative_eigenvalues);
        if (!model.directed) {
            emb2.kind = EmbeddingKind::WeightedMoment;
            emb2.order = 2;
        }
        const Vector m2 = vec_residual(emb2.reconstruct(), model.layout);
        model.sigma = (m2.array() - model.p_vec.array().square()).cwiseMax(0.0).matrix();
        model.second_moment = std::move(emb2);
    } else {
        model.sigma = bernoulli_variance(model.p_vec);
    }

    Rng rng(options.seed);
    model.e_hat = estimate_error_loo(seq, d, options.loo_reps, options.loo_quantile, rng, options.aggregation,
                                     options.negative_eigenvalues, &model.warnings);
    return model;
}

NullModel oracle_model(const Matrix& p, bool directed, const std::optional<Matrix>& latent) {
    if (p.rows() != p.cols() || p.rows() == 0) {
        throw DimensionError("probability matrix must be square and non-empty");
    }
    NullModel model;
    model.directed = directed;
    model.layout = ResidualLayout(static_cast<std::size_t>(p.rows()), directed);
    model.p_hat = p;
    model.p_hat.diagonal().setZero();
    model.p_vec = vec_residual(model.p_hat, model.layout);
    model.sigma = bernoulli_variance(model.p_vec);
    model.e_hat = Vector::Zero(model.p_vec.size());
    model.m = 0;
    if (latent) {
        if (latent->rows() != p.rows()) {
            throw DimensionError("latent positions do not match the probability matrix");
        }
        model.embedding.kind = directed ? EmbeddingKind::Directed : EmbeddingKind::Undirected;
        model.embedding.left = *latent;
        if (directed) {
            model.embedding.right = *latent;
        }
    }
    return model;
}

NullMoments NullMoments::from(const Vector& e, const Vector& sigma) {
    check_lengths(e, sigma, "null moments");
    NullMoments out;
    out.e_sq = e.squaredNorm();
    out.sigma_l1 = sigma.cwiseAbs().sum();
    out.sigma_sq = sigma.squaredNorm();
    out.sigma_e_sq = sigma.dot(e.cwiseAbs2());
    out.r = static_cast<std::size_t>(e.size());
    return out;
}

double NullMoments::mean(WindowWeights w) const {
    return w.linear * w.linear * e_sq + w.quadratic * sigma_l1;
}

double NullMoments::variance(WindowWeights w) const {
    return 4.0 * w.linear * w.linear * w.quadratic * sigma_e_sq + 2.0 * w.quadratic * w.quadratic * sigma_sq;
}

double gamma_mean(double k, const Vector& e, const Vector& sigma) {
    return NullMoments::from(e, sigma).mean(WindowWeights::cusum(k));
}

double gamma_var(double k, const Vector& e, const Vector& sigma) {
    return NullMoments::from(e, sigma).variance(WindowWeights::cusum(k));
}

double omega(double k_eff, std::size_t r) {
    if (k_eff <= 0.0 || r == 0) {
        throw DomainError("weighting needs k >= 1 and r >= 1");
    }
    return 1.0 / (static_cast<double>(r) * std::pow(k_eff, 1.5));
}

double threshold_sigma(double k_eff, const Vector& e, const Vector& sigma, std::size_t r, double n_sigma) {
    const auto moments = NullMoments::from(e, sigma);
    const auto w = WindowWeights::cusum(k_eff);
    const double om = omega(k_eff, r);
    return om * moments.mean(w) + n_sigma * std::sqrt(om * om * moments.variance(w));
}

double threshold_three_sigma(double k_eff, const Vector& e, const Vector& sigma, std::size_t r) {
    return threshold_sigma(k_eff, e, sigma, r, 3.0);
}

NullQuantileSampler::NullQuantileSampler(const Vector& e, const Vector& sigma, std::size_t samples, Rng& rng)
    : e_sq_(e.squaredNorm()), r_(static_cast<std::size_t>(e.size())) {
    check_lengths(e, sigma, "quantile sampler");
    if (samples == 0) {
        throw DomainError("Monte-Carlo sample count must be positive");
    }
    const Vector root = sigma.cwiseMax(0.0).cwiseSqrt();
    const Vector sig = sigma.cwiseMax(0.0);
    const Vector coupling = e.cwiseProduct(root);
    quad_.resize(samples);
    cross_.resize(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        double quad = 0.0;
        double cross = 0.0;
        for (Eigen::Index l = 0; l < e.size(); ++l) {
            const double y = rng.normal();
            quad += sig[l] * y * y;
            cross += coupling[l] * y;
        }
        quad_[s] = quad;
        cross_[s] = cross;
    }
}

std::vector<double> NullQuantileSampler::gamma_draws(WindowWeights w) const {
    const double s1 = w.linear;
    const double s2 = w.quadratic;
    const double mix = 2.0 * s1 * std::sqrt(s2);
    const double shift = s1 * s1 * e_sq_;
    std::vector<double> out(quad_.size());
    for (std::size_t s = 0; s < quad_.size(); ++s) {
        out[s] = s2 * quad_[s] + mix * cross_[s] + shift;
    }
    return out;
}

double NullQuantileSampler::gamma_quantile(WindowWeights w, double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must be in (0, 1)");
    }
    auto draws = gamma_draws(w);
    return quantile(draws, 1.0 - alpha);
}

double threshold_quantile(double k_eff, const Vector& e, const Vector& sigma, double alpha, std::size_t mc_samples,
                          Rng& rng) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must be in (0, 1)");
    }
    const NullQuantileSampler sampler(e, sigma, mc_samples, rng);
    return omega(k_eff, sampler.r()) * sampler.gamma_quantile(WindowWeights::cusum(k_eff), alpha);
}

ChangeSpec make_change_spec(const NullModel& model, const Matrix& p_after, const std::optional<Matrix>& p_before) {
    const auto n = static_cast<Eigen::Index>(model.n_nodes());
    if (p_after.rows() != n || p_after.cols() != n) {
        throw DimensionError("post-change probability matrix does not match the model");
    }
    const Vector after = vec_residual(p_after, model.layout);
    Vector before = model.p_vec;
    if (p_before) {
        before = vec_residual(*p_before, model.layout);
    }
    ChangeSpec spec;
    spec.delta = before - after;
    spec.sigma_after = bernoulli_variance(after);
    return spec;
}

DetectabilityReport detectability(const Vector& e, const Vector& delta) {
    check_lengths(e, delta, "detectability");
    DetectabilityReport out;
    const double ed = e.dot(delta);
    out.e_norm = e.norm();
    out.delta_norm = delta.norm();
    out.margin = 2.0 * ed + delta.squaredNorm();
    out.detectable = out.margin > 0.0;
    out.cos_theta = (out.e_norm > 0.0 && out.delta_norm > 0.0) ? ed / (out.e_norm * out.delta_norm) : 0.0;
    out.angle_form = 2.0 * out.e_norm * out.cos_theta + out.delta_norm;
    return out;
}

double mean_after_change(double k, double k_c, const Vector& e, const Vector& delta, const Vector& sigma_x,
                         const Vector& sigma_y) {
    if (k < k_c || k_c < 0.0) {
        throw UsageError("mean after change needs k >= k_c >= 0");
    }
    check_lengths(e, delta, "mean after change");
    check_lengths(sigma_x, sigma_y, "mean after change");
    const double tau = k - k_c;
    return (k * e + tau * delta).squaredNorm() + k_c * sigma_x.cwiseAbs().sum() + tau * sigma_y.cwiseAbs().sum();
}

std::optional<std::int64_t> predict_delay(std::int64_t k_c, const Vector& e, const Vector& sigma_x,
                                          const Vector& sigma_y, const Vector& delta, std::size_t r,
                                          std::int64_t horizon, double n_sigma) {
    if (k_c < 0) {
        throw UsageError("change point must be nonnegative");
    }
    check_lengths(e, delta, "delay prediction");
    check_lengths(sigma_x, sigma_y, "delay prediction");
    check_lengths(e, sigma_x, "delay prediction");
    const auto null = NullMoments::from(e, sigma_x);
    const double e_sq = e.squaredNorm();
    const double e_delta = e.dot(delta);
    const double delta_sq = delta.squaredNorm();
    const double sx = sigma_x.cwiseAbs().sum();
    const double sy = sigma_y.cwiseAbs().sum();
    for (std::int64_t k = std::max<std::int64_t>(k_c, 1); k <= horizon; ++k) {
        const double kd = static_cast<double>(k);
        const double tau = kd - static_cast<double>(k_c);
        const double after = kd * kd * e_sq + 2.0 * kd * tau * e_delta + tau * tau * delta_sq +
                             static_cast<double>(k_c) * sx + tau * sy;
        const auto w = WindowWeights::cusum(kd);
        // Both sides share ω, so compare unweighted.
        const double threshold = null.mean(w) + n_sigma * std::sqrt(null.variance(w));
        if (after >= threshold) {
            return k;
        }
    }
    (void)r;
    return std::nullopt;
}

double er_detectability_bound(double p, double delta, std::size_t n, std::size_t m) {
    if (!(p > 0.0 && p < 1.0) || delta == 0.0 || n < 2 || m < 1) {
        throw DomainError("bound needs p in (0,1), delta != 0, N >= 2 and m >= 1");
    }
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    const double lead = 8.0 * (1.0 - p) / (delta * delta * nn * nn * (nn - 1.0) * mm);
    const double bracket = (1.0 - p) / (nn * mm) + 2.0 * (nn - 1.0) * p;
    return std::max(0.0, 1.0 - lead * bracket);
}

} // namespace rdpg
