// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdpg/generators.hpp"
#include "rdpg/graph.hpp"
#include "rdpg/spectral.hpp"

namespace rdpg {

/// How the leave-one-out error matrices E_j are reduced to a single ê.
enum class ErrorAggregation {
    /// Entry-wise q-quantile of |E_j| carrying the sign of the entry-wise median.
    Entrywise,
    /// The E_j whose Frobenius norm sits at the q-quantile of all norms.
    Norm
};

struct TrainOptions {
    int d = 0; ///< 0 selects the dimension from the scree profile
    int d_extra = 0;
    int loo_reps = 20;
    double loo_quantile = 0.99;
    bool weighted = false;
    NegativeEigenvalues negative_eigenvalues = NegativeEigenvalues::Error;
    ErrorAggregation aggregation = ErrorAggregation::Norm;
    std::uint64_t seed = 0;
};

/// Trained reference model. Immutable after training; safe to share between
/// detectors.
struct NullModel {
    bool directed = false;
    bool weighted = false;
    ResidualLayout layout;
    /// First-moment embedding; its reconstruction is `p_hat`.
    Embedding embedding;
    /// Second-moment embedding (weighted models only).
    std::optional<Embedding> second_moment;
    Matrix p_hat;
    /// vec of p_hat under `layout`.
    Vector p_vec;
    /// Per-pair variance under the null.
    Vector sigma;
    /// Estimated reconstruction error.
    Vector e_hat;
    std::size_t m = 0;
    TrainOptions options;
    std::vector<std::string> warnings;

    std::size_t n_nodes() const noexcept { return layout.n_nodes(); }
    std::size_t r() const noexcept { return layout.size(); }
    int d() const noexcept { return embedding.dim(); }
};

/// Bernoulli variance p(1-p) with p clipped to [1e-9, 1 - 1e-9].
Vector bernoulli_variance(const Vector& p);

/// Offline training: embedding of the mean adjacency, null variances and the
/// leave-one-out error estimate.
NullModel train(const GraphSequence& seq, const TrainOptions& options = {});

/// Model with an exactly known probability matrix and no estimation error.
/// `latent` (N x d) is kept as the embedding when given.
NullModel oracle_model(const Matrix& p, bool directed, const std::optional<Matrix>& latent = std::nullopt);

/// Leave-one-out estimate of the reconstruction error vector. Draws `reps`
/// distinct training indices j and forms
/// E_j = (P̂(A[j]) − P̂(mean of the rest)) / sqrt(m − 1).
Vector estimate_error_loo(const GraphSequence& seq, int d, int reps, double q, Rng& rng,
                          ErrorAggregation aggregation = ErrorAggregation::Norm,
                          NegativeEigenvalues policy = NegativeEigenvalues::Error,
                          std::vector<std::string>* warnings = nullptr);

/// Reduction of the leave-one-out samples (columns of `samples`) to ê.
Vector aggregate_error(const Matrix& samples, double q, ErrorAggregation aggregation);

/// Linear-interpolation quantile of `values` (which gets reordered).
double quantile(std::vector<double>& values, double q);

/// Sum of the weights w_t and of w_t² attached to the h-vectors inside a
/// partial sum. Plain CUSUM after k steps has both equal to k.
struct WindowWeights {
    double linear = 0.0;
    double quadratic = 0.0;

    static WindowWeights cusum(double k) { return {k, k}; }
};

/// Scalars of ê and σ̂ that the null moments depend on.
struct NullMoments {
    double e_sq = 0.0;         ///< ‖e‖²
    double sigma_l1 = 0.0;     ///< ‖σ‖₁
    double sigma_sq = 0.0;     ///< ‖σ‖²
    double sigma_e_sq = 0.0;   ///< σᵀe²
    std::size_t r = 0;

    static NullMoments from(const Vector& e, const Vector& sigma);

    double mean(WindowWeights w) const;
    double variance(WindowWeights w) const;
};

/// E[Γ] ≈ k²‖e‖² + k‖σ‖₁.
double gamma_mean(double k, const Vector& e, const Vector& sigma);
/// var[Γ] ≈ 4k³σᵀe² + 2k²‖σ‖².
double gamma_var(double k, const Vector& e, const Vector& sigma);

/// ω = 1 / (r k^{3/2}).
double omega(double k_eff, std::size_t r);

/// ω·mean + n_sigma·ω·sd, evaluated at window length k_eff.
double threshold_sigma(double k_eff, const Vector& e, const Vector& sigma, std::size_t r, double n_sigma = 3.0);
double threshold_three_sigma(double k_eff, const Vector& e, const Vector& sigma, std::size_t r);

/// Monte-Carlo sampler of the approximate null law of Γ,
///   Γ̄ = Σ_l (S1 e_l + sqrt(S2 σ_l) y_l)²,  y ~ N(0, I),
/// which for CUSUM (S1 = S2 = k) is k Σ σ_l (y_l + b_l)² with b = sqrt(k) e / sqrt(σ).
/// Each draw is stored as the two scalars Σσ y² and Σ e sqrt(σ) y, so one set
/// of draws serves every k.
class NullQuantileSampler {
public:
    NullQuantileSampler(const Vector& e, const Vector& sigma, std::size_t samples, Rng& rng);

    /// (1 − alpha)-quantile of Γ̄ (unweighted).
    double gamma_quantile(WindowWeights w, double alpha) const;
    /// Fresh draws of Γ̄ for the given window.
    std::vector<double> gamma_draws(WindowWeights w) const;

    std::size_t samples() const noexcept { return quad_.size(); }
    std::size_t r() const noexcept { return r_; }

private:
    std::vector<double> quad_;
    std::vector<double> cross_;
    double e_sq_ = 0.0;
    std::size_t r_ = 0;
};

/// ω·(1 − alpha)-quantile of Γ̄ at window length k_eff (CUSUM weights).
double threshold_quantile(double k_eff, const Vector& e, const Vector& sigma, double alpha, std::size_t mc_samples,
                          Rng& rng);

/// Hypothesized change: δ = vec(P_before − P_after) and the post-change
/// per-pair variance.
struct ChangeSpec {
    Vector delta;
    Vector sigma_after;
};

/// Binary change spec. `p_before` defaults to the model's P̂.
ChangeSpec make_change_spec(const NullModel& model, const Matrix& p_after,
                            const std::optional<Matrix>& p_before = std::nullopt);

struct DetectabilityReport {
    double margin = 0.0; ///< ‖e + δ‖² − ‖e‖²
    bool detectable = false;
    double e_norm = 0.0;
    double delta_norm = 0.0;
    double cos_theta = 0.0;
    double angle_form = 0.0; ///< 2‖e‖cosθ + ‖δ‖
};

DetectabilityReport detectability(const Vector& e, const Vector& delta);

/// E[Γ] after a change at k_c: ‖k e + (k − k_c) δ‖² + k_c‖σ_X‖₁ + (k − k_c)‖σ_Y‖₁.
double mean_after_change(double k, double k_c, const Vector& e, const Vector& delta, const Vector& sigma_x,
                         const Vector& sigma_y);

/// First k in [k_c, horizon] (k >= 1) where the weighted post-change mean
/// reaches the n-sigma threshold. Forward scan.
std::optional<std::int64_t> predict_delay(std::int64_t k_c, const Vector& e, const Vector& sigma_x,
                                          const Vector& sigma_y, const Vector& delta, std::size_t r,
                                          std::int64_t horizon, double n_sigma = 3.0);

/// Chebyshev lower bound on the probability that an ER change p → p − Δ
/// satisfies the detectability condition; clipped at zero.
double er_detectability_bound(double p, double delta, std::size_t n, std::size_t m);

/// Binary model file ("RDPGNULL1" header, length-prefixed little-endian fields).
void save_model(const NullModel& model, std::ostream& out);
NullModel load_model(std::istream& in);
void save_model(const NullModel& model, const std::string& path);
NullModel load_model(const std::string& path);

} // namespace rdpg
