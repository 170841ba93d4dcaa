// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdpg/graph.hpp"
#include "rdpg/nullmodel.hpp"

namespace rdpg {

/// Partial-sum statistic over the monitoring vectors h_1, h_2, ...
struct StatisticKind {
    enum class Type { Cusum, Mosum, MMosum, Ewsum };

    Type type = Type::Cusum;
    std::size_t window = 0; ///< MOSUM window length L
    double h = 0.0;         ///< mMOSUM fraction
    double beta = 1.0;      ///< EWSUM forgetting factor

    static StatisticKind cusum() { return {}; }
    static StatisticKind mosum(std::size_t L);
    static StatisticKind mmosum(double h);
    static StatisticKind ewsum(double beta);

    void validate() const;
    std::string name() const;

    /// Number of h-vectors inside the window after k steps.
    std::size_t effective_window(std::int64_t k) const;
    /// Σw and Σw² of the weights inside the window after k steps.
    WindowWeights weights(std::int64_t k) const;
};

enum class MonitoringFunction {
    Residual,  ///< vec(P̂ − A)
    Projection ///< (P̂ − A) X̂, flattened column-major
};

struct ThresholdRule {
    enum class Kind { ThreeSigma, TwoSigma, Quantile };

    Kind kind = Kind::ThreeSigma;
    double alpha = 0.01;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 0;

    static ThresholdRule three_sigma() { return {}; }
    static ThresholdRule two_sigma() { return {Kind::TwoSigma}; }
    static ThresholdRule quantile(double alpha, std::size_t mc_samples, std::uint64_t seed = 0) {
        return {Kind::Quantile, alpha, mc_samples, seed};
    }

    void validate() const;
};

struct Decision {
    std::int64_t k = 0;
    double gamma = 0.0;          ///< ‖s‖²
    double gamma_weighted = 0.0; ///< ω[k]·Γ
    double threshold = 0.0;      ///< NaN when the statistic has no calibrated threshold
    bool alarm = false;
};

/// vec(P̂ − A) under the model's layout.
Vector monitoring_residual(const GraphSnapshot& a, const NullModel& model);
/// (P̂ − A) X̂ for undirected models.
Matrix monitoring_projection(const GraphSnapshot& a, const NullModel& model);

/// ω[k] = 1 / (r · n^{3/2}) with n the statistic's effective window length
/// (k for CUSUM and EWSUM).
double weight_omega(std::int64_t k, const StatisticKind& kind, std::size_t r);

/// Online detector for one stream. Holds a reference to `model`, which must
/// outlive it. Not thread-safe; distinct detectors are independent.
class Detector {
public:
    Detector(const NullModel& model, StatisticKind kind, ThresholdRule rule = {},
             MonitoringFunction fn = MonitoringFunction::Residual);

    Decision step(const GraphSnapshot& a);
    /// Feeds an already computed monitoring vector.
    Decision step_vector(const Vector& h);

    /// Threshold that applies after k steps.
    double threshold(std::int64_t k) const;

    std::int64_t k() const noexcept { return k_; }
    std::optional<std::int64_t> first_alarm() const noexcept { return first_alarm_; }
    const Vector& partial_sum() const noexcept { return s_; }
    std::size_t buffer_size() const noexcept { return buffer_.size(); }
    /// Bytes held by the running sum and the window buffer.
    std::size_t state_bytes() const noexcept;
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(s_.size()); }
    const StatisticKind& kind() const noexcept { return kind_; }
    MonitoringFunction function() const noexcept { return fn_; }

private:
    void residual_into(const GraphSnapshot& a, Vector& h) const;
    Decision decide();

    const NullModel* model_;
    StatisticKind kind_;
    ThresholdRule rule_;
    MonitoringFunction fn_;
    std::optional<NullMoments> moments_;
    std::shared_ptr<const NullQuantileSampler> sampler_;
    Vector s_;
    Vector scratch_;
    std::deque<std::pair<std::int64_t, Vector>> buffer_;
    std::int64_t k_ = 0;
    std::optional<std::int64_t> first_alarm_;
};

struct MonitorResult {
    std::vector<Decision> trace;
    std::optional<std::int64_t> first_alarm;
};

/// Runs a detector over `stream`. Stops after the first alarm unless
/// `continue_after_alarm`.
MonitorResult run_monitor(const NullModel& model, std::span<const GraphSnapshot> stream, StatisticKind kind,
                          ThresholdRule rule = {}, MonitoringFunction fn = MonitoringFunction::Residual,
                          bool continue_after_alarm = true);

} // namespace rdpg
