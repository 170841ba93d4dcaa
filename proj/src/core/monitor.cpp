// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdpg/monitor.hpp"

#include <cmath>
#include <limits>

#include "rdpg/error.hpp"

namespace rdpg {
namespace {

void check_snapshot(const GraphSnapshot& a, const NullModel& model) {
    if (a.n_nodes() != model.n_nodes()) {
        throw DimensionError("snapshot has " + std::to_string(a.n_nodes()) + " nodes, model expects " +
                             std::to_string(model.n_nodes()));
    }
    if (a.directed() != model.directed) {
        throw DimensionError(model.directed ? "model is directed but the snapshot is not"
                                            : "model is undirected but the snapshot is directed");
    }
}

// 1 + ratio + ... + ratio^{k-1}.
double geometric_sum(double ratio, std::int64_t k) {
    if (ratio == 1.0) {
        return static_cast<double>(k);
    }
    return (1.0 - std::pow(ratio, static_cast<double>(k))) / (1.0 - ratio);
}

} // namespace

StatisticKind StatisticKind::mosum(std::size_t L) {
    StatisticKind s{Type::Mosum, L, 0.0, 1.0};
    s.validate();
    return s;
}

StatisticKind StatisticKind::mmosum(double h) {
    StatisticKind s{Type::MMosum, 0, h, 1.0};
    s.validate();
    return s;
}

StatisticKind StatisticKind::ewsum(double beta) {
    StatisticKind s{Type::Ewsum, 0, 0.0, beta};
    s.validate();
    return s;
}

void StatisticKind::validate() const {
    switch (type) {
    case Type::Cusum:
        break;
    case Type::Mosum:
        if (window < 1) {
            throw DomainError("MOSUM window length must be >= 1");
        }
        break;
    case Type::MMosum:
        if (!(h > 0.0 && h < 1.0)) {
            throw DomainError("mMOSUM fraction h must be in (0, 1)");
        }
        break;
    case Type::Ewsum:
        if (!(beta > 0.0 && beta <= 1.0)) {
            throw DomainError("EWSUM forgetting factor must be in (0, 1]");
        }
        break;
    }
}

std::string StatisticKind::name() const {
    switch (type) {
    case Type::Cusum:
        return "cusum";
    case Type::Mosum:
        return "mosum(L=" + std::to_string(window) + ")";
    case Type::MMosum:
        return "mmosum(h=" + std::to_string(h) + ")";
    case Type::Ewsum:
        return "ewsum(beta=" + std::to_string(beta) + ")";
    }
    return "unknown";
}

std::size_t StatisticKind::effective_window(std::int64_t k) const {
    if (k < 1) {
        throw DomainError("step index must be >= 1");
    }
    const auto uk = static_cast<std::size_t>(k);
    switch (type) {
    case Type::Mosum:
        return std::min(uk, window);
    case Type::MMosum:
        return uk - static_cast<std::size_t>(std::floor(static_cast<double>(k) * h));
    case Type::Cusum:
    case Type::Ewsum:
        break;
    }
    return uk;
}

WindowWeights StatisticKind::weights(std::int64_t k) const {
    if (type == Type::Ewsum) {
        if (k < 1) {
            throw DomainError("step index must be >= 1");
        }
        return {geometric_sum(beta, k), geometric_sum(beta * beta, k)};
    }
    const auto n = static_cast<double>(effective_window(k));
    return {n, n};
}

void ThresholdRule::validate() const {
    if (kind == Kind::Quantile) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw DomainError("alpha must be in (0, 1)");
        }
        if (mc_samples < 1) {
            throw DomainError("Monte-Carlo sample count must be positive");
        }
    }
}

Vector monitoring_residual(const GraphSnapshot& a, const NullModel& model) {
    check_snapshot(a, model);
    return model.p_vec - vec_residual(a.weights(), model.layout);
}

Matrix monitoring_projection(const GraphSnapshot& a, const NullModel& model) {
    check_snapshot(a, model);
    if (model.directed) {
        throw UsageError("the projection monitoring function is defined for undirected models only");
    }
    Matrix diff = model.p_hat - a.weights();
    diff.diagonal().setZero();
    return diff * model.embedding.left;
}

double weight_omega(std::int64_t k, const StatisticKind& kind, std::size_t r) {
    return omega(static_cast<double>(kind.effective_window(k)), r);
}

Detector::Detector(const NullModel& model, StatisticKind kind, ThresholdRule rule, MonitoringFunction fn)
    : model_(&model), kind_(kind), rule_(rule), fn_(fn) {
    kind_.validate();
    rule_.validate();
    std::size_t dim = model.r();
    if (fn_ == MonitoringFunction::Projection) {
        if (model.directed) {
            throw UsageError("the projection monitoring function is defined for undirected models only");
        }
        if (model.embedding.dim() < 1) {
            throw UsageError("model has no embedding to project on");
        }
        dim = model.n_nodes() * static_cast<std::size_t>(model.d());
    } else {
        moments_ = NullMoments::from(model.e_hat, model.sigma);
        if (rule_.kind == ThresholdRule::Kind::Quantile) {
            Rng rng(rule_.seed);
            sampler_ = std::make_shared<const NullQuantileSampler>(model.e_hat, model.sigma, rule_.mc_samples, rng);
        }
    }
    if (dim == 0) {
        throw DimensionError("monitoring vector would be empty (N = 1)");
    }
    s_ = Vector::Zero(static_cast<Eigen::Index>(dim));
    scratch_.resize(s_.size());
}

std::size_t Detector::state_bytes() const noexcept {
    std::size_t bytes = static_cast<std::size_t>(s_.size()) * sizeof(double);
    for (const auto& entry : buffer_) {
        bytes += sizeof(entry.first) + static_cast<std::size_t>(entry.second.size()) * sizeof(double);
    }
    return bytes;
}

double Detector::threshold(std::int64_t k) const {
    if (fn_ == MonitoringFunction::Projection) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const WindowWeights w = kind_.weights(k);
    const double om = weight_omega(k, kind_, model_->r());
    switch (rule_.kind) {
    case ThresholdRule::Kind::ThreeSigma:
    case ThresholdRule::Kind::TwoSigma: {
        const double n_sigma = rule_.kind == ThresholdRule::Kind::ThreeSigma ? 3.0 : 2.0;
        return om * moments_->mean(w) + n_sigma * om * std::sqrt(moments_->variance(w));
    }
    case ThresholdRule::Kind::Quantile:
        return om * sampler_->gamma_quantile(w, rule_.alpha);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void Detector::residual_into(const GraphSnapshot& a, Vector& h) const {
    const Matrix& w = a.weights();
    const auto n = static_cast<Eigen::Index>(a.n_nodes());
    const Vector& p = model_->p_vec;
    Eigen::Index pos = 0;
    if (!a.directed()) {
        // Symmetric storage: row i right of the diagonal is column i below it.
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            const Eigen::Index len = n - i - 1;
            h.segment(pos, len) = p.segment(pos, len) - w.col(i).tail(len);
            pos += len;
        }
        return;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) {
                h[pos] = p[pos] - w(i, j);
                ++pos;
            }
        }
    }
}

Decision Detector::step(const GraphSnapshot& a) {
    check_snapshot(a, *model_);
    if (fn_ == MonitoringFunction::Projection) {
        const Matrix g = monitoring_projection(a, *model_);
        scratch_ = Eigen::Map<const Vector>(g.data(), g.size());
        return step_vector(scratch_);
    }
    const bool recursive = kind_.type == StatisticKind::Type::Cusum || kind_.type == StatisticKind::Type::Ewsum;
    if (recursive && !a.directed()) {
        // Fold the residual straight into the running sum; no window to keep.
        const Matrix& w = a.weights();
        const auto n = static_cast<Eigen::Index>(a.n_nodes());
        const Vector& p = model_->p_vec;
        const double beta = kind_.type == StatisticKind::Type::Ewsum ? kind_.beta : 1.0;
        Eigen::Index pos = 0;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            const Eigen::Index len = n - i - 1;
            if (beta == 1.0) {
                s_.segment(pos, len) += p.segment(pos, len) - w.col(i).tail(len);
            } else {
                s_.segment(pos, len) = beta * s_.segment(pos, len) + p.segment(pos, len) - w.col(i).tail(len);
            }
            pos += len;
        }
        ++k_;
        return decide();
    }
    residual_into(a, scratch_);
    return step_vector(scratch_);
}

Decision Detector::step_vector(const Vector& h) {
    if (h.size() != s_.size()) {
        throw DimensionError("monitoring vector has length " + std::to_string(h.size()) + ", expected " +
                             std::to_string(s_.size()));
    }
    ++k_;
    switch (kind_.type) {
    case StatisticKind::Type::Cusum:
        s_ += h;
        break;
    case StatisticKind::Type::Ewsum:
        s_ = kind_.beta * s_ + h;
        break;
    case StatisticKind::Type::Mosum:
        s_ += h;
        buffer_.emplace_back(k_, h);
        if (buffer_.size() > kind_.window) {
            s_ -= buffer_.front().second;
            buffer_.pop_front();
        }
        break;
    case StatisticKind::Type::MMosum: {
        s_ += h;
        buffer_.emplace_back(k_, h);
        const auto left = static_cast<std::int64_t>(std::floor(static_cast<double>(k_) * kind_.h));
        while (!buffer_.empty() && buffer_.front().first <= left) {
            s_ -= buffer_.front().second;
            buffer_.pop_front();
        }
        break;
    }
    }

    return decide();
}

Decision Detector::decide() {
    Decision d;
    d.k = k_;
    d.gamma = s_.squaredNorm();
    d.gamma_weighted = weight_omega(k_, kind_, static_cast<std::size_t>(s_.size())) * d.gamma;
    d.threshold = threshold(k_);
    d.alarm = !std::isnan(d.threshold) && d.gamma_weighted > d.threshold;
    if (d.alarm && !first_alarm_) {
        first_alarm_ = k_;
    }
    return d;
}

MonitorResult run_monitor(const NullModel& model, std::span<const GraphSnapshot> stream, StatisticKind kind,
                          ThresholdRule rule, MonitoringFunction fn, bool continue_after_alarm) {
    Detector detector(model, kind, rule, fn);
    MonitorResult out;
    out.trace.reserve(stream.size());
    for (const auto& a : stream) {
        out.trace.push_back(detector.step(a));
        if (out.trace.back().alarm && !continue_after_alarm) {
            break;
        }
    }
    out.first_alarm = detector.first_alarm();
    return out;
}

} // namespace rdpg
