// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdpg/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "rdpg/error.hpp"

namespace rdpg {
namespace {

Matrix two_block(double within, double cross) {
    Matrix q(2, 2);
    q << within, cross, cross, within;
    return q;
}

std::vector<std::size_t> halves(std::size_t n) {
    return {n / 2, n - n / 2};
}

} // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"er-to-sbm", "er-shift", "frobenius-blind", "weighted-sbm",
                                                   "delay-sweep"};
    return names;
}

ScenarioConfig scenario_defaults(const std::string& name) {
    ScenarioConfig c;
    if (name == "er-to-sbm") {
        return c;
    }
    if (name == "er-shift" || name == "delay-sweep") {
        c.m = 100;
        c.k_c = name == "er-shift" ? 100 : 200;
        c.horizon = name == "er-shift" ? 400 : 600;
        return c;
    }
    if (name == "frobenius-blind") {
        c.p = 0.3;
        c.q1 = 0.275;
        c.q2 = 0.325;
        c.k_c = 200;
        c.horizon = 800;
        return c;
    }
    if (name == "weighted-sbm") {
        return c;
    }
    throw UsageError("unknown scenario '" + name + "'");
}

Scenario::Scenario(std::string name, const ScenarioConfig& config) : name_(std::move(name)), config_(config) {
    scenario_defaults(name_);
    if (config_.n < 2) {
        throw DomainError("scenario needs at least two nodes");
    }
    if (config_.k_c < 0 || config_.horizon < 1) {
        throw DomainError("scenario needs k_c >= 0 and horizon >= 1");
    }
    blocks_ = halves(config_.n);
    if (name_ == "er-to-sbm" || name_ == "frobenius-blind") {
        q_before_ = two_block(config_.p, config_.p);
        q_after_ = two_block(config_.q1, config_.q2);
    } else if (name_ == "er-shift" || name_ == "delay-sweep") {
        q_before_ = two_block(config_.p, config_.p);
        q_after_ = two_block(config_.p_after, config_.p_after);
    } else {
        weighted_ = true;
        const auto g = WeightSpec::gaussian(5.0, 0.1);
        w_before_ = {{g, g}, {g, WeightSpec::poisson(config_.lambda)}};
        w_after_ = {{g, g}, {g, WeightSpec::poisson(config_.lambda_after)}};
        for (const auto& row : w_before_) {
            for (const auto& w : row) {
                w.validate();
            }
        }
        for (const auto& row : w_after_) {
            for (const auto& w : row) {
                w.validate();
            }
        }
    }
    if (weighted_) {
        p_before_ = weighted_sbm_moment(blocks_, config_.p, w_before_, 1);
        p_after_ = weighted_sbm_moment(blocks_, config_.p, w_after_, 1);
    } else {
        p_before_ = sbm_probabilities(blocks_, q_before_);
        p_after_ = sbm_probabilities(blocks_, q_after_);
    }
}

GraphSnapshot Scenario::sample(bool after, std::int64_t t) const {
    Rng rng = Rng::stream(config_.seed, static_cast<std::uint64_t>(t));
    if (weighted_) {
        return sample_weighted_sbm(blocks_, config_.p, after ? w_after_ : w_before_, rng, t);
    }
    return sample_bernoulli(after ? p_after_ : p_before_, false, rng, t);
}

GraphSnapshot Scenario::training(std::size_t i) const {
    if (i >= config_.m) {
        throw UsageError("training index out of range");
    }
    return sample(false, static_cast<std::int64_t>(i));
}

GraphSnapshot Scenario::monitoring(std::int64_t k) const {
    if (k < 1) {
        throw UsageError("monitoring steps start at k = 1");
    }
    return sample(k > config_.k_c, static_cast<std::int64_t>(config_.m) + k - 1);
}

GraphSequence Scenario::training_sequence() const {
    GraphSequence seq;
    for (std::size_t i = 0; i < config_.m; ++i) {
        seq.push_back(training(i));
    }
    return seq;
}

GraphSequence Scenario::monitoring_sequence() const {
    GraphSequence seq;
    for (std::int64_t k = 1; k <= config_.horizon; ++k) {
        seq.push_back(monitoring(k));
    }
    return seq;
}

GraphSequence rssi_synthetic_stream(std::uint64_t seed, std::size_t length, std::size_t change_at) {
    constexpr std::size_t n = 6;
    constexpr double kOffset = 91.0;
    // Sensors on a 3 x 2 grid, 4 m spacing; sensor 0 moves to the far corner.
    const double xs[n] = {0, 4, 8, 0, 4, 8};
    const double ys[n] = {0, 0, 0, 4, 4, 4};
    auto path_loss = [](double dist) { return -40.0 - 20.0 * std::log10(std::max(dist, 1.0)); };

    GraphSequence seq;
    for (std::size_t t = 0; t < length; ++t) {
        Rng rng = Rng::stream(seed, t);
        const bool moved = t >= change_at;
        Matrix a = Matrix::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) {
                    continue;
                }
                const double xi = (i == 0 && moved) ? 12.0 : xs[i];
                const double yi = (i == 0 && moved) ? 8.0 : ys[i];
                const double xj = (j == 0 && moved) ? 12.0 : xs[j];
                const double yj = (j == 0 && moved) ? 8.0 : ys[j];
                const double dist = std::hypot(xi - xj, yi - yj);
                const double dbm = path_loss(dist) + rng.normal(0.0, 3.0);
                // Packets below the receiver sensitivity are lost.
                const bool lost = rng.uniform() < 0.05 || dbm < -kOffset;
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = lost ? 0.0 : dbm + kOffset;
            }
        }
        seq.push_back(GraphSnapshot(std::move(a), true, static_cast<std::int64_t>(t)));
    }
    return seq;
}

} // namespace rdpg
