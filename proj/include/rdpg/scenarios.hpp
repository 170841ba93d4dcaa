// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdpg/generators.hpp"
#include "rdpg/graph.hpp"

namespace rdpg {

/// Parameters of the simulation presets. Fields a preset does not use are
/// ignored.
struct ScenarioConfig {
    std::size_t n = 100;
    std::size_t m = 50;
    std::int64_t k_c = 100;
    std::int64_t horizon = 400;
    double p = 0.5;        ///< pre-change edge probability
    double q1 = 0.6;       ///< post-change within-block probability
    double q2 = 0.4;       ///< post-change cross-block probability
    double p_after = 0.6;  ///< post-change probability of er-shift
    double lambda = 5.0;   ///< Poisson rate inside block 2 before the change (weighted-sbm)
    double lambda_after = 6.0;
    std::uint64_t seed = 0;
};

/// Preset names: er-to-sbm, er-shift, frobenius-blind, weighted-sbm, delay-sweep.
const std::vector<std::string>& scenario_names();
ScenarioConfig scenario_defaults(const std::string& name);

/// A seeded two-regime graph stream. Snapshots are sampled on demand; the
/// snapshot with time t draws from Rng::stream(seed, t), so any subset can be
/// regenerated independently. Training graphs have t = 0..m−1 and monitoring
/// step k (1-based) has t = m + k − 1. Steps k <= k_c are pre-change.
class Scenario {
public:
    Scenario(std::string name, const ScenarioConfig& config);

    const std::string& name() const noexcept { return name_; }
    const ScenarioConfig& config() const noexcept { return config_; }
    bool directed() const noexcept { return false; }
    bool weighted() const noexcept { return weighted_; }

    GraphSnapshot training(std::size_t i) const;
    GraphSnapshot monitoring(std::int64_t k) const;
    GraphSequence training_sequence() const;
    GraphSequence monitoring_sequence() const;

    /// Expected adjacency (first weight moment) before and after the change.
    const Matrix& p_before() const noexcept { return p_before_; }
    const Matrix& p_after() const noexcept { return p_after_; }

private:
    GraphSnapshot sample(bool after, std::int64_t t) const;

    std::string name_;
    ScenarioConfig config_;
    bool weighted_ = false;
    std::vector<std::size_t> blocks_;
    Matrix q_before_;
    Matrix q_after_;
    std::vector<std::vector<WeightSpec>> w_before_;
    std::vector<std::vector<WeightSpec>> w_after_;
    Matrix p_before_;
    Matrix p_after_;
};

/// Synthetic stand-in for a received-signal-strength stream: 6 directed
/// sensors, `length` snapshots. Readings are dBm in roughly [−91, −30] and are
/// stored as weight = dBm + 91, so a missing link has weight 0. Sensor 0 moves
/// at snapshot `change_at`, which changes its path loss to every other sensor.
GraphSequence rssi_synthetic_stream(std::uint64_t seed, std::size_t length = 655, std::size_t change_at = 400);

} // namespace rdpg
