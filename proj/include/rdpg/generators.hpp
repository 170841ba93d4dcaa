// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rdpg/graph.hpp"

namespace rdpg {

/// Seeded random stream. Independent streams are derived from a master seed by
/// counter-based splitting, so the snapshot at index t is the same whatever
/// order (or thread) it is generated in.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Stream `index` of `master`.
    static Rng stream(std::uint64_t master, std::uint64_t index);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    std::int64_t poisson(double lambda);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Edge-weight law of a weighted SBM block pair.
struct WeightSpec {
    enum class Kind { Constant, Bernoulli, Gaussian, Poisson };

    Kind kind = Kind::Constant;
    double a = 1.0; ///< constant value, Bernoulli probability, Gaussian mean or Poisson rate
    double b = 0.0; ///< Gaussian standard deviation

    static WeightSpec constant(double c) { return {Kind::Constant, c, 0.0}; }
    static WeightSpec bernoulli(double q) { return {Kind::Bernoulli, q, 0.0}; }
    static WeightSpec gaussian(double mu, double sigma) { return {Kind::Gaussian, mu, sigma}; }
    static WeightSpec poisson(double lambda) { return {Kind::Poisson, lambda, 0.0}; }

    /// Throws DomainError on invalid parameters.
    void validate() const;
    /// One draw. Gaussian draws are truncated at zero by rejection.
    double draw(Rng& rng) const;
    /// Raw moment E[W^l] of the untruncated law.
    double moment(int l) const;
};

/// Probability matrix of an SBM with the given block sizes (zero diagonal).
Matrix sbm_probabilities(std::span<const std::size_t> block_sizes, const Matrix& q);

/// Independent Bernoulli(P_ij) edges. Undirected samplers read the upper
/// triangle; every off-diagonal probability must lie in [0, 1].
GraphSnapshot sample_bernoulli(const Matrix& p, bool directed, Rng& rng, std::int64_t t = 0);

GraphSnapshot sample_rdpg(const Matrix& x, Rng& rng, std::int64_t t = 0);
GraphSnapshot sample_drdpg(const Matrix& x_left, const Matrix& x_right, Rng& rng, std::int64_t t = 0);
GraphSnapshot sample_er(std::size_t n, double p, Rng& rng, std::int64_t t = 0);
GraphSnapshot sample_sbm(std::span<const std::size_t> block_sizes, const Matrix& q, Rng& rng, std::int64_t t = 0);

/// Edge present with probability `p`; present edges draw their weight from
/// `weights(block_i, block_j)`.
GraphSnapshot sample_weighted_sbm(std::span<const std::size_t> block_sizes, double p,
                                  const std::vector<std::vector<WeightSpec>>& weights, Rng& rng,
                                  std::int64_t t = 0);

/// Expected entry-wise l-th power of a weighted SBM sample (zero diagonal).
Matrix weighted_sbm_moment(std::span<const std::size_t> block_sizes, double p,
                           const std::vector<std::vector<WeightSpec>>& weights, int l);

} // namespace rdpg
