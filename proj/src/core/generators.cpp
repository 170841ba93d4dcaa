// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdpg/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdpg/error.hpp"

namespace rdpg {
namespace {

constexpr double kProbabilitySlack = 1e-12;

double checked_probability(double p) {
    if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
        throw DomainError("edge probability " + std::to_string(p) + " outside [0, 1]");
    }
    return std::clamp(p, 0.0, 1.0);
}

std::vector<std::size_t> block_labels(std::span<const std::size_t> block_sizes) {
    std::vector<std::size_t> labels;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        labels.insert(labels.end(), block_sizes[b], b);
    }
    if (labels.empty()) {
        throw DimensionError("block sizes must sum to a positive node count");
    }
    return labels;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t master, std::uint64_t index) {
    return Rng(splitmix64(master) ^ splitmix64(~index));
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Marsaglia polar method.
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::int64_t Rng::poisson(double lambda) {
    if (lambda <= 0.0) {
        return 0;
    }
    std::poisson_distribution<std::int64_t> dist(lambda);
    return dist(engine_);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw DomainError("empty range");
    }
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    return dist(engine_);
}

void WeightSpec::validate() const {
    const bool ok = std::isfinite(a) && std::isfinite(b) && [&] {
        switch (kind) {
        case Kind::Constant:
            return a >= 0.0;
        case Kind::Bernoulli:
            return a >= 0.0 && a <= 1.0;
        case Kind::Gaussian:
            return b >= 0.0;
        case Kind::Poisson:
            return a >= 0.0;
        }
        return false;
    }();
    if (!ok) {
        throw DomainError("invalid weight specification");
    }
}

double WeightSpec::draw(Rng& rng) const {
    switch (kind) {
    case Kind::Constant:
        return a;
    case Kind::Bernoulli:
        return rng.bernoulli(a) ? 1.0 : 0.0;
    case Kind::Gaussian: {
        if (b == 0.0) {
            return std::max(a, 0.0);
        }
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const double w = rng.normal(a, b);
            if (w >= 0.0) {
                return w;
            }
        }
        return 0.0;
    }
    case Kind::Poisson:
        return static_cast<double>(rng.poisson(a));
    }
    return 0.0;
}

double WeightSpec::moment(int l) const {
    if (l < 0) {
        throw DomainError("moment order must be nonnegative");
    }
    if (l == 0) {
        return 1.0;
    }
    switch (kind) {
    case Kind::Constant:
        return std::pow(a, l);
    case Kind::Bernoulli:
        return a;
    case Kind::Gaussian: {
        // E[X^l] = mu E[X^{l-1}] + (l-1) sigma^2 E[X^{l-2}]
        double prev2 = 1.0;
        double prev1 = a;
        for (int k = 2; k <= l; ++k) {
            const double cur = a * prev1 + (k - 1) * b * b * prev2;
            prev2 = prev1;
            prev1 = cur;
        }
        return prev1;
    }
    case Kind::Poisson: {
        // Touchard polynomial: sum_k S(l, k) lambda^k.
        std::vector<std::vector<double>> stirling(static_cast<std::size_t>(l) + 1,
                                                  std::vector<double>(static_cast<std::size_t>(l) + 1, 0.0));
        stirling[0][0] = 1.0;
        for (std::size_t n = 1; n <= static_cast<std::size_t>(l); ++n) {
            for (std::size_t k = 1; k <= n; ++k) {
                stirling[n][k] = static_cast<double>(k) * stirling[n - 1][k] + stirling[n - 1][k - 1];
            }
        }
        double sum = 0.0;
        for (std::size_t k = 1; k <= static_cast<std::size_t>(l); ++k) {
            sum += stirling[static_cast<std::size_t>(l)][k] * std::pow(a, static_cast<double>(k));
        }
        return sum;
    }
    }
    return 0.0;
}

Matrix sbm_probabilities(std::span<const std::size_t> block_sizes, const Matrix& q) {
    const auto labels = block_labels(block_sizes);
    if (q.rows() != static_cast<Eigen::Index>(block_sizes.size()) || q.cols() != q.rows()) {
        throw DimensionError("block probability matrix does not match the number of blocks");
    }
    const auto n = static_cast<Eigen::Index>(labels.size());
    Matrix p(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            p(i, j) = i == j ? 0.0
                             : q(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]),
                                 static_cast<Eigen::Index>(labels[static_cast<std::size_t>(j)]));
        }
    }
    return p;
}

GraphSnapshot sample_bernoulli(const Matrix& p, bool directed, Rng& rng, std::int64_t t) {
    if (p.rows() != p.cols() || p.rows() == 0) {
        throw DimensionError("probability matrix must be square and non-empty");
    }
    const Eigen::Index n = p.rows();
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = directed ? 0 : i + 1; j < n; ++j) {
            if (i == j) {
                continue;
            }
            const double prob = checked_probability(p(i, j));
            if (rng.uniform() < prob) {
                a(i, j) = 1.0;
                if (!directed) {
                    a(j, i) = 1.0;
                }
            }
        }
    }
    return GraphSnapshot(std::move(a), directed, t);
}

GraphSnapshot sample_rdpg(const Matrix& x, Rng& rng, std::int64_t t) {
    return sample_bernoulli(x * x.transpose(), false, rng, t);
}

GraphSnapshot sample_drdpg(const Matrix& x_left, const Matrix& x_right, Rng& rng, std::int64_t t) {
    if (x_left.rows() != x_right.rows() || x_left.cols() != x_right.cols()) {
        throw DimensionError("left and right latent positions must have the same shape");
    }
    return sample_bernoulli(x_left * x_right.transpose(), true, rng, t);
}

GraphSnapshot sample_er(std::size_t n, double p, Rng& rng, std::int64_t t) {
    checked_probability(p);
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix probs = Matrix::Constant(nn, nn, p);
    probs.diagonal().setZero();
    return sample_bernoulli(probs, false, rng, t);
}

GraphSnapshot sample_sbm(std::span<const std::size_t> block_sizes, const Matrix& q, Rng& rng, std::int64_t t) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (Eigen::Index i = 0; i < q.rows(); ++i) {
            checked_probability(q(i, j));
        }
    }
    return sample_bernoulli(sbm_probabilities(block_sizes, q), false, rng, t);
}

GraphSnapshot sample_weighted_sbm(std::span<const std::size_t> block_sizes, double p,
                                  const std::vector<std::vector<WeightSpec>>& weights, Rng& rng, std::int64_t t) {
    const double prob = checked_probability(p);
    const auto labels = block_labels(block_sizes);
    if (weights.size() != block_sizes.size()) {
        throw DimensionError("weight specification does not match the number of blocks");
    }
    for (const auto& row : weights) {
        if (row.size() != block_sizes.size()) {
            throw DimensionError("weight specification does not match the number of blocks");
        }
        for (const auto& spec : row) {
            spec.validate();
        }
    }
    const auto n = static_cast<Eigen::Index>(labels.size());
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (rng.uniform() < prob) {
                const auto& spec = weights[labels[static_cast<std::size_t>(i)]][labels[static_cast<std::size_t>(j)]];
                const double w = spec.draw(rng);
                a(i, j) = w;
                a(j, i) = w;
            }
        }
    }
    return GraphSnapshot(std::move(a), false, t);
}

Matrix weighted_sbm_moment(std::span<const std::size_t> block_sizes, double p,
                           const std::vector<std::vector<WeightSpec>>& weights, int l) {
    const auto labels = block_labels(block_sizes);
    const auto n = static_cast<Eigen::Index>(labels.size());
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i != j) {
                out(i, j) =
                    p * weights[labels[static_cast<std::size_t>(i)]][labels[static_cast<std::size_t>(j)]].moment(l);
            }
        }
    }
    return out;
}

} // namespace rdpg
