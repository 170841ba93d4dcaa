// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdpg/graph.hpp"

#include <cmath>
#include <string>

#include "rdpg/error.hpp"

namespace rdpg {

GraphSnapshot::GraphSnapshot(Matrix weights, bool directed, std::int64_t t)
    : weights_(std::move(weights)), directed_(directed), t_(t) {
    const auto n = weights_.rows();
    if (n == 0 || weights_.cols() != n) {
        throw DimensionError("adjacency matrix must be square and non-empty, got " +
                             std::to_string(weights_.rows()) + "x" + std::to_string(weights_.cols()));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w = weights_(i, j);
            if (!std::isfinite(w) || w < 0.0) {
                throw DomainError("adjacency entries must be finite and nonnegative (entry " +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
        if (weights_(j, j) != 0.0) {
            throw DomainError("adjacency matrix must have a zero diagonal (node " + std::to_string(j) + ")");
        }
    }
    if (!directed_) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = j + 1; i < n; ++i) {
                if (weights_(i, j) != weights_(j, i)) {
                    throw DomainError("undirected adjacency matrix is not symmetric at " + std::to_string(i) + "," +
                                      std::to_string(j));
                }
            }
        }
    }
}

GraphSnapshot GraphSnapshot::with_time(std::int64_t t) const {
    GraphSnapshot copy = *this;
    copy.t_ = t;
    return copy;
}

ResidualLayout::ResidualLayout(std::size_t n_nodes, bool directed)
    : n_(n_nodes), directed_(directed), r_(directed ? n_nodes * (n_nodes - 1) : n_nodes * (n_nodes - 1) / 2) {
    if (n_nodes == 0) {
        throw DimensionError("layout needs at least one node");
    }
}

std::optional<std::size_t> ResidualLayout::position(std::size_t i, std::size_t j) const noexcept {
    if (i >= n_ || j >= n_ || i == j) {
        return std::nullopt;
    }
    if (directed_) {
        return i * (n_ - 1) + (j < i ? j : j - 1);
    }
    if (j < i) {
        return std::nullopt;
    }
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> ResidualLayout::pair(std::size_t position) const {
    if (position >= r_) {
        throw DimensionError("layout position " + std::to_string(position) + " out of range");
    }
    if (directed_) {
        const std::size_t i = position / (n_ - 1);
        const std::size_t rem = position % (n_ - 1);
        return {i, rem < i ? rem : rem + 1};
    }
    std::size_t i = 0;
    std::size_t row_len = n_ - 1;
    while (position >= row_len) {
        position -= row_len;
        ++i;
        --row_len;
    }
    return {i, i + 1 + position};
}

GraphSequence::GraphSequence(std::vector<GraphSnapshot> snapshots) {
    snapshots_.reserve(snapshots.size());
    for (auto& s : snapshots) {
        push_back(std::move(s));
    }
}

void GraphSequence::push_back(GraphSnapshot snapshot) {
    if (!snapshots_.empty()) {
        const auto& last = snapshots_.back();
        if (snapshot.n_nodes() != last.n_nodes() || snapshot.directed() != last.directed()) {
            throw DimensionError("snapshot shape or directedness differs from the sequence");
        }
        if (snapshot.time() <= last.time()) {
            throw UsageError("snapshot timestamps must be strictly increasing (got " + std::to_string(snapshot.time()) +
                             " after " + std::to_string(last.time()) + ")");
        }
    }
    snapshots_.push_back(std::move(snapshot));
}

GraphSequence GraphSequence::slice(std::size_t first, std::size_t last) const {
    if (first > last || last > snapshots_.size()) {
        throw UsageError("invalid sequence slice");
    }
    GraphSequence out;
    out.snapshots_.assign(snapshots_.begin() + static_cast<std::ptrdiff_t>(first),
                          snapshots_.begin() + static_cast<std::ptrdiff_t>(last));
    return out;
}

Vector vec_residual(const Matrix& m, const ResidualLayout& layout) {
    const auto n = static_cast<Eigen::Index>(layout.n_nodes());
    if (m.rows() != n || m.cols() != n) {
        throw DimensionError("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             " but layout expects " + std::to_string(n) + "x" + std::to_string(n));
    }
    Vector out(static_cast<Eigen::Index>(layout.size()));
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = layout.directed() ? 0 : i + 1; j < n; ++j) {
            if (i != j) {
                out[pos++] = m(i, j);
            }
        }
    }
    return out;
}

Matrix unvec_residual(const Vector& v, const ResidualLayout& layout) {
    if (static_cast<std::size_t>(v.size()) != layout.size()) {
        throw DimensionError("vector length does not match layout");
    }
    const auto n = static_cast<Eigen::Index>(layout.n_nodes());
    Matrix out = Matrix::Zero(n, n);
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = layout.directed() ? 0 : i + 1; j < n; ++j) {
            if (i == j) {
                continue;
            }
            out(i, j) = v[pos];
            if (!layout.directed()) {
                out(j, i) = v[pos];
            }
            ++pos;
        }
    }
    return out;
}

Matrix entrywise_power(const GraphSnapshot& a, int l) {
    if (l < 1) {
        throw DomainError("moment order must be >= 1");
    }
    Matrix out = a.weights();
    for (int p = 1; p < l; ++p) {
        out.array() *= a.weights().array();
    }
    return out;
}

Matrix mean_entrywise_power(std::span<const GraphSnapshot> snapshots, int l) {
    if (snapshots.empty()) {
        throw UsageError("cannot average an empty sequence");
    }
    if (l < 1) {
        throw DomainError("moment order must be >= 1");
    }
    const auto n = static_cast<Eigen::Index>(snapshots.front().n_nodes());
    Matrix sum = Matrix::Zero(n, n);
    for (const auto& s : snapshots) {
        if (static_cast<Eigen::Index>(s.n_nodes()) != n) {
            throw DimensionError("snapshots of different sizes");
        }
        if (l == 1) {
            sum += s.weights();
        } else {
            sum += entrywise_power(s, l);
        }
    }
    return sum / static_cast<double>(snapshots.size());
}

Matrix mean_adjacency(std::span<const GraphSnapshot> snapshots) { return mean_entrywise_power(snapshots, 1); }

Matrix mean_adjacency(const GraphSequence& seq) { return mean_adjacency(seq.snapshots()); }

Matrix permute_nodes(const Matrix& m, std::span<const std::size_t> perm) {
    if (static_cast<Eigen::Index>(perm.size()) != m.rows() || m.rows() != m.cols()) {
        throw DimensionError("permutation size does not match matrix");
    }
    const auto n = m.rows();
    Matrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            out(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
                static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)])) = m(i, j);
        }
    }
    return out;
}

} // namespace rdpg
