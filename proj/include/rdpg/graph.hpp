// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rdpg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One time-indexed adjacency matrix. Dense, nonnegative and hollow; symmetric
/// unless `directed()`. Immutable once built.
class GraphSnapshot {
public:
    /// Validates the invariants and throws DimensionError / DomainError.
    GraphSnapshot(Matrix weights, bool directed, std::int64_t t = 0);

    std::size_t n_nodes() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
    bool directed() const noexcept { return directed_; }
    std::int64_t time() const noexcept { return t_; }
    const Matrix& weights() const noexcept { return weights_; }
    double operator()(std::size_t i, std::size_t j) const { return weights_(i, j); }

    /// Same matrix, new timestamp.
    GraphSnapshot with_time(std::int64_t t) const;

private:
    Matrix weights_;
    bool directed_;
    std::int64_t t_;
};

/// Bijection between the off-diagonal pairs that carry information and
/// positions 0..r-1. Undirected layouts use the strict upper triangle;
/// directed ones every off-diagonal entry. Pairs are enumerated row-major.
class ResidualLayout {
public:
    /// Single-node layout with no pairs.
    ResidualLayout() : ResidualLayout(1, false) {}
    ResidualLayout(std::size_t n_nodes, bool directed);

    std::size_t n_nodes() const noexcept { return n_; }
    bool directed() const noexcept { return directed_; }
    std::size_t size() const noexcept { return r_; }

    /// Position of (i, j); nullopt for the diagonal and, in undirected
    /// layouts, for the lower triangle.
    std::optional<std::size_t> position(std::size_t i, std::size_t j) const noexcept;
    std::pair<std::size_t, std::size_t> pair(std::size_t position) const;

    friend bool operator==(const ResidualLayout&, const ResidualLayout&) = default;

private:
    std::size_t n_;
    bool directed_;
    std::size_t r_;
};

/// Ordered snapshots of identical shape and directedness with strictly
/// increasing timestamps.
class GraphSequence {
public:
    GraphSequence() = default;
    explicit GraphSequence(std::vector<GraphSnapshot> snapshots);

    void push_back(GraphSnapshot snapshot);

    std::size_t size() const noexcept { return snapshots_.size(); }
    bool empty() const noexcept { return snapshots_.empty(); }
    std::size_t n_nodes() const noexcept { return empty() ? 0 : snapshots_.front().n_nodes(); }
    bool directed() const noexcept { return !empty() && snapshots_.front().directed(); }

    const GraphSnapshot& operator[](std::size_t i) const { return snapshots_[i]; }
    const GraphSnapshot& at(std::size_t i) const { return snapshots_.at(i); }
    auto begin() const noexcept { return snapshots_.begin(); }
    auto end() const noexcept { return snapshots_.end(); }
    std::span<const GraphSnapshot> snapshots() const noexcept { return snapshots_; }

    /// Copy of snapshots [first, last).
    GraphSequence slice(std::size_t first, std::size_t last) const;

private:
    std::vector<GraphSnapshot> snapshots_;
};

/// Entries of `m` at the layout's pairs, in layout order.
Vector vec_residual(const Matrix& m, const ResidualLayout& layout);

/// Inverse of vec_residual onto hollow matrices (mirrored when undirected).
Matrix unvec_residual(const Vector& v, const ResidualLayout& layout);

/// Entry-wise l-th power, l >= 1.
Matrix entrywise_power(const GraphSnapshot& a, int l);

/// Arithmetic mean of the snapshot matrices. Throws UsageError when empty.
Matrix mean_adjacency(std::span<const GraphSnapshot> snapshots);
Matrix mean_adjacency(const GraphSequence& seq);

/// Mean of entry-wise l-th powers across snapshots.
Matrix mean_entrywise_power(std::span<const GraphSnapshot> snapshots, int l);

/// Returns `m` with rows and columns permuted: out(perm[i], perm[j]) = m(i, j).
Matrix permute_nodes(const Matrix& m, std::span<const std::size_t> perm);

} // namespace rdpg
