// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdpg/graph.hpp"

namespace rdpg {

enum class EmbeddingKind { Undirected, Directed, WeightedMoment };

/// What to do when one of the retained eigenvalues is negative.
enum class NegativeEigenvalues {
    Error, ///< throw IndefiniteSpectrumError
    Clamp  ///< replace the eigenvalue with zero (keeps the reconstruction PSD)
};

/// Latent positions. Undirected and weighted-moment embeddings use `left`
/// only; directed embeddings carry the outgoing (`left`) and incoming
/// (`right`) factors.
struct Embedding {
    EmbeddingKind kind = EmbeddingKind::Undirected;
    Matrix left;
    Matrix right;
    /// Retained eigenvalues (or singular values), descending.
    Vector spectrum;
    /// Moment order for weighted-moment embeddings, 1 otherwise.
    int order = 1;

    int dim() const noexcept { return static_cast<int>(left.cols()); }
    std::size_t n_nodes() const noexcept { return static_cast<std::size_t>(left.rows()); }

    /// X Xᵀ, or Xˡ (Xʳ)ᵀ for directed embeddings.
    Matrix reconstruct() const;
};

struct ScreeReport {
    std::vector<double> values;
    int d = 1;
    std::string method;
};

/// Adjacency spectral embedding: X = V Λ^{1/2} from the d algebraically largest
/// eigenpairs of the symmetric matrix `s`. Eigenvectors are sign-normalized so
/// that each column's largest-magnitude entry is positive.
Embedding ase(const Matrix& s, int d, NegativeEigenvalues policy = NegativeEigenvalues::Error);

/// Top-d SVD split evenly: Xˡ = U D^{1/2}, Xʳ = V D^{1/2}.
Embedding directed_ase(const Matrix& a, int d);

/// ASE of the mean entry-wise l-th power over an undirected sequence.
Embedding weighted_ase(std::span<const GraphSnapshot> seq, int l, int d,
                       NegativeEigenvalues policy = NegativeEigenvalues::Error);
Embedding weighted_ase(const GraphSequence& seq, int l, int d,
                       NegativeEigenvalues policy = NegativeEigenvalues::Error);

/// Magnitudes of the eigenvalues of a symmetric matrix (singular values when
/// `directed`), in decreasing order. This is the scree profile fed to
/// select_dimension.
std::vector<double> scree_spectrum(const Matrix& a, bool directed);

/// Profile-likelihood elbow of a decreasing spectrum (two Gaussian segments
/// with a pooled variance). The first elbow is returned; ties go to the smaller
/// dimension. `d_extra` is added afterwards and the result clamped to the
/// spectrum length.
ScreeReport select_dimension(std::span<const double> spectrum, int d_extra = 0);

/// Profile log-likelihood of every split q = 1..n (index q-1). Exposed for tests.
std::vector<double> profile_likelihood(std::span<const double> spectrum);

/// Joint embedding of two symmetric matrices through the ASE of
/// [[A1, (A1+A2)/2], [(A1+A2)/2, A2]]. Returns the rows for A1 and A2.
std::pair<Matrix, Matrix> omnibus_embed(const Matrix& a1, const Matrix& a2, int d,
                                        NegativeEigenvalues policy = NegativeEigenvalues::Error);

struct ProcrustesResult {
    Matrix rotation;
    double error = 0.0;
};

/// Orthogonal W minimizing ‖XW − Y‖_F, and the attained distance.
ProcrustesResult procrustes_align(const Matrix& x, const Matrix& y);

} // namespace rdpg
