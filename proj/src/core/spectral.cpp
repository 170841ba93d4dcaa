// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdpg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rdpg/error.hpp"

namespace rdpg {
namespace {

void check_dimension(Eigen::Index n, int d) {
    if (d < 1 || d > n) {
        throw DimensionError("embedding dimension " + std::to_string(d) + " outside [1, " + std::to_string(n) + "]");
    }
}

void check_finite(const Matrix& a) {
    if (!a.allFinite()) {
        throw DomainError("matrix has non-finite entries");
    }
}

void check_symmetric(const Matrix& s) {
    if (s.rows() != s.cols()) {
        throw DimensionError("matrix must be square");
    }
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw DomainError("matrix must be symmetric");
    }
}

// Flip column signs so the largest-magnitude entry of each column of `basis`
// is positive; apply the same flips to `partner` when given.
void normalize_signs(Matrix& basis, Matrix* partner) {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < basis.rows(); ++i) {
            // Near-ties resolved toward the lower index so the choice is stable
            // under rounding noise.
            const double mag = std::abs(basis(i, c));
            if (mag > best * (1.0 + 1e-9)) {
                best = mag;
                arg = i;
            }
        }
        if (basis(arg, c) < 0.0) {
            basis.col(c) *= -1.0;
            if (partner != nullptr) {
                partner->col(c) *= -1.0;
            }
        }
    }
}

} // namespace

Matrix Embedding::reconstruct() const {
    if (kind == EmbeddingKind::Directed) {
        return left * right.transpose();
    }
    return left * left.transpose();
}

Embedding ase(const Matrix& s, int d, NegativeEigenvalues policy) {
    check_symmetric(s);
    check_finite(s);
    check_dimension(s.rows(), d);

    Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
    if (solver.info() != Eigen::Success) {
        throw Error("symmetric eigendecomposition did not converge");
    }
    // Eigen returns ascending eigenvalues; take the last d in reverse.
    const Eigen::Index n = s.rows();
    Matrix vectors(n, d);
    Vector values(d);
    for (int c = 0; c < d; ++c) {
        values[c] = solver.eigenvalues()[n - 1 - c];
        vectors.col(c) = solver.eigenvectors().col(n - 1 - c);
    }
    for (int c = 0; c < d; ++c) {
        if (values[c] < 0.0) {
            if (policy == NegativeEigenvalues::Error) {
                throw IndefiniteSpectrumError("retained eigenvalue " + std::to_string(c + 1) + " is negative (" +
                                              std::to_string(values[c]) + ")");
            }
            values[c] = 0.0;
        }
    }
    normalize_signs(vectors, nullptr);

    Embedding out;
    out.kind = EmbeddingKind::Undirected;
    out.left = vectors * values.cwiseSqrt().asDiagonal();
    out.spectrum = values;
    return out;
}

Embedding directed_ase(const Matrix& a, int d) {
    if (a.rows() != a.cols()) {
        throw DimensionError("adjacency matrix must be square");
    }
    check_finite(a);
    check_dimension(a.rows(), d);

    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix u = svd.matrixU().leftCols(d);
    Matrix v = svd.matrixV().leftCols(d);
    Vector sv = svd.singularValues().head(d);
    normalize_signs(u, &v);

    Embedding out;
    out.kind = EmbeddingKind::Directed;
    const Vector root = sv.cwiseSqrt();
    out.left = u * root.asDiagonal();
    out.right = v * root.asDiagonal();
    out.spectrum = sv;
    return out;
}

Embedding weighted_ase(std::span<const GraphSnapshot> seq, int l, int d, NegativeEigenvalues policy) {
    if (!seq.empty() && seq.front().directed()) {
        throw UsageError("weighted_ase expects an undirected sequence");
    }
    Embedding out = ase(mean_entrywise_power(seq, l), d, policy);
    out.kind = EmbeddingKind::WeightedMoment;
    out.order = l;
    return out;
}

Embedding weighted_ase(const GraphSequence& seq, int l, int d, NegativeEigenvalues policy) {
    return weighted_ase(seq.snapshots(), l, d, policy);
}

std::vector<double> scree_spectrum(const Matrix& a, bool directed) {
    check_finite(a);
    std::vector<double> values;
    if (directed) {
        Eigen::BDCSVD<Matrix> svd(a);
        const Vector& sv = svd.singularValues();
        values.assign(sv.data(), sv.data() + sv.size());
    } else {
        check_symmetric(a);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
        const Vector& ev = solver.eigenvalues();
        values.reserve(static_cast<std::size_t>(ev.size()));
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            values.push_back(std::abs(ev[i]));
        }
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
}

std::vector<double> profile_likelihood(std::span<const double> spectrum) {
    const std::size_t n = spectrum.size();
    std::vector<double> ll(n, -std::numeric_limits<double>::infinity());
    if (n < 2) {
        if (n == 1) {
            ll[0] = 0.0;
        }
        return ll;
    }
    for (std::size_t q = 1; q <= n; ++q) {
        const auto first = spectrum.subspan(0, q);
        const auto second = spectrum.subspan(q);
        if (first.size() == 1 && second.size() == 1) {
            continue;
        }
        auto mean = [](std::span<const double> xs) {
            double s = 0.0;
            for (double x : xs) {
                s += x;
            }
            return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
        };
        auto sum_sq = [](std::span<const double> xs, double mu) {
            double s = 0.0;
            for (double x : xs) {
                s += (x - mu) * (x - mu);
            }
            return s;
        };
        const double ss = sum_sq(first, mean(first)) + sum_sq(second, mean(second));
        const double dof = static_cast<double>(n) - (second.empty() ? 1.0 : 2.0);
        const double var = ss / dof;
        if (var <= 0.0) {
            ll[q - 1] = std::numeric_limits<double>::infinity();
            continue;
        }
        ll[q - 1] = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi * var) - 0.5 * ss / var;
    }
    return ll;
}

ScreeReport select_dimension(std::span<const double> spectrum, int d_extra) {
    if (spectrum.empty()) {
        throw UsageError("cannot select a dimension from an empty spectrum");
    }
    if (d_extra < 0) {
        throw DomainError("d_extra must be nonnegative");
    }
    ScreeReport report;
    report.values.assign(spectrum.begin(), spectrum.end());
    report.method = "profile-likelihood";
    int best = 1;
    if (spectrum.size() == 2) {
        best = 1;
    } else if (spectrum.size() > 2) {
        const auto ll = profile_likelihood(spectrum);
        double best_ll = -std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < ll.size(); ++q) {
            if (ll[q] > best_ll) {
                best_ll = ll[q];
                best = static_cast<int>(q) + 1;
            }
        }
    }
    report.d = std::min(best + d_extra, static_cast<int>(spectrum.size()));
    return report;
}

std::pair<Matrix, Matrix> omnibus_embed(const Matrix& a1, const Matrix& a2, int d, NegativeEigenvalues policy) {
    if (a1.rows() != a2.rows() || a1.cols() != a2.cols()) {
        throw DimensionError("omnibus inputs must have the same shape");
    }
    check_symmetric(a1);
    check_symmetric(a2);
    const Eigen::Index n = a1.rows();
    Matrix m(2 * n, 2 * n);
    const Matrix avg = 0.5 * (a1 + a2);
    m.topLeftCorner(n, n) = a1;
    m.topRightCorner(n, n) = avg;
    m.bottomLeftCorner(n, n) = avg;
    m.bottomRightCorner(n, n) = a2;
    const Embedding joint = ase(m, d, policy);
    return {joint.left.topRows(n), joint.left.bottomRows(n)};
}

ProcrustesResult procrustes_align(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimensionError("procrustes inputs must have matching shapes");
    }
    Eigen::JacobiSVD<Matrix> svd(x.transpose() * y, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ProcrustesResult out;
    out.rotation = svd.matrixU() * svd.matrixV().transpose();
    out.error = (x * out.rotation - y).norm();
    return out;
}

} // namespace rdpg
