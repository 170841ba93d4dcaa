// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numeric>
#include <vector>

#include "rdpg/error.hpp"
#include "rdpg/generators.hpp"
#include "rdpg/graph.hpp"

using namespace rdpg;

namespace {

Matrix sym3(double a, double b, double c) {
    Matrix m(3, 3);
    m << 0, a, b, a, 0, c, b, c, 0;
    return m;
}

} // namespace

TEST_SUITE("graph") {

TEST_CASE("snapshot validation") {
    CHECK_NOTHROW(GraphSnapshot(sym3(1, 2, 3), false));
    Matrix asym = sym3(1, 2, 3);
    asym(0, 1) = 5;
    CHECK_THROWS_AS(GraphSnapshot(asym, false), DomainError);
    CHECK_NOTHROW(GraphSnapshot(asym, true));

    Matrix diag = sym3(1, 2, 3);
    diag(1, 1) = 1;
    CHECK_THROWS_AS(GraphSnapshot(diag, true), DomainError);

    Matrix neg = sym3(1, -2, 3);
    CHECK_THROWS_AS(GraphSnapshot(neg, false), DomainError);

    Matrix nan = sym3(1, 2, 3);
    nan(0, 2) = nan(2, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(GraphSnapshot(nan, false), DomainError);

    CHECK_THROWS_AS(GraphSnapshot(Matrix::Zero(2, 3), true), DimensionError);
    CHECK_THROWS_AS(GraphSnapshot(Matrix(0, 0), true), DimensionError);
}

TEST_CASE("undirected layout enumerates the strict upper triangle row-major") {
    const ResidualLayout layout(3, false);
    CHECK(layout.size() == 3);
    const Vector v = vec_residual(sym3(1.5, 2.5, 3.5), layout);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.5);
    CHECK(v[1] == 2.5);
    CHECK(v[2] == 3.5);
    CHECK(*layout.position(0, 2) == 1);
    CHECK_FALSE(layout.position(2, 0).has_value());
    CHECK_FALSE(layout.position(1, 1).has_value());
    CHECK(layout.pair(2) == std::pair<std::size_t, std::size_t>{1, 2});
}

TEST_CASE("directed layout enumerates every off-diagonal pair row-major") {
    const ResidualLayout layout(3, true);
    CHECK(layout.size() == 6);
    Matrix m(3, 3);
    m << 0, 12, 13, 21, 0, 23, 31, 32, 0;
    const Vector v = vec_residual(m, layout);
    const std::vector<double> expected = {12, 13, 21, 23, 31, 32};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(v[static_cast<Eigen::Index>(i)] == expected[i]);
        const auto [a, b] = layout.pair(i);
        CHECK(*layout.position(a, b) == i);
    }
}

TEST_CASE("zero matrix vectorizes to zeros of length r") {
    for (const bool directed : {false, true}) {
        const ResidualLayout layout(7, directed);
        const Vector v = vec_residual(Matrix::Zero(7, 7), layout);
        CHECK(v.size() == static_cast<Eigen::Index>(directed ? 42 : 21));
        CHECK(v.isZero(0.0));
    }
}

TEST_CASE("vec_residual rejects a shape mismatch") {
    CHECK_THROWS_AS(vec_residual(Matrix::Zero(4, 4), ResidualLayout(3, false)), DimensionError);
    CHECK_THROWS_AS(unvec_residual(Vector::Zero(4), ResidualLayout(3, false)), DimensionError);
}

TEST_CASE("unvec then vec is the identity and norms obey the bound") {
    Rng rng(3);
    for (const bool directed : {false, true}) {
        const ResidualLayout layout(9, directed);
        Vector v(static_cast<Eigen::Index>(layout.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = rng.normal();
        }
        const Matrix m = unvec_residual(v, layout);
        CHECK((vec_residual(m, layout) - v).norm() == doctest::Approx(0.0));
        if (directed) {
            CHECK(v.norm() == doctest::Approx(m.norm()));
        } else {
            CHECK(m.isApprox(m.transpose()));
            CHECK(v.norm() <= m.norm());
        }
    }
}

TEST_CASE("entrywise power") {
    Rng rng(5);
    const auto binary = sample_er(6, 0.5, rng);
    for (int l = 1; l <= 4; ++l) {
        CHECK(entrywise_power(binary, l) == binary.weights());
    }
    const GraphSnapshot two(sym3(2, 2, 2), false);
    CHECK(entrywise_power(two, 3)(0, 1) == 8.0);
    CHECK(entrywise_power(two, 3)(1, 1) == 0.0);

    Matrix w(4, 4);
    w << 0, 0.5, 1.5, 2.0, 0.5, 0, 3.0, 0.25, 1.5, 3.0, 0, 1.0, 2.0, 0.25, 1.0, 0;
    const Matrix sq = entrywise_power(GraphSnapshot(w, false), 2);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(sq(i, j) == w(i, j) * w(i, j));
        }
    }
    CHECK_THROWS_AS(entrywise_power(two, 0), DomainError);
}

TEST_CASE("mean adjacency") {
    const Matrix a = sym3(1, 2, 3);
    GraphSequence one;
    one.push_back(GraphSnapshot(a, false, 0));
    CHECK(mean_adjacency(one) == a);

    GraphSequence two;
    two.push_back(GraphSnapshot(a, false, 0));
    two.push_back(GraphSnapshot(3.0 * a, false, 1));
    CHECK(mean_adjacency(two).isApprox(2.0 * a));

    CHECK_THROWS_AS(mean_adjacency(GraphSequence{}), UsageError);
}

TEST_CASE("mean of 50 ER(0.5) samples stays within the Hoeffding band") {
    GraphSequence seq;
    for (int t = 0; t < 50; ++t) {
        Rng rng = Rng::stream(17, static_cast<std::uint64_t>(t));
        seq.push_back(sample_er(30, 0.5, rng, t));
    }
    const Matrix mean = mean_adjacency(seq);
    for (int i = 0; i < 30; ++i) {
        for (int j = 0; j < 30; ++j) {
            if (i != j) {
                CHECK(std::abs(mean(i, j) - 0.5) <= 0.25);
            }
        }
    }
}

TEST_CASE("mean adjacency is permutation-equivariant") {
    Rng rng(8);
    GraphSequence seq;
    GraphSequence permuted;
    std::vector<std::size_t> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.begin() + 5);
    std::swap(perm[7], perm[11]);
    for (int t = 0; t < 5; ++t) {
        const auto s = sample_er(12, 0.4, rng, t);
        seq.push_back(s);
        permuted.push_back(GraphSnapshot(permute_nodes(s.weights(), perm), false, t));
    }
    CHECK(permute_nodes(mean_adjacency(seq), perm).isApprox(mean_adjacency(permuted)));
}

TEST_CASE("sequence invariants") {
    GraphSequence seq;
    seq.push_back(GraphSnapshot(sym3(1, 1, 1), false, 5));
    CHECK_THROWS_AS(seq.push_back(GraphSnapshot(sym3(1, 1, 1), false, 5)), UsageError);
    CHECK_THROWS_AS(seq.push_back(GraphSnapshot(Matrix::Zero(4, 4), false, 6)), DimensionError);
    CHECK_THROWS_AS(seq.push_back(GraphSnapshot(sym3(1, 1, 1), true, 6)), DimensionError);
    seq.push_back(GraphSnapshot(sym3(0, 1, 0), false, 9));
    const auto s = seq.slice(1, 2);
    CHECK(s.size() == 1);
    CHECK(s[0].time() == 9);
    CHECK_THROWS_AS(seq.slice(2, 1), UsageError);
}

} // TEST_SUITE
