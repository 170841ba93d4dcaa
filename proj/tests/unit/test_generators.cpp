// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "rdpg/error.hpp"
#include "rdpg/generators.hpp"

using namespace rdpg;

namespace {

// Empirical mean of `draws` samples against the expectation matrix, with the
// 4·sqrt(maxvar/m) entrywise band.
template <typename Sampler>
void check_mean_band(const Matrix& expected, double max_var, int draws, Sampler&& sample) {
    Matrix sum = Matrix::Zero(expected.rows(), expected.cols());
    for (int t = 0; t < draws; ++t) {
        sum += sample(t).weights();
    }
    const Matrix mean = sum / draws;
    const double band = 4.0 * std::sqrt(max_var / draws);
    CHECK((mean - expected).cwiseAbs().maxCoeff() <= band);
}

} // namespace

TEST_SUITE("generators") {

TEST_CASE("same seed, same stream") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    Rng s1 = Rng::stream(7, 3);
    Rng s2 = Rng::stream(7, 3);
    Rng s3 = Rng::stream(7, 4);
    const auto x1 = sample_er(20, 0.5, s1);
    const auto x2 = sample_er(20, 0.5, s2);
    const auto x3 = sample_er(20, 0.5, s3);
    CHECK(x1.weights() == x2.weights());
    CHECK(x1.weights() != x3.weights());
}

TEST_CASE("uniform and normal draws") {
    Rng rng(1);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("rdpg with constant latent position is ER") {
    const int n = 40;
    const double p = 0.3;
    const Matrix x = Matrix::Constant(n, 1, std::sqrt(p));
    Matrix expected = Matrix::Constant(n, n, p);
    expected.diagonal().setZero();
    check_mean_band(expected, p * (1 - p), 500, [&](int t) {
        Rng rng = Rng::stream(5, static_cast<std::uint64_t>(t));
        return sample_rdpg(x, rng);
    });
}

TEST_CASE("a zero latent row isolates the node") {
    Matrix x = Matrix::Constant(10, 2, 0.6);
    x.row(3).setZero();
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto a = sample_rdpg(x, rng);
        CHECK(a.weights().row(3).isZero(0.0));
        CHECK(a.weights().col(3).isZero(0.0));
    }
}

TEST_CASE("rdpg rejects inner products outside [0, 1]") {
    Rng rng(3);
    CHECK_THROWS_AS(sample_rdpg(Matrix::Constant(4, 1, 1.5), rng), DomainError);
    Matrix x(2, 1);
    x << 1.0, -0.5;
    CHECK_THROWS_AS(sample_rdpg(x, rng), DomainError);
}

TEST_CASE("sbm block densities") {
    const std::vector<std::size_t> blocks = {100, 100};
    Matrix q(2, 2);
    q << 0.6, 0.4, 0.4, 0.6;
    Rng rng(77);
    const auto a = sample_sbm(blocks, q, rng);
    double within = 0.0;
    double cross = 0.0;
    for (int i = 0; i < 200; ++i) {
        for (int j = i + 1; j < 200; ++j) {
            ((i < 100) == (j < 100) ? within : cross) += a(i, j);
        }
    }
    const double n_within = 2 * 100 * 99 / 2.0;
    const double n_cross = 100 * 100;
    CHECK(std::abs(within / n_within - 0.6) < 3 * std::sqrt(0.24 / n_within));
    CHECK(std::abs(cross / n_cross - 0.4) < 3 * std::sqrt(0.24 / n_cross));
    const Matrix p = sbm_probabilities(blocks, q);
    CHECK(p(0, 1) == 0.6);
    CHECK(p(0, 150) == 0.4);
    CHECK(p(5, 5) == 0.0);
}

TEST_CASE("sbm with Q = pJ matches ER edge counts") {
    const std::vector<std::size_t> blocks = {20, 30};
    const Matrix q = Matrix::Constant(2, 2, 0.5);
    double total = 0.0;
    const int draws = 200;
    for (int t = 0; t < draws; ++t) {
        Rng rng = Rng::stream(8, static_cast<std::uint64_t>(t));
        total += sample_sbm(blocks, q, rng).weights().sum() / 2.0;
    }
    const double pairs = 50.0 * 49.0 / 2.0;
    const double mean = total / draws;
    CHECK(std::abs(mean - 0.5 * pairs) < 3.0 * std::sqrt(0.25 * pairs / draws));
}

TEST_CASE("degenerate probabilities") {
    Rng rng(1);
    CHECK(sample_er(10, 0.0, rng).weights().isZero(0.0));
    Matrix full = Matrix::Ones(10, 10);
    full.diagonal().setZero();
    CHECK(sample_er(10, 1.0, rng).weights() == full);
    CHECK_THROWS_AS(sample_er(10, 1.2, rng), DomainError);
    Matrix q(2, 2);
    q << 0.5, -0.1, -0.1, 0.5;
    CHECK_THROWS_AS(sample_sbm(std::vector<std::size_t>{2, 2}, q, rng), DomainError);
}

TEST_CASE("directed rdpg") {
    const int n = 30;
    const double p = 0.4;
    const Matrix x = Matrix::Constant(n, 1, std::sqrt(p));
    Rng rng(11);
    double out_sum = 0.0;
    const int draws = 200;
    for (int t = 0; t < draws; ++t) {
        const auto a = sample_drdpg(x, x, rng);
        CHECK(a.directed());
        out_sum += a.weights().rowwise().sum().mean();
    }
    const double expected = (n - 1) * p;
    CHECK(std::abs(out_sum / draws - expected) < 3.0 * std::sqrt((n - 1) * p * (1 - p) / (n * draws)));

    Matrix right = x;
    right.row(2).setZero();
    const auto a = sample_drdpg(x, right, rng);
    CHECK(a.weights().col(2).isZero(0.0));
}

TEST_CASE("directed rdpg mean of a rank-1 asymmetric P") {
    const int n = 8;
    Matrix xl(n, 1);
    Matrix xr(n, 1);
    for (int i = 0; i < n; ++i) {
        xl(i, 0) = 0.3 + 0.08 * i;
        xr(i, 0) = 0.9 - 0.07 * i;
    }
    Matrix expected = xl * xr.transpose();
    expected.diagonal().setZero();
    check_mean_band(expected, 0.25, 500, [&](int t) {
        Rng rng = Rng::stream(13, static_cast<std::uint64_t>(t));
        return sample_drdpg(xl, xr, rng);
    });
    Matrix sum = Matrix::Zero(n, n);
    for (int t = 0; t < 500; ++t) {
        Rng rng = Rng::stream(14, static_cast<std::uint64_t>(t));
        sum += sample_drdpg(xl, xr, rng).weights();
    }
    CHECK((sum / 500 - expected).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("weight moments") {
    // tests/oracles/frozen_values.py, "weight moments"
    const auto pois = WeightSpec::poisson(5.0);
    CHECK(pois.moment(1) == doctest::Approx(5.0));
    CHECK(pois.moment(2) == doctest::Approx(30.0));
    CHECK(pois.moment(3) == doctest::Approx(205.0));
    const auto gauss = WeightSpec::gaussian(5.0, 0.1);
    CHECK(gauss.moment(2) == doctest::Approx(25.01));
    CHECK(gauss.moment(3) == doctest::Approx(125.15));
    CHECK(WeightSpec::constant(2.0).moment(3) == 8.0);
    CHECK(WeightSpec::bernoulli(0.3).moment(4) == doctest::Approx(0.3));
    CHECK_THROWS_AS(WeightSpec::gaussian(1.0, -1.0).validate(), DomainError);
    CHECK_THROWS_AS(WeightSpec::poisson(-1.0).validate(), DomainError);
}

TEST_CASE("constant weights with p = 1 give c(J - I)") {
    const std::vector<std::size_t> blocks = {3, 4};
    const auto c = WeightSpec::constant(2.5);
    const std::vector<std::vector<WeightSpec>> specs = {{c, c}, {c, c}};
    Rng rng(1);
    Matrix expected = Matrix::Constant(7, 7, 2.5);
    expected.diagonal().setZero();
    CHECK(sample_weighted_sbm(blocks, 1.0, specs, rng).weights() == expected);
}

TEST_CASE("weighted sbm moments per block pair") {
    const std::vector<std::size_t> blocks = {20, 20};
    const auto g = WeightSpec::gaussian(5.0, 0.1);
    const auto po = WeightSpec::poisson(5.0);
    const std::vector<std::vector<WeightSpec>> specs = {{g, g}, {g, po}};
    const double p = 0.5;
    const int draws = 400;
    for (const int l : {1, 2}) {
        const Matrix expected = weighted_sbm_moment(blocks, p, specs, l);
        Matrix sum = Matrix::Zero(40, 40);
        Matrix sum_sq = Matrix::Zero(40, 40);
        for (int t = 0; t < draws; ++t) {
            Rng rng = Rng::stream(55, static_cast<std::uint64_t>(t));
            const Matrix a = sample_weighted_sbm(blocks, p, specs, rng).weights().array().pow(l);
            sum += a;
            sum_sq += a.cwiseAbs2();
        }
        // Block-pair averages of the per-entry means, each within 3 standard errors.
        const auto mean = sum / draws;
        for (const auto& [bi, bj] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
            double m = 0.0;
            double v = 0.0;
            int count = 0;
            for (int i = bi * 20; i < bi * 20 + 20; ++i) {
                for (int j = bj * 20; j < bj * 20 + 20; ++j) {
                    if (i < j) {
                        m += mean(i, j);
                        v += sum_sq(i, j) / draws - mean(i, j) * mean(i, j);
                        ++count;
                    }
                }
            }
            m /= count;
            const double se = std::sqrt(v / count / (static_cast<double>(draws) * count));
            const int i0 = bi * 20;
            const int j0 = bj * 20 + 1;
            CHECK(std::abs(m - expected(i0, j0)) < 3.0 * se + 1e-6);
        }
    }
}

TEST_CASE("gaussian weights are nonnegative") {
    Rng rng(6);
    const auto spec = WeightSpec::gaussian(0.1, 1.0);
    for (int i = 0; i < 10000; ++i) {
        REQUIRE(spec.draw(rng) >= 0.0);
    }
}

} // TEST_SUITE
